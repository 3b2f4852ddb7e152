//! Profile statistics and selected-vs-not-selected cohort summaries.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::indicators::IvProfile;
use crate::model::{Year, YearlyCitingCounts};

/// Number of observation years before a call used for fluctuation and
/// recent citing volume.
pub const YEARS_UNTIL_CALL: usize = 5;

pub fn profile_min(p: &IvProfile) -> Result<f64> {
    p.values().reduce(f64::min).ok_or(Error::EmptyProfile)
}

/// Whether every point is strictly above `threshold`.
pub fn all_above(p: &IvProfile, threshold: f64) -> Result<bool> {
    if p.is_empty() {
        return Err(Error::EmptyProfile);
    }
    Ok(p.values().all(|v| v > threshold))
}

/// Max minus min over the `k` observation years ending at `call_year`.
/// `None` unless all `k` of those years have a point.
pub fn profile_fluctuation(p: &IvProfile, call_year: Year, k: usize) -> Result<Option<f64>> {
    if k < 2 {
        return Err(Error::InvalidSpan { k });
    }
    let from = call_year - k as Year + 1;
    let span: Vec<f64> = p
        .points
        .iter()
        .filter(|pt| (from..=call_year).contains(&pt.observation_year))
        .map(|pt| pt.value)
        .collect();
    if span.len() != k {
        return Ok(None);
    }
    let max = span.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = span.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(Some(max - min))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateProfile {
    pub candidate_id: String,
    pub selected: bool,
    pub call_year: Year,
    pub career_start_year: Option<Year>,
    pub profile: IvProfile,
    pub yearly_counts: YearlyCitingCounts,
}

impl CandidateProfile {
    /// Rejects empty profiles and points observed after the call.
    pub fn new(
        candidate_id: impl Into<String>,
        selected: bool,
        call_year: Year,
        career_start_year: Option<Year>,
        profile: IvProfile,
        yearly_counts: YearlyCitingCounts,
    ) -> Result<Self> {
        let c = Self {
            candidate_id: candidate_id.into(),
            selected,
            call_year,
            career_start_year,
            profile,
            yearly_counts,
        };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidCandidate {
            id: self.candidate_id.clone(),
            reason,
        };
        if self.profile.is_empty() {
            return Err(invalid("profile has no points".into()));
        }
        if let Some(pt) = self
            .profile
            .points
            .iter()
            .find(|pt| pt.observation_year > self.call_year)
        {
            return Err(invalid(format!(
                "profile point {} is after call year {}",
                pt.observation_year, self.call_year
            )));
        }
        Ok(())
    }

    /// Mean citing publications per year over the years until the call.
    pub fn citing_per_year_recent(&self) -> f64 {
        let from = self.call_year - YEARS_UNTIL_CALL as Year + 1;
        self.yearly_counts.sum_range(from, self.call_year) as f64 / YEARS_UNTIL_CALL as f64
    }

    /// Mean citing publications per year from career start until the call.
    pub fn citing_per_year_since_start(&self) -> Option<f64> {
        let start = self.career_start_year?;
        if start > self.call_year {
            return None;
        }
        let years = (self.call_year - start + 1) as f64;
        Some(self.yearly_counts.sum_range(start, self.call_year) as f64 / years)
    }
}

/// Minimum, maximum and mean of a set of values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Spread {
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

impl Spread {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut n = 0usize;
        let mut sum = 0.0;
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            n += 1;
            sum += v;
            min = min.min(v);
            max = max.max(v);
        }
        // Summation error must not push the mean outside [min, max].
        (n > 0).then(|| Self {
            min,
            max,
            mean: (sum / n as f64).clamp(min, max),
        })
    }
}

/// Aggregates for one group of candidates. Fields are `None` when no
/// candidate in the group contributes a value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortStats {
    pub group_size: usize,
    pub min_iv_range: Option<Spread>,
    pub share_all_above_one: Option<f64>,
    /// Candidates with a defined fluctuation.
    pub fluctuation_count: usize,
    pub fluctuation_range: Option<Spread>,
    pub citing_per_year_last5: Option<Spread>,
    pub citing_per_year_since_start: Option<Spread>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortSummary {
    pub selected: CohortStats,
    pub not_selected: CohortStats,
}

fn group_stats(group: &[&CandidateProfile]) -> Result<CohortStats> {
    let mut minima = Vec::with_capacity(group.len());
    let mut above = 0usize;
    let mut fluctuations = Vec::new();
    for c in group {
        minima.push(profile_min(&c.profile)?);
        if all_above(&c.profile, 1.0)? {
            above += 1;
        }
        if let Some(f) = profile_fluctuation(&c.profile, c.call_year, YEARS_UNTIL_CALL)? {
            fluctuations.push(f);
        }
    }
    Ok(CohortStats {
        group_size: group.len(),
        min_iv_range: Spread::of(minima),
        share_all_above_one: (!group.is_empty()).then(|| above as f64 / group.len() as f64),
        fluctuation_count: fluctuations.len(),
        fluctuation_range: Spread::of(fluctuations),
        citing_per_year_last5: Spread::of(group.iter().map(|c| c.citing_per_year_recent())),
        citing_per_year_since_start: Spread::of(
            group.iter().filter_map(|c| c.citing_per_year_since_start()),
        ),
    })
}

/// Summarizes selected and not selected candidates separately.
pub fn cohort_summary(candidates: &[CandidateProfile]) -> Result<CohortSummary> {
    if candidates.is_empty() {
        return Err(Error::EmptyCohort);
    }
    for c in candidates {
        c.check()?;
    }
    let (selected, not_selected): (Vec<_>, Vec<_>) = candidates.iter().partition(|c| c.selected);
    Ok(CohortSummary {
        selected: group_stats(&selected)?,
        not_selected: group_stats(&not_selected)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indicators::{IvPoint, WindowSpec};

    fn profile(points: &[(Year, f64)]) -> IvProfile {
        IvProfile {
            points: points
                .iter()
                .map(|&(y, v)| IvPoint {
                    observation_year: y,
                    window_length: 5,
                    value: v,
                    total_citing: 10,
                    zero_year_flag: false,
                })
                .collect(),
            window_spec: WindowSpec::Moving { n: 5 },
        }
    }

    #[test]
    fn minimum_and_threshold() {
        let p = profile(&[(2000, 1.2), (2001, 0.9), (2002, 1.5)]);
        assert_eq!(profile_min(&p).unwrap(), 0.9);
        assert_eq!(profile_min(&profile(&[(2000, 1.7)])).unwrap(), 1.7);
        assert!(profile_min(&profile(&[])).is_err());

        assert!(!all_above(&profile(&[(2000, 1.0), (2001, 1.3)]), 1.0).unwrap());
        assert!(all_above(&p, 0.0).unwrap());
        assert!(all_above(&profile(&[]), 1.0).is_err());
    }

    #[test]
    fn fluctuation_over_five_years() {
        let p = profile(&[
            (1999, 1.62),
            (2000, 1.84),
            (2001, 1.82),
            (2002, 1.76),
            (2003, 1.71),
            (2004, 1.62),
        ]);
        let f = profile_fluctuation(&p, 2004, 5).unwrap().unwrap();
        assert!((f - 0.22).abs() < 1e-12);

        let p = profile(&[(2002, 1.76), (2003, 1.71), (2004, 1.62)]);
        assert_eq!(profile_fluctuation(&p, 2004, 5).unwrap(), None);

        let p = profile(&[(2000, 1.3), (2001, 1.3), (2002, 1.3)]);
        assert_eq!(profile_fluctuation(&p, 2002, 3).unwrap(), Some(0.0));
        assert!(profile_fluctuation(&p, 2002, 1).is_err());
    }

    #[test]
    fn single_constant_candidate() {
        let years = 1996..=2004;
        let c = CandidateProfile::new(
            "c1",
            true,
            2004,
            Some(1996),
            profile(&years.clone().map(|y| (y, 1.3)).collect::<Vec<_>>()),
            years.map(|y| (y, 10)).collect(),
        )
        .unwrap();
        let s = cohort_summary(&[c]).unwrap();
        assert_eq!(s.selected.group_size, 1);
        assert_eq!(s.selected.min_iv_range.unwrap().mean, 1.3);
        assert_eq!(s.selected.share_all_above_one, Some(1.0));
        assert_eq!(s.selected.fluctuation_range.unwrap().mean, 0.0);
        assert_eq!(s.selected.citing_per_year_last5.unwrap().mean, 10.0);
        assert_eq!(s.selected.citing_per_year_since_start.unwrap().mean, 10.0);
        assert_eq!(s.not_selected.group_size, 0);
        assert_eq!(s.not_selected.share_all_above_one, None);
    }

    #[test]
    fn undefined_fluctuation_is_left_out() {
        let full = profile(&[
            (2000, 1.1),
            (2001, 1.2),
            (2002, 1.3),
            (2003, 1.4),
            (2004, 1.5),
        ]);
        let short = profile(&[(2003, 0.5), (2004, 0.7)]);
        let counts: YearlyCitingCounts = (2000..=2004).map(|y| (y, 4)).collect();
        let a = CandidateProfile::new("a", false, 2004, None, full, counts.clone()).unwrap();
        let b = CandidateProfile::new("b", false, 2004, None, short, counts).unwrap();
        let s = cohort_summary(&[a, b]).unwrap().not_selected;
        assert_eq!(s.group_size, 2);
        assert_eq!(s.fluctuation_count, 1);
        assert!((s.fluctuation_range.unwrap().mean - 0.4).abs() < 1e-12);
        let mins = s.min_iv_range.unwrap();
        assert_eq!((mins.min, mins.max), (0.5, 1.1));
        assert_eq!(s.share_all_above_one, Some(0.5));
        assert_eq!(s.citing_per_year_since_start, None);
    }

    #[test]
    fn candidate_invariants() {
        let counts = YearlyCitingCounts::new();
        assert!(
            CandidateProfile::new("x", true, 2004, None, profile(&[]), counts.clone()).is_err()
        );
        let late = profile(&[(2005, 1.0)]);
        assert!(CandidateProfile::new("x", true, 2004, None, late, counts).is_err());
        assert!(matches!(cohort_summary(&[]), Err(Error::EmptyCohort)));
    }
}
