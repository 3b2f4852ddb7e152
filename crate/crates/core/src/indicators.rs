//! Impact Vitality and the h-index family.
//!
//! Impact Vitality weights the citing publications of year `y_t - i + 1` by
//! `1/i` (the observation year has age 1) and normalizes so that a constant
//! yearly volume scores exactly 1. Growth scores above 1, decline below 1,
//! and a window whose only citing mass sits in its oldest year scores 0.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Year, YearlyCitingCounts};

/// Default minimum length of a fixed-start window.
pub const DEFAULT_MIN_WINDOW: usize = 4;

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic(n: usize) -> f64 {
    (1..=n).map(|i| 1.0 / i as f64).sum()
}

/// Impact Vitality of a citing publications window.
///
/// `counts[0]` is the observation year and `counts[n - 1]` the oldest year
/// of the window.
pub fn impact_vitality(counts: &[u64]) -> Result<f64> {
    let n = counts.len();
    if n < 2 {
        return Err(Error::WindowTooShort { n });
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(Error::ZeroTotal);
    }
    // n * sum(c_i / i) / sum(c_i) - 1 rewritten as sum(c_i * (n - i) / i) / sum(c_i):
    // every term is non-negative and the oldest year contributes exactly 0.
    let excess: f64 = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| {
            let age = k + 1;
            c as f64 * (n - age) as f64 / age as f64
        })
        .sum();
    Ok(excess / total as f64 / (harmonic(n) - 1.0))
}

/// Largest attainable Impact Vitality for a window of `n` years, reached
/// when every citing publication falls in the observation year.
pub fn iv_upper_bound(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::WindowTooShort { n });
    }
    Ok((n as f64 - 1.0) / (harmonic(n) - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WindowSpec {
    /// Fixed length window sliding with the observation year.
    Moving { n: usize },
    /// Window growing from `start_year`; points with fewer than
    /// `min_length` years are not emitted.
    FixedStart { start_year: Year, min_length: usize },
}

impl WindowSpec {
    pub fn moving(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::WindowTooShort { n });
        }
        Ok(Self::Moving { n })
    }

    pub fn fixed_start(start_year: Year, min_length: usize) -> Result<Self> {
        if min_length < 2 {
            return Err(Error::WindowTooShort { n: min_length });
        }
        Ok(Self::FixedStart {
            start_year,
            min_length,
        })
    }

    fn check(&self) -> Result<()> {
        match *self {
            WindowSpec::Moving { n } | WindowSpec::FixedStart { min_length: n, .. } if n < 2 => {
                Err(Error::WindowTooShort { n })
            }
            _ => Ok(()),
        }
    }

    /// Window length for an observation year, or `None` when that year has
    /// no admissible window.
    pub fn window_length(&self, observation_year: Year) -> Option<usize> {
        match *self {
            WindowSpec::Moving { n } => Some(n),
            WindowSpec::FixedStart {
                start_year,
                min_length,
            } => {
                let n = observation_year as i64 - start_year as i64 + 1;
                (n >= min_length as i64).then_some(n as usize)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvPoint {
    pub observation_year: Year,
    pub window_length: usize,
    pub value: f64,
    pub total_citing: u64,
    /// Some year inside the window has no citing publications.
    pub zero_year_flag: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IvProfile {
    pub points: Vec<IvPoint>,
    pub window_spec: WindowSpec,
}

impl IvProfile {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|p| p.value)
    }

    pub fn point(&self, year: Year) -> Option<&IvPoint> {
        self.points.iter().find(|p| p.observation_year == year)
    }
}

/// Impact Vitality for every observation year in `first_year..=last_year`
/// with an admissible window. Years missing from `counts` contribute zero;
/// windows without any citing publication are skipped.
pub fn iv_profile(
    counts: &YearlyCitingCounts,
    spec: WindowSpec,
    first_year: Year,
    last_year: Year,
) -> Result<IvProfile> {
    let empty = Error::EmptyRange {
        from: first_year,
        to: last_year,
    };
    if first_year > last_year {
        return Err(empty);
    }
    if let WindowSpec::FixedStart { start_year, .. } = spec {
        if start_year > last_year {
            return Err(empty);
        }
    }
    spec.check()?;

    let mut admissible = false;
    let mut points = Vec::new();
    for year in first_year..=last_year {
        let Some(n) = spec.window_length(year) else {
            continue;
        };
        admissible = true;
        let window = counts.window(year, n);
        let total: u64 = window.iter().sum();
        if total == 0 {
            continue;
        }
        points.push(IvPoint {
            observation_year: year,
            window_length: n,
            value: impact_vitality(&window)?,
            total_citing: total,
            zero_year_flag: window.contains(&0),
        });
    }
    if !admissible {
        return Err(empty);
    }
    Ok(IvProfile {
        points,
        window_spec: spec,
    })
}

/// Largest `h` such that at least `h` values are `>= h`.
pub fn h_index(citation_counts: &[u64]) -> usize {
    let mut sorted = citation_counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|(rank, &c)| c >= (*rank + 1) as u64)
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoreEntry {
    pub citations: u64,
    /// Publication age in years, the observation year counting as 1.
    pub age: u32,
}

/// `sqrt(sum(citations / age))` over an h-core.
pub fn ar_index(h_core: &[CoreEntry]) -> Result<f64> {
    let mut sum = 0.0;
    for e in h_core {
        if e.age < 1 {
            return Err(Error::InvalidAge { age: e.age });
        }
        sum += e.citations as f64 / e.age as f64;
    }
    Ok(sum.sqrt())
}

/// Picks the h-core among `(id, citations, publication_year)` triples as
/// seen from `observation_year`. Ties at the cut-off prefer younger
/// publications, then the smaller id. Publications newer than the
/// observation year are ignored.
pub fn select_h_core<'a>(
    publications: impl IntoIterator<Item = (&'a str, u64, Year)>,
    observation_year: Year,
) -> Vec<(&'a str, CoreEntry)> {
    let mut ranked: Vec<(&str, CoreEntry)> = publications
        .into_iter()
        .filter(|(_, _, year)| *year <= observation_year)
        .map(|(id, citations, year)| {
            let age = (observation_year - year + 1) as u32;
            (id, CoreEntry { citations, age })
        })
        .collect();
    ranked.sort_by(|(ia, a), (ib, b)| {
        b.citations
            .cmp(&a.citations)
            .then(a.age.cmp(&b.age))
            .then(ia.cmp(ib))
    });
    let counts: Vec<u64> = ranked.iter().map(|(_, e)| e.citations).collect();
    ranked.truncate(h_index(&counts));
    ranked
}
