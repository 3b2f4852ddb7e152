//! Author-centric citation data.
//!
//! A [`CitationDataset`] holds one target author, the author's verified
//! publications and the citing records that cite at least one of them.
//! Everything downstream works on reductions of this container: distinct
//! citing records per year ([`YearlyCitingCounts`]) and citations per
//! publication.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use chrono::Datelike;
use serde::{Deserialize, Serialize};
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::filters::{apply_filters, FilterSet};

pub type Year = i32;

/// Earliest publication year accepted by [`validate_dataset`].
pub const MIN_PUBLICATION_YEAR: Year = 1800;

fn fold(s: &str) -> String {
    s.nfd()
        .filter(|c| !is_combining_mark(*c))
        .collect::<String>()
        .to_lowercase()
}

/// Lowercased, diacritic-free surname with runs of whitespace collapsed.
pub fn normalize_surname(s: &str) -> String {
    fold(s).split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Lowercased, diacritic-free initials with periods and whitespace removed.
pub fn normalize_initials(s: &str) -> String {
    fold(s)
        .chars()
        .filter(|c| *c != '.' && !c.is_whitespace())
        .collect()
}

/// Normalized (surname, initials) pair used for author matching.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAuthorKey")]
pub struct AuthorKey {
    surname: String,
    initials: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAuthorKey {
    surname: String,
    #[serde(default)]
    initials: String,
}

impl TryFrom<RawAuthorKey> for AuthorKey {
    type Error = String;

    fn try_from(raw: RawAuthorKey) -> Result<Self, String> {
        AuthorKey::new(&raw.surname, &raw.initials).ok_or_else(|| {
            format!(
                "author surname `{}` is empty after normalization",
                raw.surname
            )
        })
    }
}

impl AuthorKey {
    /// Returns `None` when the surname normalizes to the empty string.
    pub fn new(surname: &str, initials: &str) -> Option<Self> {
        let surname = normalize_surname(surname);
        if surname.is_empty() {
            return None;
        }
        Some(Self {
            surname,
            initials: normalize_initials(initials),
        })
    }

    pub fn surname(&self) -> &str {
        &self.surname
    }

    pub fn initials(&self) -> &str {
        &self.initials
    }
}

impl fmt::Display for AuthorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.initials.is_empty() {
            f.write_str(&self.surname)
        } else {
            write!(f, "{} {}", self.surname, self.initials)
        }
    }
}

/// The researcher under evaluation.
///
/// `name_variants` always contains `key`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetAuthor {
    key: AuthorKey,
    name_variants: BTreeSet<AuthorKey>,
    /// Origin of the "senior career" window, e.g. the PhD year.
    pub career_start_year: Option<Year>,
}

impl TargetAuthor {
    pub fn new(
        key: AuthorKey,
        variants: impl IntoIterator<Item = AuthorKey>,
        career_start_year: Option<Year>,
    ) -> Self {
        let mut name_variants: BTreeSet<AuthorKey> = variants.into_iter().collect();
        name_variants.insert(key.clone());
        Self {
            key,
            name_variants,
            career_start_year,
        }
    }

    pub fn key(&self) -> &AuthorKey {
        &self.key
    }

    pub fn name_variants(&self) -> &BTreeSet<AuthorKey> {
        &self.name_variants
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Publication {
    pub id: String,
    pub year: Year,
    pub doc_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// A document citing at least one of the target's publications. It counts
/// once per year no matter how many target publications it cites.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CitingRecord {
    pub id: String,
    pub year: Year,
    pub authors: BTreeSet<AuthorKey>,
    pub cited_target_pub_ids: BTreeSet<String>,
    pub doc_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationDataset {
    pub target: TargetAuthor,
    pub publications: Vec<Publication>,
    pub citing_records: Vec<CitingRecord>,
}

impl CitationDataset {
    pub fn publication(&self, id: &str) -> Option<&Publication> {
        self.publications.iter().find(|p| p.id == id)
    }

    /// Year of the earliest citing record, if any.
    pub fn first_citation_year(&self) -> Option<Year> {
        self.citing_records.iter().map(|r| r.year).min()
    }

    pub fn last_citation_year(&self) -> Option<Year> {
        self.citing_records.iter().map(|r| r.year).max()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Warning => f.write_str("WARNING"),
            Severity::Error => f.write_str("ERROR"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub severity: Severity,
    pub message: String,
}

impl Finding {
    fn error(message: String) -> Self {
        Self {
            severity: Severity::Error,
            message,
        }
    }

    fn warning(message: String) -> Self {
        Self {
            severity: Severity::Warning,
            message,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.severity, self.message)
    }
}

pub fn has_errors(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.severity == Severity::Error)
}

/// Checks every dataset invariant and reports violations in a stable order:
/// publications first, then citing records in input order, then target
/// author checks.
///
/// Broken references, duplicate ids, empty cited sets and out-of-range
/// publication years are errors. Citing records older than a publication
/// they cite, and a career start after the first citation, are warnings.
pub fn validate_dataset(ds: &CitationDataset) -> Vec<Finding> {
    let mut findings = Vec::new();
    let max_year = chrono::Utc::now().year() + 1;

    let mut pub_years = BTreeMap::new();
    for p in &ds.publications {
        if pub_years.insert(p.id.as_str(), p.year).is_some() {
            findings.push(Finding::error(format!(
                "duplicate publication id `{}`",
                p.id
            )));
        }
        if !(MIN_PUBLICATION_YEAR..=max_year).contains(&p.year) {
            findings.push(Finding::error(format!(
                "publication `{}` has year {} outside {MIN_PUBLICATION_YEAR}..={max_year}",
                p.id, p.year
            )));
        }
    }

    let mut record_ids = BTreeSet::new();
    for r in &ds.citing_records {
        if !record_ids.insert(r.id.as_str()) {
            findings.push(Finding::error(format!(
                "duplicate citing record id `{}`",
                r.id
            )));
        }
        if r.cited_target_pub_ids.is_empty() {
            findings.push(Finding::error(format!(
                "citing record `{}` cites no target publication",
                r.id
            )));
        }
        let mut newest_cited: Option<(&str, Year)> = None;
        for pid in &r.cited_target_pub_ids {
            match pub_years.get(pid.as_str()) {
                None => findings.push(Finding::error(format!(
                    "citing record `{}` references unknown publication `{}`",
                    r.id, pid
                ))),
                Some(&y) if y > r.year && newest_cited.is_none_or(|(_, ny)| y > ny) => {
                    newest_cited = Some((pid, y));
                }
                Some(_) => {}
            }
        }
        if let Some((pid, y)) = newest_cited {
            findings.push(Finding::warning(format!(
                "citing record `{}` dated {} cites publication `{}` from {}",
                r.id, r.year, pid, y
            )));
        }
    }

    if let (Some(start), Some(first)) = (ds.target.career_start_year, ds.first_citation_year()) {
        if start > first + 1 {
            findings.push(Finding::warning(format!(
                "career start year {start} is after the first citation year {first}"
            )));
        }
    }

    findings
}

/// Distinct citing records per calendar year. Years absent from the map
/// count as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct YearlyCitingCounts(BTreeMap<Year, u64>);

impl YearlyCitingCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, year: Year) -> u64 {
        self.0.get(&year).copied().unwrap_or(0)
    }

    pub fn set(&mut self, year: Year, count: u64) {
        self.0.insert(year, count);
    }

    pub fn increment(&mut self, year: Year) {
        *self.0.entry(year).or_insert(0) += 1;
    }

    pub fn contains_year(&self, year: Year) -> bool {
        self.0.contains_key(&year)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Year, u64)> + '_ {
        self.0.iter().map(|(y, c)| (*y, *c))
    }

    pub fn first_year(&self) -> Option<Year> {
        self.0.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<Year> {
        self.0.keys().next_back().copied()
    }

    /// Earliest year with a positive count.
    pub fn first_positive_year(&self) -> Option<Year> {
        self.iter().find(|(_, c)| *c > 0).map(|(y, _)| y)
    }

    /// Counts for the `len` years ending at `newest`, newest first.
    pub fn window(&self, newest: Year, len: usize) -> Vec<u64> {
        (0..len as i32)
            .map(|back| self.get(newest - back))
            .collect()
    }

    /// Sum of counts over `from..=to`.
    pub fn sum_range(&self, from: Year, to: Year) -> u64 {
        self.0.range(from..=to).map(|(_, c)| c).sum()
    }

    pub fn scaled(&self, factor: u64) -> Self {
        Self(self.0.iter().map(|(y, c)| (*y, c * factor)).collect())
    }
}

impl FromIterator<(Year, u64)> for YearlyCitingCounts {
    fn from_iter<I: IntoIterator<Item = (Year, u64)>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Number of distinct surviving citing records per year.
pub fn yearly_citing_counts(ds: &CitationDataset, fs: &FilterSet) -> Result<YearlyCitingCounts> {
    let survivors = apply_filters(ds, fs)?;
    let mut counted = BTreeSet::new();
    let mut counts = YearlyCitingCounts::new();
    for r in &ds.citing_records {
        if survivors.contains(&r.id) && counted.insert(r.id.as_str()) {
            counts.increment(r.year);
        }
    }
    Ok(counts)
}

/// Distinct surviving citing records per publication. Every publication of
/// the dataset appears in the result, uncited ones with zero.
pub fn citation_counts_per_publication(
    ds: &CitationDataset,
    fs: &FilterSet,
) -> Result<BTreeMap<String, u64>> {
    let survivors = apply_filters(ds, fs)?;
    let mut counts: BTreeMap<String, u64> =
        ds.publications.iter().map(|p| (p.id.clone(), 0)).collect();
    let mut counted = BTreeSet::new();
    for r in &ds.citing_records {
        if !survivors.contains(&r.id) || !counted.insert(r.id.as_str()) {
            continue;
        }
        for pid in &r.cited_target_pub_ids {
            match counts.get_mut(pid) {
                Some(c) => *c += 1,
                None => return Err(Error::UnknownPublication(pid.clone())),
            }
        }
    }
    Ok(counts)
}
