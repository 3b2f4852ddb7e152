//! File formats: dataset documents (JSON), yearly counts and cohort
//! manifests (CSV), and profile / cohort reports.
//!
//! Dataset documents follow a strict schema: unknown fields are rejected and
//! `schema_version` must be [`SCHEMA_VERSION`].

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::cohort::{CohortStats, CohortSummary, Spread};
use crate::error::{Error, Result};
use crate::indicators::{IvProfile, WindowSpec};
use crate::model::{
    has_errors, validate_dataset, AuthorKey, CitationDataset, CitingRecord, Publication, Severity,
    TargetAuthor, Year, YearlyCitingCounts,
};

pub const SCHEMA_VERSION: u32 = 1;

pub const COUNTS_HEADER: [&str; 2] = ["year", "count"];

pub const REPORT_HEADER: [&str; 5] = [
    "observation_year",
    "window_length",
    "iv_value",
    "total_citing",
    "zero_year_flag",
];

pub const MANIFEST_HEADER: [&str; 5] = [
    "candidate_id",
    "selected",
    "call_year",
    "career_start_year",
    "path",
];

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetFile {
    schema_version: u32,
    target: TargetBlock,
    publications: Vec<Publication>,
    citing_records: Vec<CitingRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetBlock {
    key: AuthorKey,
    #[serde(default)]
    name_variants: BTreeSet<AuthorKey>,
    #[serde(default)]
    career_start_year: Option<Year>,
}

fn json_error(e: serde_json::Error) -> Error {
    match e.classify() {
        Category::Data => Error::Schema(e.to_string()),
        Category::Syntax | Category::Eof | Category::Io => Error::Syntax(e.to_string()),
    }
}

/// Parses and validates a dataset document. Validation warnings are
/// accepted; any validation error rejects the document.
pub fn parse_dataset(document: &str) -> Result<CitationDataset> {
    let file: DatasetFile = serde_json::from_str(document).map_err(json_error)?;
    if file.schema_version != SCHEMA_VERSION {
        return Err(Error::Schema(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            file.schema_version
        )));
    }
    let ds = CitationDataset {
        target: TargetAuthor::new(
            file.target.key,
            file.target.name_variants,
            file.target.career_start_year,
        ),
        publications: file.publications,
        citing_records: file.citing_records,
    };
    let findings = validate_dataset(&ds);
    if has_errors(&findings) {
        return Err(Error::InvalidDataset {
            findings: findings
                .into_iter()
                .filter(|f| f.severity == Severity::Error)
                .collect(),
        });
    }
    Ok(ds)
}

pub fn emit_dataset(ds: &CitationDataset) -> String {
    let file = DatasetFile {
        schema_version: SCHEMA_VERSION,
        target: TargetBlock {
            key: ds.target.key().clone(),
            name_variants: ds.target.name_variants().clone(),
            career_start_year: ds.target.career_start_year,
        },
        publications: ds.publications.clone(),
        citing_records: ds.citing_records.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("dataset serializes");
    s.push('\n');
    s
}

fn counts_error(line: u64, message: impl Into<String>) -> Error {
    Error::Counts {
        line,
        message: message.into(),
    }
}

/// Parses a `year,count` document. A header-only document yields empty
/// counts.
pub fn parse_counts(document: &str) -> Result<YearlyCitingCounts> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(document.as_bytes());
    let mut rows = reader.records();

    match rows.next() {
        None => return Err(counts_error(1, "missing header `year,count`")),
        Some(Err(e)) => return Err(counts_error(1, e.to_string())),
        Some(Ok(header)) => {
            if header.iter().ne(COUNTS_HEADER) {
                return Err(counts_error(1, "expected header `year,count`"));
            }
        }
    }

    let mut counts = YearlyCitingCounts::new();
    for row in rows {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            counts_error(line, e.to_string())
        })?;
        let line = row.position().map_or(0, |p| p.line());
        if row.len() != 2 {
            return Err(counts_error(
                line,
                format!("expected 2 fields, got {}", row.len()),
            ));
        }
        let year: Year = row[0]
            .parse()
            .map_err(|_| counts_error(line, format!("invalid year `{}`", &row[0])))?;
        let count: u64 = row[1]
            .parse()
            .map_err(|_| counts_error(line, format!("invalid count `{}`", &row[1])))?;
        if counts.contains_year(year) {
            return Err(counts_error(line, format!("duplicate year {year}")));
        }
        counts.set(year, count);
    }
    Ok(counts)
}

pub fn emit_counts(counts: &YearlyCitingCounts) -> String {
    let mut s = String::from("year,count\n");
    for (y, c) in counts.iter() {
        let _ = writeln!(s, "{y},{c}");
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum ReportFormat {
    #[default]
    Table,
    Csv,
    Json,
}

/// Rounds for presentation, matching `{:.2}` formatting.
pub fn round2(v: f64) -> f64 {
    format!("{v:.2}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub observation_year: Year,
    pub window_length: usize,
    /// Two-decimal presentation value.
    pub iv_value: f64,
    pub iv_value_exact: f64,
    pub total_citing: u64,
    pub zero_year_flag: bool,
}

/// One row per profile point, newest observation year first.
pub fn report_rows(profile: &IvProfile) -> Vec<ReportRow> {
    profile
        .points
        .iter()
        .rev()
        .map(|p| ReportRow {
            observation_year: p.observation_year,
            window_length: p.window_length,
            iv_value: round2(p.value),
            iv_value_exact: p.value,
            total_citing: p.total_citing,
            zero_year_flag: p.zero_year_flag,
        })
        .collect()
}

#[derive(Serialize)]
struct ProfileReport<'a> {
    window_spec: &'a WindowSpec,
    rows: &'a [ReportRow],
}

pub fn render_profile(profile: &IvProfile, format: ReportFormat) -> String {
    let rows = report_rows(profile);
    match format {
        ReportFormat::Csv => {
            let mut s = REPORT_HEADER.join(",");
            s.push('\n');
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{:.2},{},{}",
                    r.observation_year,
                    r.window_length,
                    r.iv_value,
                    r.total_citing,
                    r.zero_year_flag
                );
            }
            s
        }
        ReportFormat::Json => {
            let report = ProfileReport {
                window_spec: &profile.window_spec,
                rows: &rows,
            };
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Table => {
            let mut s = format!(
                "{:>6}  {:>6}  {:>6}  {:>8}  {}\n",
                "year", "window", "IV", "citing", "zero_year"
            );
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>6}  {:>6}  {:>6.2}  {:>8}  {}",
                    r.observation_year,
                    r.window_length,
                    r.iv_value,
                    r.total_citing,
                    if r.zero_year_flag { "yes" } else { "no" }
                );
            }
            s
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub candidate_id: String,
    pub selected: bool,
    pub call_year: Year,
    pub career_start_year: Option<Year>,
    pub path: PathBuf,
}

fn parse_flag(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Some(true),
        "false" | "no" | "0" => Some(false),
        _ => None,
    }
}

/// Parses a cohort manifest. Relative paths are resolved against `base`.
pub fn parse_manifest(document: &str, base: &Path) -> Result<Vec<ManifestEntry>> {
    let err = |line: u64, message: String| Error::Manifest { line, message };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(document.as_bytes());
    let header = reader.headers().map_err(|e| err(1, e.to_string()))?;
    if header.iter().ne(MANIFEST_HEADER) {
        return Err(err(
            1,
            format!("expected header `{}`", MANIFEST_HEADER.join(",")),
        ));
    }

    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line());
        let candidate_id = row[0].to_string();
        if candidate_id.is_empty() || !seen.insert(candidate_id.clone()) {
            return Err(err(
                line,
                format!("missing or duplicate candidate_id `{candidate_id}`"),
            ));
        }
        let selected = parse_flag(&row[1])
            .ok_or_else(|| err(line, format!("invalid selected flag `{}`", &row[1])))?;
        let call_year = row[2]
            .parse()
            .map_err(|_| err(line, format!("invalid call_year `{}`", &row[2])))?;
        let career_start_year = match &row[3] {
            "" => None,
            s => Some(
                s.parse()
                    .map_err(|_| err(line, format!("invalid career_start_year `{s}`")))?,
            ),
        };
        if row[4].is_empty() {
            return Err(err(line, "empty path".into()));
        }
        entries.push(ManifestEntry {
            candidate_id,
            selected,
            call_year,
            career_start_year,
            path: base.join(&row[4]),
        });
    }
    Ok(entries)
}

/// A candidate's input file: a full dataset or bare yearly counts.
#[derive(Debug, Clone)]
pub enum CandidateSource {
    Dataset(CitationDataset),
    Counts(YearlyCitingCounts),
}

/// Reads a dataset document (a JSON object) or a counts file, deciding by
/// content.
pub fn read_source(path: &Path) -> Result<CandidateSource> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        parse_dataset(&text).map(CandidateSource::Dataset)
    } else {
        parse_counts(&text).map(CandidateSource::Counts)
    }
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn spread_text(s: &Option<Spread>) -> String {
    match s {
        Some(s) => format!("{:.2} to {:.2}, average {:.2}", s.min, s.max, s.mean),
        None => "n/a".into(),
    }
}

fn share_text(s: Option<f64>) -> String {
    s.map_or_else(|| "n/a".into(), |v| format!("{:.0}%", v * 100.0))
}

fn spread_cells(s: &Option<Spread>) -> [String; 3] {
    match s {
        Some(s) => [s.min, s.max, s.mean].map(|v| format!("{v:.2}")),
        None => Default::default(),
    }
}

fn cohort_csv_row(group: &str, g: &CohortStats) -> String {
    let mut cells = vec![group.to_string(), g.group_size.to_string()];
    cells.extend(spread_cells(&g.min_iv_range));
    cells.push(
        g.share_all_above_one
            .map_or(String::new(), |v| format!("{v:.4}")),
    );
    cells.push(g.fluctuation_count.to_string());
    cells.extend(spread_cells(&g.fluctuation_range));
    cells.extend(spread_cells(&g.citing_per_year_last5));
    cells.extend(spread_cells(&g.citing_per_year_since_start));
    cells.join(",")
}

pub const COHORT_CSV_HEADER: &str = "group,group_size,min_iv_min,min_iv_max,min_iv_mean,\
share_all_above_one,fluctuation_count,fluctuation_min,fluctuation_max,fluctuation_mean,\
citing_last5_min,citing_last5_max,citing_last5_mean,\
citing_since_start_min,citing_since_start_max,citing_since_start_mean";

pub fn render_cohort(summary: &CohortSummary, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(summary).expect("summary serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => format!(
            "{COHORT_CSV_HEADER}\n{}\n{}\n",
            cohort_csv_row("selected", &summary.selected),
            cohort_csv_row("not_selected", &summary.not_selected)
        ),
        ReportFormat::Table => {
            let (a, b) = (&summary.selected, &summary.not_selected);
            let rows = [
                ("", "Selected".to_string(), "Not selected".to_string()),
                (
                    "Number of candidates",
                    a.group_size.to_string(),
                    b.group_size.to_string(),
                ),
                (
                    "Citing per year, 5 years until call",
                    spread_text(&a.citing_per_year_last5),
                    spread_text(&b.citing_per_year_last5),
                ),
                (
                    "Citing per year, career start until call",
                    spread_text(&a.citing_per_year_since_start),
                    spread_text(&b.citing_per_year_since_start),
                ),
                (
                    "Minimum IV",
                    spread_text(&a.min_iv_range),
                    spread_text(&b.min_iv_range),
                ),
                (
                    "With all IV values > 1",
                    share_text(a.share_all_above_one),
                    share_text(b.share_all_above_one),
                ),
                (
                    "IV fluctuation, 5 years until call",
                    spread_text(&a.fluctuation_range),
                    spread_text(&b.fluctuation_range),
                ),
            ];
            let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
            let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0);
            let mut s = String::new();
            for (label, x, y) in rows {
                let _ = writeln!(s, "{label:<w0$}  {x:<w1$}  {y}");
            }
            s
        }
    }
}
