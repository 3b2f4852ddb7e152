//! Command-line surface.
//!
//! Exit statuses: 0 on success, 1 on data errors, 2 on usage errors.
//! Reports go to the output stream, diagnostics to the error stream.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::cohort::{cohort_summary, CandidateProfile};
use crate::error::{Error, Result};
use crate::filters::{most_cited_publication, FilterSet};
use crate::indicators::{
    ar_index, h_index, iv_profile, select_h_core, CoreEntry, IvPoint, WindowSpec,
    DEFAULT_MIN_WINDOW,
};
use crate::io::{
    parse_counts, parse_dataset, parse_manifest, read_file, read_source, render_cohort,
    render_profile, round2, CandidateSource, ReportFormat,
};
use crate::model::{
    citation_counts_per_publication, has_errors, validate_dataset, CitationDataset, Year,
    YearlyCitingCounts,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "impact-vitality",
    version,
    about = "Impact Vitality profiles from citation data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a dataset and print its findings.
    Validate { dataset: PathBuf },
    /// Print the Impact Vitality profile of a dataset or a counts file.
    Profile(ProfileArgs),
    /// Print h-index, AR-index and Impact Vitality for one observation year.
    Indicators(IndicatorArgs),
    /// Summarize selected and not selected candidates listed in a manifest.
    Cohort {
        manifest: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: ReportFormat,
    },
}

#[derive(Debug, Args)]
struct ProfileArgs {
    #[arg(required_unless_present = "counts", conflicts_with = "counts")]
    dataset: Option<PathBuf>,
    /// Yearly counts file (`year,count`) instead of a dataset.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// `moving:<n>` or `fixed:<start>[:<minlen>]`.
    #[arg(long, value_parser = parse_window)]
    window: Option<WindowArg>,
    /// `self-citations`, `cites-only:<pubid|most-cited>`, `citing-type:<t>`,
    /// `cited-type:<t>` or `exclude:<record id>`; repeatable.
    #[arg(long = "filter", value_parser = parse_filter)]
    filters: Vec<FilterArg>,
    #[arg(long)]
    from: Option<Year>,
    #[arg(long)]
    to: Option<Year>,
    #[arg(long, value_enum, default_value_t)]
    format: ReportFormat,
}

#[derive(Debug, Args)]
struct IndicatorArgs {
    dataset: PathBuf,
    /// Observation year; defaults to the latest citing year.
    #[arg(long)]
    year: Option<Year>,
    #[arg(long, value_parser = parse_window)]
    window: Option<WindowArg>,
    #[arg(long = "filter", value_parser = parse_filter)]
    filters: Vec<FilterArg>,
    #[arg(long, value_enum, default_value_t)]
    format: ReportFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum WindowArg {
    Moving(usize),
    Fixed { start: Year, min_length: usize },
}

fn parse_window(s: &str) -> std::result::Result<WindowArg, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let int = |v: &str, what: &str| -> std::result::Result<i64, String> {
        v.parse().map_err(|_| format!("invalid {what} `{v}`"))
    };
    match parts.as_slice() {
        ["moving", n] => {
            let n = int(n, "window length")?;
            if n < 2 {
                return Err(format!("window length must be greater than 1, got {n}"));
            }
            Ok(WindowArg::Moving(n as usize))
        }
        ["fixed", start, rest @ ..] if rest.len() <= 1 => {
            let start = int(start, "start year")? as Year;
            let min_length = match rest.first() {
                Some(m) => int(m, "minimum length")?,
                None => DEFAULT_MIN_WINDOW as i64,
            };
            if min_length < 2 {
                return Err(format!(
                    "minimum length must be greater than 1, got {min_length}"
                ));
            }
            Ok(WindowArg::Fixed {
                start,
                min_length: min_length as usize,
            })
        }
        _ => Err("expected `moving:<n>` or `fixed:<start>[:<minlen>]`".into()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum FilterArg {
    SelfCitations,
    CitesOnly(String),
    CitesOnlyMostCited,
    CitingType(String),
    CitedType(String),
    Exclude(String),
}

fn parse_filter(s: &str) -> std::result::Result<FilterArg, String> {
    let non_empty = |v: &str| {
        if v.is_empty() {
            Err(format!("empty value in filter `{s}`"))
        } else {
            Ok(v.to_string())
        }
    };
    match s.split_once(':') {
        None if s == "self-citations" => Ok(FilterArg::SelfCitations),
        Some(("cites-only", "most-cited")) => Ok(FilterArg::CitesOnlyMostCited),
        Some(("cites-only", id)) => non_empty(id).map(FilterArg::CitesOnly),
        Some(("citing-type", t)) => non_empty(t).map(FilterArg::CitingType),
        Some(("cited-type", t)) => non_empty(t).map(FilterArg::CitedType),
        Some(("exclude", id)) => non_empty(id).map(FilterArg::Exclude),
        _ => Err(format!("unknown filter `{s}`")),
    }
}

fn filter_set(ds: &CitationDataset, args: &[FilterArg]) -> Result<FilterSet> {
    let mut fs = FilterSet::default();
    let mut citing_only = None;
    for arg in args {
        match arg {
            FilterArg::SelfCitations => fs.exclude_self_citations = true,
            FilterArg::CitesOnly(id) => citing_only = Some(id.clone()),
            FilterArg::CitesOnlyMostCited => citing_only = Some(most_cited_publication(ds)?),
            FilterArg::CitingType(t) => {
                fs.citing_doc_types
                    .get_or_insert_with(Default::default)
                    .insert(t.clone());
            }
            FilterArg::CitedType(t) => {
                fs.cited_doc_types
                    .get_or_insert_with(Default::default)
                    .insert(t.clone());
            }
            FilterArg::Exclude(id) => {
                fs.exclude_ids.insert(id.clone());
            }
        }
    }
    fs.exclude_citing_only = citing_only;
    Ok(fs)
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e)
    }
}

type CmdResult = std::result::Result<i32, Failure>;

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate { dataset } => validate(&dataset, out),
        Command::Profile(args) => profile(&args, out),
        Command::Indicators(args) => indicators(&args, out),
        Command::Cohort { manifest, format } => cohort(&manifest, format, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Data(e)) => {
            let _ = writeln!(err, "error: {e}");
            if let Error::InvalidDataset { findings } = &e {
                for f in findings.iter().skip(1) {
                    let _ = writeln!(err, "  {f}");
                }
            }
            EXIT_DATA
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes()).map_err(|source| {
        Failure::Data(Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
    })?;
    Ok(EXIT_OK)
}

fn validate(path: &Path, out: &mut dyn Write) -> CmdResult {
    let text = read_file(path)?;
    let findings = match parse_dataset(&text) {
        Ok(ds) => validate_dataset(&ds),
        Err(Error::InvalidDataset { findings }) => findings,
        Err(e) => return Err(e.into()),
    };
    let mut s = String::new();
    for f in &findings {
        s.push_str(&format!("{f}\n"));
    }
    if findings.is_empty() {
        s.push_str("OK\n");
    }
    emit(out, &s)?;
    Ok(if has_errors(&findings) {
        EXIT_DATA
    } else {
        EXIT_OK
    })
}

fn resolve_window(arg: Option<WindowArg>, default_start: Option<Year>) -> Result<WindowSpec> {
    match arg {
        Some(WindowArg::Moving(n)) => WindowSpec::moving(n),
        Some(WindowArg::Fixed { start, min_length }) => WindowSpec::fixed_start(start, min_length),
        None => {
            let start = default_start.ok_or(Error::NoCitingRecords)?;
            WindowSpec::fixed_start(start, DEFAULT_MIN_WINDOW)
        }
    }
}

fn profile(args: &ProfileArgs, out: &mut dyn Write) -> CmdResult {
    let (counts, default_start) = match (&args.dataset, &args.counts) {
        (_, Some(path)) => {
            if !args.filters.is_empty() {
                return Err(Failure::Usage(
                    "--filter needs citing records and cannot be used with --counts".into(),
                ));
            }
            let counts = parse_counts(&read_file(path)?)?;
            let start = counts.first_positive_year();
            (counts, start)
        }
        (Some(path), None) => {
            let ds = parse_dataset(&read_file(path)?)?;
            let fs = filter_set(&ds, &args.filters)?;
            let counts = crate::model::yearly_citing_counts(&ds, &fs)?;
            let start = ds.target.career_start_year.or(ds.first_citation_year());
            (counts, start)
        }
        (None, None) => unreachable!("clap requires one input"),
    };
    let spec = resolve_window(args.window, default_start)?;
    let (from, to) = profile_range(&counts, &spec, args.from, args.to)?;
    let profile = iv_profile(&counts, spec, from, to)?;
    emit(out, &render_profile(&profile, args.format))
}

fn profile_range(
    counts: &YearlyCitingCounts,
    spec: &WindowSpec,
    from: Option<Year>,
    to: Option<Year>,
) -> Result<(Year, Year)> {
    let from = from.or_else(|| match *spec {
        WindowSpec::FixedStart { start_year, .. } => Some(start_year),
        WindowSpec::Moving { .. } => counts.first_year(),
    });
    let to = to.or(counts.last_year());
    match (from, to) {
        (Some(f), Some(t)) => Ok((f, t)),
        _ => Err(Error::NoCitingRecords),
    }
}

#[derive(Serialize)]
struct IndicatorReport {
    observation_year: Year,
    h_index: usize,
    ar_index: f64,
    h_core: Vec<CoreRow>,
    latest_iv: Option<IvPoint>,
}

#[derive(Serialize)]
struct CoreRow {
    id: String,
    citations: u64,
    age: u32,
}

fn indicators(args: &IndicatorArgs, out: &mut dyn Write) -> CmdResult {
    let full = parse_dataset(&read_file(&args.dataset)?)?;
    let year = args
        .year
        .or(full.last_citation_year())
        .ok_or(Error::NoCitingRecords)?;
    let mut ds = full.clone();
    ds.citing_records.retain(|r| r.year <= year);

    let fs = filter_set(&ds, &args.filters)?;
    let per_pub = citation_counts_per_publication(&ds, &fs)?;
    let core = select_h_core(
        ds.publications
            .iter()
            .map(|p| (p.id.as_str(), per_pub[&p.id], p.year)),
        year,
    );
    let entries: Vec<CoreEntry> = core.iter().map(|(_, e)| *e).collect();
    let counts_in_scope: Vec<u64> = ds
        .publications
        .iter()
        .filter(|p| p.year <= year)
        .map(|p| per_pub[&p.id])
        .collect();
    let h = h_index(&counts_in_scope);
    let ar = ar_index(&entries)?;

    let counts = crate::model::yearly_citing_counts(&ds, &fs)?;
    let default_start = ds.target.career_start_year.or(full.first_citation_year());
    let spec = resolve_window(args.window, default_start)?;
    let latest_iv = match iv_profile(&counts, spec, year, year) {
        Ok(p) => p.points.into_iter().next(),
        Err(Error::EmptyRange { .. }) => None,
        Err(e) => return Err(e.into()),
    };

    let report = IndicatorReport {
        observation_year: year,
        h_index: h,
        ar_index: ar,
        h_core: core
            .iter()
            .map(|(id, e)| CoreRow {
                id: id.to_string(),
                citations: e.citations,
                age: e.age,
            })
            .collect(),
        latest_iv,
    };
    let text = match args.format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let iv = report.latest_iv.as_ref();
            format!(
                "observation_year,h_index,ar_index,iv_value,window_length,total_citing,zero_year_flag\n\
                 {},{},{:.4},{},{},{},{}\n",
                year,
                h,
                ar,
                iv.map_or(String::new(), |p| format!("{:.2}", round2(p.value))),
                iv.map_or(String::new(), |p| p.window_length.to_string()),
                iv.map_or(String::new(), |p| p.total_citing.to_string()),
                iv.map_or(String::new(), |p| p.zero_year_flag.to_string()),
            )
        }
        ReportFormat::Table => {
            let mut s = format!(
                "observation year  {year}\nh-index           {h}\nAR-index          {ar:.4}\n"
            );
            match &report.latest_iv {
                Some(p) => s.push_str(&format!(
                    "Impact Vitality   {:.2} (window {} years, {} citing{})\n",
                    round2(p.value),
                    p.window_length,
                    p.total_citing,
                    if p.zero_year_flag {
                        ", contains zero years"
                    } else {
                        ""
                    }
                )),
                None => s.push_str("Impact Vitality   n/a\n"),
            }
            s
        }
    };
    emit(out, &text)
}

fn cohort(manifest: &Path, format: ReportFormat, out: &mut dyn Write) -> CmdResult {
    let base = manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&read_file(manifest)?, base)?;
    let mut candidates = Vec::with_capacity(entries.len());
    for e in entries {
        let (counts, start) = match read_source(&e.path)? {
            CandidateSource::Dataset(ds) => {
                let counts = crate::model::yearly_citing_counts(&ds, &FilterSet::default())?;
                let start = e
                    .career_start_year
                    .or(ds.target.career_start_year)
                    .or(ds.first_citation_year());
                (counts, start)
            }
            CandidateSource::Counts(counts) => {
                let start = e.career_start_year.or(counts.first_positive_year());
                (counts, start)
            }
        };
        let invalid = |reason: String| Error::InvalidCandidate {
            id: e.candidate_id.clone(),
            reason,
        };
        let start = start.ok_or_else(|| invalid("no citing publications".into()))?;
        let spec = WindowSpec::fixed_start(start, DEFAULT_MIN_WINDOW)?;
        let profile = iv_profile(&counts, spec, start, e.call_year)
            .map_err(|err| invalid(err.to_string()))?;
        candidates.push(CandidateProfile::new(
            e.candidate_id.clone(),
            e.selected,
            e.call_year,
            e.career_start_year.or(Some(start)),
            profile,
            counts,
        )?);
    }
    let summary = cohort_summary(&candidates)?;
    emit(out, &render_cohort(&summary, format))
}
