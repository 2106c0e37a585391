//! Batch pipeline behind the `versa` binary: convert, verify/correct,
//! simplify, corrupt, compare, report.
//!
//! Outputs are deterministic: identical configuration and inputs produce
//! byte-identical files (no timestamps or environment data in any output).
//! Exit codes: 0 on success, 2 when any exception stayed unresolved
//! (including forced-state resolutions), 1 on hard errors.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use thiserror::Error;

use crate::adapters::{
    canonical_file_name, export, ingest_periods, read_stream, simplify, IngestError,
    ProviderProfile, SimplificationMap, SimplifyError,
};
use crate::correction::{ExceptionRecord, HandlerRegistry};
use crate::corruptor::{corrupt, CorruptionPlan};
use crate::event_model::VersaStream;
use crate::metrics::{
    compare_providers, compare_providers_with_values, grouped_exception_report, ConsistencyReport,
    HalfConsistency, MetricsError, ReportRow,
};
use crate::state_machine::{
    default_table, verify_stream_with, TableError, TransitionTable, VerifyOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNRESOLVED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Simplify(#[from] SimplifyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("invalid json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("{0}")]
    Usage(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Jsonl,
}

#[derive(Debug, Parser)]
#[command(
    name = "versa",
    version,
    about = "Verify, repair, unify, and compare soccer event streams"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ingest a provider file into canonical stream files
    Convert(ConvertArgs),
    /// Detect and correct logical inconsistencies in streams
    Verify(VerifyArgs),
    /// Alias of verify (corrections are always applied)
    Correct(VerifyArgs),
    /// Apply a simplification map to a canonical stream
    Simplify(SimplifyArgs),
    /// Inject seeded errors into a clean stream, with ground truth
    Corrupt(CorruptArgs),
    /// Cross-provider consistency of two accounts of one match
    Compare(CompareArgs),
    /// Exception statistics grouped by provider/league/season
    Report(ReportArgs),
}

#[derive(Debug, clap::Args)]
struct ConvertArgs {
    /// Profile name (builtin or under profiles/) or a profile file path
    #[arg(long)]
    profile: String,
    /// Provider file to ingest
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file (single-period input only)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output directory for canonical per-period files
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Also apply the default simplification map
    #[arg(long)]
    simplified: bool,
}

#[derive(Debug, clap::Args)]
struct VerifyArgs {
    /// Canonical .versa.jsonl files, or provider files when --profile is set
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Treat inputs as provider files under this profile
    #[arg(long)]
    profile: Option<String>,
    /// Custom transition table (JSON); default is the embedded table
    #[arg(long)]
    table: Option<PathBuf>,
    /// Window radius around each event for handlers
    #[arg(long, default_value_t = 5)]
    window: usize,
    /// Carry-gap threshold in meters for spatial continuity
    #[arg(long)]
    carry_threshold: Option<f64>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
}

#[derive(Debug, clap::Args)]
struct SimplifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; defaults to the canonical simplified name in --out-dir
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Custom simplification map (JSON with merges/drops); default embedded
    #[arg(long)]
    map: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct CorruptArgs {
    /// Corruption plan (JSON)
    #[arg(long)]
    plan: PathBuf,
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Where to write the injected-error ground truth (JSON)
    #[arg(long)]
    truth: PathBuf,
    /// Overrides the plan's seed
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, clap::Args)]
struct CompareArgs {
    /// First stream: a .versa.jsonl file or a directory of them
    #[arg(long = "in-a")]
    input_a: PathBuf,
    /// Second stream: a .versa.jsonl file or a directory of them
    #[arg(long = "in-b")]
    input_b: PathBuf,
    /// Compare on the simplified alphabet (default map applied to both)
    #[arg(long)]
    simplified: bool,
    /// Per-event values for side A (CSV: event_id,value)
    #[arg(long)]
    values_a: Option<PathBuf>,
    /// Per-event values for side B (CSV: event_id,value)
    #[arg(long)]
    values_b: Option<PathBuf>,
    /// Write the report here as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
}

#[derive(Debug, clap::Args)]
struct ReportArgs {
    /// Canonical .versa.jsonl files, or provider files when --profile is set
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long)]
    profile: Option<String>,
    #[arg(long)]
    table: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long)]
    carry_threshold: Option<f64>,
    /// Override the provider grouping key for all inputs
    #[arg(long)]
    provider: Option<String>,
    /// Override the league grouping key for all inputs
    #[arg(long)]
    league: Option<String>,
    /// Override the season grouping key for all inputs
    #[arg(long)]
    season: Option<String>,
    /// Write the report here as well as stdout
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Csv)]
    format: ReportFormat,
}

/// Parses arguments and runs the selected command, returning the process
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = err.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Convert(args) => cmd_convert(args),
        Command::Verify(args) | Command::Correct(args) => cmd_verify(args),
        Command::Simplify(args) => cmd_simplify(args),
        Command::Corrupt(args) => cmd_corrupt(args),
        Command::Compare(args) => cmd_compare(args),
        Command::Report(args) => cmd_report(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_ERROR
        }
    }
}

fn load_table(path: &Option<PathBuf>, carry_threshold: Option<f64>) -> Result<TransitionTable, CliError> {
    let table = match path {
        Some(path) => TransitionTable::load(path)?,
        None => default_table(),
    };
    Ok(match carry_threshold {
        Some(gap) => table.with_carry_gap(gap),
        None => table,
    })
}

fn is_canonical(path: &Path) -> bool {
    path.file_name()
        .and_then(|n| n.to_str())
        .is_some_and(|n| n.ends_with(".versa.jsonl"))
}

/// Loads one input as one or more single-period streams.
fn load_input(path: &Path, profile: &Option<ProviderProfile>) -> Result<Vec<VersaStream>, CliError> {
    if is_canonical(path) {
        return Ok(vec![read_stream(path)?]);
    }
    match profile {
        Some(profile) => Ok(ingest_periods(path, profile)?),
        None => Err(CliError::Usage(format!(
            "{} is not a .versa.jsonl file; pass --profile to ingest provider files",
            path.display()
        ))),
    }
}

fn resolve_profile(name: &Option<String>) -> Result<Option<ProviderProfile>, CliError> {
    Ok(match name {
        Some(name) => Some(ProviderProfile::resolve(name)?),
        None => None,
    })
}

fn cmd_convert(args: ConvertArgs) -> Result<i32, CliError> {
    let profile = ProviderProfile::resolve(&args.profile)?;
    let mut streams = ingest_periods(&args.input, &profile)?;
    if args.simplified {
        let map = SimplificationMap::default_map();
        streams = streams.iter().map(|s| simplify(s, &map)).collect();
    }
    if let Some(out) = &args.out {
        if streams.len() != 1 {
            return Err(CliError::Usage(format!(
                "--out expects a single-period input, found {} periods; use --out-dir",
                streams.len()
            )));
        }
        export(&streams[0], out)?;
        println!("wrote {}", out.display());
        return Ok(EXIT_OK);
    }
    std::fs::create_dir_all(&args.out_dir)?;
    for stream in &streams {
        let path = args.out_dir.join(canonical_file_name(stream));
        export(stream, &path)?;
        println!("wrote {}", path.display());
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: VerifyArgs) -> Result<i32, CliError> {
    let profile = resolve_profile(&args.profile)?;
    let table = load_table(&args.table, args.carry_threshold)?;
    let options = VerifyOptions {
        window_radius: args.window,
        ..VerifyOptions::default()
    };

    let mut streams = Vec::new();
    for path in &args.inputs {
        streams.extend(load_input(path, &profile)?);
    }
    let mut seen = std::collections::BTreeSet::new();
    for stream in &streams {
        if !seen.insert((stream.match_id.clone(), stream.period)) {
            return Err(CliError::Usage(format!(
                "duplicate input for match {} period {}",
                stream.match_id, stream.period
            )));
        }
    }

    std::fs::create_dir_all(&args.out_dir)?;
    let registry = HandlerRegistry::standard();
    let verified: Vec<Result<(VersaStream, Vec<ExceptionRecord>), CliError>> = streams
        .par_iter()
        .map(|stream| {
            let (corrected, records) = verify_stream_with(stream, &table, &registry, &options);
            let stream_path = args.out_dir.join(canonical_file_name(&corrected));
            export(&corrected, &stream_path)?;
            let exceptions_path = args.out_dir.join(format!(
                "{}_p{}.exceptions.jsonl",
                corrected.match_id, corrected.period
            ));
            write_jsonl(&exceptions_path, &records)?;
            Ok((corrected, records))
        })
        .collect();
    let verified: Vec<(VersaStream, Vec<ExceptionRecord>)> =
        verified.into_iter().collect::<Result<_, _>>()?;

    let mut unresolved = 0usize;
    for (stream, records) in &verified {
        let bad = records.iter().filter(|r| !r.is_resolved()).count();
        unresolved += bad;
        println!(
            "verified {}_p{}: {} events, {} exceptions, {} unresolved",
            stream.match_id,
            stream.period,
            stream.len(),
            records.len(),
            bad
        );
    }

    let rows = grouped_exception_report(&verified);
    let stats_path = match args.format {
        ReportFormat::Csv => {
            let path = args.out_dir.join("exception_stats.csv");
            std::fs::write(&path, report_rows_csv(&rows)?)?;
            path
        }
        ReportFormat::Jsonl => {
            let path = args.out_dir.join("exception_stats.jsonl");
            write_jsonl(&path, &rows)?;
            path
        }
    };
    println!("wrote {}", stats_path.display());
    Ok(if unresolved > 0 { EXIT_UNRESOLVED } else { EXIT_OK })
}

fn cmd_simplify(args: SimplifyArgs) -> Result<i32, CliError> {
    let map = match &args.map {
        Some(path) => SimplificationMap::load(path)?,
        None => SimplificationMap::default_map(),
    };
    let stream = read_stream(&args.input)?;
    let simplified = simplify(&stream, &map);
    let path = match &args.out {
        Some(out) => out.clone(),
        None => {
            std::fs::create_dir_all(&args.out_dir)?;
            args.out_dir.join(canonical_file_name(&simplified))
        }
    };
    export(&simplified, &path)?;
    println!("wrote {}", path.display());
    Ok(EXIT_OK)
}

fn cmd_corrupt(args: CorruptArgs) -> Result<i32, CliError> {
    let mut plan: CorruptionPlan = serde_json::from_str(&std::fs::read_to_string(&args.plan)?)?;
    if let Some(seed) = args.seed {
        plan.seed = seed;
    }
    let stream = read_stream(&args.input)?;
    let (corrupted, truth) = corrupt(&stream, &plan);
    export(&corrupted, &args.out)?;
    std::fs::write(&args.truth, serde_json::to_string_pretty(&truth)?)?;
    println!(
        "injected {} errors into {} events; wrote {} and {}",
        truth.len(),
        stream.len(),
        args.out.display(),
        args.truth.display()
    );
    Ok(EXIT_OK)
}

fn collect_canonical(path: &Path) -> Result<Vec<VersaStream>, CliError> {
    if path.is_dir() {
        let mut paths: Vec<PathBuf> = std::fs::read_dir(path)?
            .filter_map(|entry| entry.ok().map(|e| e.path()))
            .filter(|p| is_canonical(p))
            .collect();
        paths.sort();
        if paths.is_empty() {
            return Err(CliError::Usage(format!(
                "no .versa.jsonl files under {}",
                path.display()
            )));
        }
        paths.iter().map(|p| Ok(read_stream(p)?)).collect()
    } else {
        Ok(vec![read_stream(path)?])
    }
}

fn load_values(path: &Path) -> Result<BTreeMap<String, f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_path(path)?;
    let mut values = BTreeMap::new();
    for record in reader.records() {
        let record = record?;
        if record.len() < 2 || record.get(0) == Some("event_id") {
            continue;
        }
        let id = record.get(0).unwrap_or_default().to_string();
        let value: f64 = record
            .get(1)
            .unwrap_or_default()
            .trim()
            .parse()
            .map_err(|e| CliError::Usage(format!("bad value in {}: {e}", path.display())))?;
        values.insert(id, value);
    }
    Ok(values)
}

fn value_vector(stream: &VersaStream, values: &BTreeMap<String, f64>) -> Vec<f64> {
    stream
        .events
        .iter()
        .map(|e| values.get(&e.event_id).copied().unwrap_or(0.0))
        .collect()
}

fn cmd_compare(args: CompareArgs) -> Result<i32, CliError> {
    let mut side_a = collect_canonical(&args.input_a)?;
    let mut side_b = collect_canonical(&args.input_b)?;
    if args.simplified {
        let map = SimplificationMap::default_map();
        side_a = side_a.iter().map(|s| simplify(s, &map)).collect();
        side_b = side_b.iter().map(|s| simplify(s, &map)).collect();
    }
    let values_a = args.values_a.as_deref().map(load_values).transpose()?;
    let values_b = args.values_b.as_deref().map(load_values).transpose()?;

    let mut halves: Vec<HalfConsistency> = Vec::new();
    for a in &side_a {
        let Some(b) = side_b.iter().find(|b| b.period == a.period) else {
            continue;
        };
        let half = match (&values_a, &values_b) {
            (Some(va), Some(vb)) => compare_providers_with_values(
                a,
                b,
                &value_vector(a, va),
                &value_vector(b, vb),
            )?,
            _ => compare_providers(a, b)?,
        };
        halves.push(half);
    }
    if halves.is_empty() {
        return Err(MetricsError::PeriodMismatch {
            left: side_a.first().map(|s| s.period).unwrap_or(0),
            right: side_b.first().map(|s| s.period).unwrap_or(0),
        }
        .into());
    }
    let report = ConsistencyReport::from_halves(halves);
    let text = match args.format {
        ReportFormat::Csv => consistency_csv(&report)?,
        ReportFormat::Jsonl => {
            let mut out = String::new();
            for half in &report.halves {
                out.push_str(&serde_json::to_string(half)?);
                out.push('\n');
            }
            out.push_str(&serde_json::to_string(&report)?);
            out.push('\n');
            out
        }
    };
    print!("{text}");
    if let Some(out) = &args.out {
        std::fs::write(out, &text)?;
    }
    Ok(EXIT_OK)
}

fn cmd_report(args: ReportArgs) -> Result<i32, CliError> {
    let profile = resolve_profile(&args.profile)?;
    let table = load_table(&args.table, args.carry_threshold)?;
    let options = VerifyOptions {
        window_radius: args.window,
        ..VerifyOptions::default()
    };
    let mut streams = Vec::new();
    for path in &args.inputs {
        streams.extend(load_input(path, &profile)?);
    }
    for stream in &mut streams {
        if let Some(provider) = &args.provider {
            stream.meta.provider = Some(provider.clone());
        }
        if let Some(league) = &args.league {
            stream.meta.league = Some(league.clone());
        }
        if let Some(season) = &args.season {
            stream.meta.season = Some(season.clone());
        }
    }
    let registry = HandlerRegistry::standard();
    let verified: Vec<(VersaStream, Vec<ExceptionRecord>)> = streams
        .par_iter()
        .map(|stream| verify_stream_with(stream, &table, &registry, &options))
        .collect();
    let rows = grouped_exception_report(&verified);
    let text = match args.format {
        ReportFormat::Csv => report_rows_csv(&rows)?,
        ReportFormat::Jsonl => {
            let mut out = String::new();
            for row in &rows {
                out.push_str(&serde_json::to_string(row)?);
                out.push('\n');
            }
            out
        }
    };
    print!("{text}");
    if let Some(out) = &args.out {
        std::fs::write(out, &text)?;
    }
    Ok(EXIT_OK)
}

fn write_jsonl<T: serde::Serialize>(path: &Path, items: &[T]) -> Result<(), CliError> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, item)?;
        out.push(b'\n');
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(&out)?;
    Ok(())
}

fn report_rows_csv(rows: &[ReportRow]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "provider",
        "league",
        "season",
        "matches",
        "total_events",
        "exception_pct",
        "primary_exception",
    ])?;
    for row in rows {
        let primary = row
            .stats
            .primary_exception
            .map(|(action, fraction)| format!("{action}({:.2}%)", fraction * 100.0))
            .unwrap_or_else(|| "none".to_string());
        writer.write_record([
            row.key.provider.as_str(),
            row.key.league.as_str(),
            row.key.season.as_str(),
            &row.match_count.to_string(),
            &row.stats.total_events.to_string(),
            &format!("{:.2}%", row.stats.exception_ratio * 100.0),
            &primary,
        ])?;
    }
    Ok(String::from_utf8(writer.into_inner().map_err(|e| {
        CliError::Usage(format!("csv buffer error: {e}"))
    })?)
    .expect("csv output is utf-8"))
}

fn consistency_csv(report: &ConsistencyReport) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([
        "row",
        "period",
        "edit_similarity",
        "value_sum_a",
        "value_sum_b",
        "pearson_r",
    ])?;
    let opt = |v: Option<f64>| v.map(|v| format!("{v:.6}")).unwrap_or_default();
    for half in &report.halves {
        writer.write_record([
            "half",
            &half.period.to_string(),
            &format!("{:.6}", half.edit_similarity),
            &opt(half.value_sum_a),
            &opt(half.value_sum_b),
            "",
        ])?;
    }
    writer.write_record([
        "summary",
        "",
        &opt(report.mean_edit_similarity()),
        "",
        "",
        &opt(report.pearson_r),
    ])?;
    Ok(String::from_utf8(writer.into_inner().map_err(|e| {
        CliError::Usage(format!("csv buffer error: {e}"))
    })?)
    .expect("csv output is utf-8"))
}
