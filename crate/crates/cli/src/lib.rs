//! The `castscope` pipeline: extract, score, rank, select outliers, sample
//! for review, tabulate, and measure rater agreement. Each stage reads and
//! writes files so any of them can be rerun on its own.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use castscope_core::analysis::{
    aggregate, cohen_kappa, draw_sample, mean_pairwise_kappa, rank, sample_size, select_outliers, OutlierMode, Site,
    StatsTable,
};
use castscope_core::corpus::{
    discover_sources, ComponentMap, DiscoverOptions, DEFAULT_INCLUDE, DEFAULT_MAX_FILE_BYTES,
};
use castscope_core::entropy::ProbabilityModel;
use castscope_core::report::{
    read_casts_json, read_outliers_json, read_rating_sheet, write_casts_json, write_casts_per_file,
    write_outliers_json, write_ranked_csv, write_rating_template, write_sample_json, write_scatter_csv,
    write_stats_csv, CastReportEntry, ContextLabel, OutliersDocument, SampleDocument, FORMAT_VERSION,
};
use castscope_core::subtokens::SubtokenOptions;
use castscope_core::syntax::{extract_corpus, CastKind, ExtractOptions};

pub const CASTS_FILE: &str = "casts.json";
pub const SCORED_FILE: &str = "scored.json";
pub const OUTLIERS_FILE: &str = "outliers.json";
pub const SAMPLE_FILE: &str = "sample.json";
pub const RATING_TEMPLATE_FILE: &str = "rating_template.csv";
pub const STATS_FILE: &str = "stats.csv";
pub const RANKED_COMBINED_FILE: &str = "ranked.csv";

pub fn ranked_file(kind: CastKind) -> String {
    format!("ranked_{kind}.csv")
}

pub fn scatter_file(kind: CastKind) -> String {
    format!("scatter_{kind}.csv")
}

#[derive(Debug, Parser)]
#[command(
    name = "castscope",
    version,
    about = "Rank C++ named casts by how little the destination name shares with the source"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Find named casts under a source tree and write the casts document.
    Extract(ExtractArgs),
    /// Add entropy scores to a casts document.
    Score(ScoreArgs),
    /// Write per-kind ranked lists of scored casts.
    Rank(RankArgs),
    /// Select per-kind upper-quartile outliers and write scatter data.
    Outliers(OutlierArgs),
    /// Size and draw a review sample from the outliers.
    Sample(SampleArgs),
    /// Tabulate cast counts per component, kind and site.
    Stats(StatsArgs),
    /// Agreement between rating sheets.
    Kappa(KappaArgs),
    /// Extract, score, rank, select outliers, sample and tabulate in one go.
    RunAll(RunAllArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutArg {
    /// Output directory.
    #[arg(long, default_value = "castscope-out")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Root of the C++ source tree.
    #[arg(long)]
    pub root: PathBuf,
    /// Glob of files to scan, relative to the root; repeatable.
    #[arg(long = "include", value_name = "GLOB")]
    pub include: Vec<String>,
    /// Glob of files to skip; repeatable.
    #[arg(long = "exclude", value_name = "GLOB")]
    pub exclude: Vec<String>,
    /// Tab-separated `path-prefix component` overrides.
    #[arg(long)]
    pub component_map: Option<PathBuf>,
    /// Files larger than this many bytes are skipped.
    #[arg(long, default_value_t = DEFAULT_MAX_FILE_BYTES)]
    pub max_file_size: u64,
    /// Keep string literals whole instead of splitting their words.
    #[arg(long)]
    pub whole_literals: bool,
    /// Also write one casts document per source file under `<out>/casts/`.
    #[arg(long)]
    pub per_file: bool,
    /// Extract on the calling thread only.
    #[arg(long)]
    pub serial: bool,
    /// Print every lexer and matcher warning.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Clone, Args)]
pub struct ExtractArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// Casts document; defaults to `<out>/casts.json`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "uniform", value_parser = parse_model)]
    pub prob_model: ProbabilityModel,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args)]
pub struct RankArgs {
    /// Scored document; defaults to `<out>/scored.json`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// One CSV for all kinds instead of one per kind.
    #[arg(long)]
    pub combined: bool,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args)]
pub struct OutlierArgs {
    /// Scored document; defaults to `<out>/scored.json`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value = "gaussian", value_parser = parse_mode)]
    pub outlier_mode: OutlierMode,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.90, value_parser = parse_unit)]
    pub confidence: f64,
    #[arg(long, default_value_t = 0.06, value_parser = parse_unit)]
    pub margin: f64,
    /// Expected proportion of true positives.
    #[arg(long, default_value_t = 0.5, value_parser = parse_unit)]
    pub p: f64,
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    /// Outliers document; defaults to `<out>/outliers.json`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Casts or scored document; defaults to `<out>/casts.json`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArg,
}

#[derive(Debug, Clone, Args)]
pub struct KappaArgs {
    /// Rating sheets (`record_id,label` CSV); at least two.
    #[arg(long, num_args = 2.., required = true)]
    pub sheets: Vec<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RunAllArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, default_value = "uniform", value_parser = parse_model)]
    pub prob_model: ProbabilityModel,
    #[arg(long, default_value = "gaussian", value_parser = parse_mode)]
    pub outlier_mode: OutlierMode,
    /// One ranked CSV for all kinds instead of one per kind.
    #[arg(long)]
    pub combined: bool,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub out: OutArg,
}

fn parse_model(s: &str) -> Result<ProbabilityModel, String> {
    s.parse()
}

fn parse_mode(s: &str) -> Result<OutlierMode, String> {
    s.parse()
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("must lie strictly between 0 and 1, got {v}"))
    }
}

/// Parse arguments, run, and map the outcome to an exit code:
/// 0 success, 1 fatal error, 2 bad arguments.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let stdout = std::io::stdout();
    match run(cli.command, &mut stdout.lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("castscope: {e:#}");
            ExitCode::from(1)
        }
    }
}

pub fn run(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Extract(a) => cmd_extract(&a.corpus, &a.out.out, out),
        Command::Score(a) => {
            let input = a.input.unwrap_or_else(|| a.out.out.join(CASTS_FILE));
            cmd_score(&input, a.prob_model, &a.out.out, out)
        }
        Command::Rank(a) => {
            let input = a.input.unwrap_or_else(|| a.out.out.join(SCORED_FILE));
            cmd_rank(&input, a.combined, &a.out.out, out)
        }
        Command::Outliers(a) => {
            let input = a.input.unwrap_or_else(|| a.out.out.join(SCORED_FILE));
            cmd_outliers(&input, a.outlier_mode, &a.out.out, out)
        }
        Command::Sample(a) => {
            let input = a.input.unwrap_or_else(|| a.out.out.join(OUTLIERS_FILE));
            cmd_sample(&input, &a.sampling, &a.out.out, out)
        }
        Command::Stats(a) => {
            let input = a.input.unwrap_or_else(|| a.out.out.join(CASTS_FILE));
            cmd_stats(&input, &a.out.out, out)
        }
        Command::Kappa(a) => cmd_kappa(&a.sheets, out),
        Command::RunAll(a) => cmd_run_all(&a, out),
    }
}

fn require(path: &Path, what: &str) -> Result<()> {
    if !path.is_file() {
        bail!("missing {what}: {} (run the earlier stage first)", path.display());
    }
    Ok(())
}

fn load_entries(path: &Path, what: &str) -> Result<Vec<CastReportEntry>> {
    require(path, what)?;
    Ok(read_casts_json(path)?)
}

pub fn cmd_extract(args: &CorpusArgs, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let mut options = DiscoverOptions {
        include: if args.include.is_empty() {
            DEFAULT_INCLUDE.iter().map(|s| s.to_string()).collect()
        } else {
            args.include.clone()
        },
        exclude: args.exclude.clone(),
        component_map: None,
        max_file_bytes: args.max_file_size,
    };
    if let Some(map) = &args.component_map {
        options.component_map = Some(ComponentMap::load(map)?);
    }
    let found = discover_sources(&args.root, &options)?;
    let extraction = extract_corpus(&found.files, ExtractOptions { parallel: !args.serial });
    let subtoken_options = SubtokenOptions {
        split_string_literals: !args.whole_literals,
    };
    let entries: Vec<CastReportEntry> = extraction
        .records
        .iter()
        .map(|r| CastReportEntry::from_record(r, subtoken_options))
        .collect();

    let path = out_dir.join(CASTS_FILE);
    write_casts_json(&entries, &path)?;
    if args.per_file {
        write_casts_per_file(&entries, &out_dir.join("casts"))?;
    }

    writeln!(out, "files scanned: {}", extraction.files_scanned)?;
    writeln!(out, "functions indexed: {}", extraction.functions_indexed)?;
    writeln!(out, "casts found: {}", entries.len())?;
    for kind in CastKind::ALL {
        let n = entries.iter().filter(|e| e.cast_kind == kind).count();
        writeln!(out, "  {kind}: {n}")?;
    }
    writeln!(out, "skipped files: {}", found.skipped.len())?;
    for s in &found.skipped {
        writeln!(out, "  {}: {}", s.path, s.reason)?;
    }
    writeln!(out, "warnings: {}", extraction.warnings.len())?;
    if args.verbose {
        for (file, w) in &extraction.warnings {
            writeln!(out, "  {file}:{w}")?;
        }
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

pub fn cmd_score(input: &Path, model: ProbabilityModel, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let mut entries = load_entries(input, "casts document")?;
    for e in &mut entries {
        e.apply_score(model);
    }
    let path = out_dir.join(SCORED_FILE);
    write_casts_json(&entries, &path)?;

    let scored = entries.iter().filter(|e| e.is_scored()).count();
    writeln!(out, "probability model: {model}")?;
    writeln!(out, "scored: {scored} of {}", entries.len())?;
    let mut reasons: BTreeMap<&str, usize> = BTreeMap::new();
    for r in entries.iter().filter_map(|e| e.excluded_reason) {
        *reasons.entry(r.as_str()).or_insert(0) += 1;
    }
    for (reason, n) in reasons {
        writeln!(out, "  excluded {reason}: {n}")?;
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

fn scored_entries(path: &Path) -> Result<Vec<CastReportEntry>> {
    let entries = load_entries(path, "scored document")?;
    if !entries.is_empty() && entries.iter().all(|e| !e.is_scored() && e.excluded_reason.is_none()) {
        bail!("{} has no scores; run `castscope score` first", path.display());
    }
    Ok(entries.into_iter().filter(CastReportEntry::is_scored).collect())
}

pub fn cmd_rank(input: &Path, combined: bool, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let ranked = rank(scored_entries(input)?);
    if combined {
        let path = out_dir.join(RANKED_COMBINED_FILE);
        write_ranked_csv(ranked.values(), &path)?;
        writeln!(out, "wrote {}", path.display())?;
    } else {
        for (kind, list) in &ranked {
            let path = out_dir.join(ranked_file(*kind));
            write_ranked_csv([list], &path)?;
            writeln!(out, "{kind}: {} ranked -> {}", list.len(), path.display())?;
        }
    }
    if ranked.is_empty() {
        writeln!(out, "no scored casts to rank")?;
    }
    Ok(())
}

pub fn cmd_outliers(input: &Path, mode: OutlierMode, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let ranked = rank(scored_entries(input)?);
    let sets = select_outliers(&ranked, mode);
    let doc = OutliersDocument::new(&sets, mode);
    let path = out_dir.join(OUTLIERS_FILE);
    write_outliers_json(&doc, &path)?;

    writeln!(out, "outlier mode: {mode}")?;
    writeln!(
        out,
        "{:<12} {:>8} {:>10} {:>10} {:>10} {:>8}",
        "kind", "scored", "mean", "stddev", "threshold", "outliers"
    )?;
    for set in sets.values() {
        writeln!(
            out,
            "{:<12} {:>8} {:>10.4} {:>10.4} {:>10.4} {:>8}",
            set.kind.as_str(),
            set.population,
            set.mean,
            set.stddev,
            set.threshold,
            set.members.len()
        )?;
    }
    let ids: BTreeSet<String> = doc.members().map(CastReportEntry::id).collect();
    for (kind, list) in &ranked {
        write_scatter_csv(&list.entries, &ids, &out_dir.join(scatter_file(*kind)))?;
    }
    writeln!(out, "outliers total: {}", ids.len())?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

pub fn cmd_sample(input: &Path, sampling: &SamplingArgs, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    require(input, "outliers document")?;
    let doc = read_outliers_json(input)?;
    let population: Vec<CastReportEntry> = doc.members().cloned().collect();
    let size = if population.is_empty() {
        0
    } else {
        sample_size(population.len(), sampling.confidence, sampling.margin, sampling.p)?
    };
    let records = draw_sample(&population, size, sampling.seed)?;
    let sample = SampleDocument {
        version: FORMAT_VERSION,
        seed: sampling.seed,
        population: population.len(),
        confidence: sampling.confidence,
        margin: sampling.margin,
        p: sampling.p,
        size,
        records,
    };
    let path = out_dir.join(SAMPLE_FILE);
    write_sample_json(&sample, &path)?;
    write_rating_template(&sample.records, &out_dir.join(RATING_TEMPLATE_FILE))?;

    writeln!(out, "population: {}", sample.population)?;
    writeln!(
        out,
        "sample size: {} (confidence {}, margin {}, p {}, seed {})",
        size, sampling.confidence, sampling.margin, sampling.p, sampling.seed
    )?;
    for kind in CastKind::ALL {
        let n = sample.records.iter().filter(|r| r.cast_kind == kind).count();
        writeln!(out, "  {kind}: {n}")?;
    }
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

/// Counts from a casts or scored document.
pub fn stats_from_entries(entries: &[CastReportEntry]) -> StatsTable {
    aggregate(entries.iter().map(|e| {
        let site = match e.context {
            ContextLabel::Assignment => Some(Site::Assignment),
            ContextLabel::CallArg => Some(Site::Call),
            ContextLabel::Other => None,
        };
        (e.component.as_str(), e.cast_kind, site)
    }))
}

pub fn write_shares(table: &StatsTable, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "counted casts: {}", table.total.total())?;
    for kind in CastKind::ALL {
        writeln!(
            out,
            "  {:<18} {:>8} {:>7.2}%",
            kind.keyword(),
            table.total.kind_total(kind),
            table.kind_share(kind)
        )?;
    }
    writeln!(
        out,
        "  {:<18} {:>8} {:>7.2}%",
        "assignment",
        table.total.assignment.total(),
        table.site_share(Site::Assignment)
    )?;
    writeln!(
        out,
        "  {:<18} {:>8} {:>7.2}%",
        "call",
        table.total.call.total(),
        table.site_share(Site::Call)
    )?;
    Ok(())
}

pub fn cmd_stats(input: &Path, out_dir: &Path, out: &mut dyn Write) -> Result<()> {
    let entries = load_entries(input, "casts document")?;
    let table = stats_from_entries(&entries);
    let path = out_dir.join(STATS_FILE);
    write_stats_csv(&table, &path)?;
    let other = entries.iter().filter(|e| e.context == ContextLabel::Other).count();
    write_shares(&table, out)?;
    writeln!(out, "not counted (other contexts): {other}")?;
    writeln!(out, "wrote {}", path.display())?;
    Ok(())
}

pub fn cmd_kappa(sheets: &[PathBuf], out: &mut dyn Write) -> Result<()> {
    let sheets = sheets
        .iter()
        .map(|p| {
            require(p, "rating sheet")?;
            Ok(read_rating_sheet(p)?)
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, a) in sheets.iter().enumerate() {
        for b in &sheets[i + 1..] {
            writeln!(out, "{} vs {}: {}", a.rater_id, b.rater_id, cohen_kappa(a, b)?)?;
        }
    }
    writeln!(out, "mean pairwise kappa: {}", mean_pairwise_kappa(&sheets)?)?;
    Ok(())
}

pub fn cmd_run_all(args: &RunAllArgs, out: &mut dyn Write) -> Result<()> {
    let dir = &args.out.out;
    writeln!(out, "== extract")?;
    cmd_extract(&args.corpus, dir, out).context("extract")?;
    writeln!(out, "== score")?;
    cmd_score(&dir.join(CASTS_FILE), args.prob_model, dir, out).context("score")?;
    writeln!(out, "== rank")?;
    cmd_rank(&dir.join(SCORED_FILE), args.combined, dir, out).context("rank")?;
    writeln!(out, "== outliers")?;
    cmd_outliers(&dir.join(SCORED_FILE), args.outlier_mode, dir, out).context("outliers")?;
    writeln!(out, "== sample")?;
    cmd_sample(&dir.join(OUTLIERS_FILE), &args.sampling, dir, out).context("sample")?;
    writeln!(out, "== stats")?;
    cmd_stats(&dir.join(CASTS_FILE), dir, out).context("stats")?;
    Ok(())
}
