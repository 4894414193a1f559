//! Command-line interface.
//!
//! Commands that read a manifest (`corpus`, `history`) write their artifacts
//! into `--output-dir`. The rest print to standard output, or write a file
//! into `--output-dir` when one is given.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use walkdir::WalkDir;

use crate::catalog::catalog_rows;
use crate::corpus::agreement::{agreement_rate, cohen_kappa, fleiss_kappa, Kappa, RatingMatrix};
use crate::corpus::manifest::{ensure_local, read_manifest, ManifestEntry};
use crate::corpus::output::{
    to_json, write_corpus_outputs, write_duplicates_csv, write_evolution_csv, write_features_csv, write_files_csv,
    write_files_jsonl, write_projects_csv,
};
use crate::corpus::{
    analyze_source, assemble, build_project_record, run_corpus, scan_project, Corpus, CorpusConfig, DedupMode,
    FileRecord, ParseStatus, ProjectScan, Subset,
};
use crate::dedup::{dedup_files, dedup_per_project};
use crate::labeling::{FileLabelingConfig, ProjectLabelingConfig, Ratio};

/// Classify Python code by programming paradigm.
#[derive(Debug, Parser)]
#[command(name = "paradigm-profiler", version)]
pub struct Cli {
    #[command(flatten)]
    pub options: Options,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-file counts and labels for a file or a directory tree.
    Analyze { path: PathBuf },
    /// Record for one local repository.
    Project {
        repo: PathBuf,
        /// Project id to report; defaults to the directory name.
        #[arg(long)]
        id: Option<String>,
    },
    /// Full corpus reports over a manifest of repositories.
    Corpus { manifest: PathBuf },
    /// First/last label of every file over all branches.
    History { manifest: PathBuf },
    /// Feature usage counts over a manifest's head snapshots.
    Features { manifest: PathBuf },
    /// Duplicate report for a directory tree or a manifest.
    Dedup { input: PathBuf },
    /// Fleiss' (3+ raters) or Cohen's (2 raters) kappa for a ratings CSV.
    Kappa { ratings: PathBuf },
    /// Dump the feature catalog.
    Catalog,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Directory for output files; without it, single-table commands print to stdout.
    #[arg(long, global = true)]
    pub output_dir: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// Keep duplicate files.
    #[arg(long, global = true)]
    pub no_dedup: bool,
    /// Look for duplicates only within each project.
    #[arg(long, global = true, conflicts_with = "no_dedup")]
    pub per_project_dedup: bool,
    /// Revision count below which a project is a toy.
    #[arg(long, global = true, default_value_t = 10)]
    pub min_revisions: u64,
    /// Branch to snapshot instead of each repository's HEAD.
    #[arg(long, global = true)]
    pub branch: Option<String>,
    /// Walk remote-tracking branches too.
    #[arg(long, global = true)]
    pub include_remote_branches: bool,
    /// Drop toy projects from the outputs.
    #[arg(long, global = true)]
    pub no_toys: bool,
    /// Keep only projects with a single Python file.
    #[arg(long, global = true, conflicts_with = "no_toys")]
    pub single_file: bool,
    /// Output format for stdout tables.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Minimum share of statements for a file label (`p/q` or decimal).
    #[arg(long, global = true)]
    pub file_cutoff: Option<Ratio>,
    /// Project is Mixed when the second share exceeds this [default: 2/3].
    #[arg(long, global = true)]
    pub dominant_ceiling: Option<Ratio>,
    /// Project is Mixed when the largest share is below this [default: 1/3].
    #[arg(long, global = true)]
    pub dominant_floor: Option<Ratio>,
    /// Second share above which a close pair is Mixed [default: 1/2].
    #[arg(long, global = true)]
    pub pair_high: Option<Ratio>,
    /// Gap below which a high pair is Mixed [default: 1/5].
    #[arg(long, global = true)]
    pub pair_gap: Option<Ratio>,
    /// Gap below which a project led by at most pair_high is Mixed [default: 1/10].
    #[arg(long, global = true)]
    pub low_gap: Option<Ratio>,
}

/// A validated invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub output_dir: Option<PathBuf>,
    pub format: Format,
    pub subset: Subset,
    pub corpus: CorpusConfig,
}

#[derive(Debug, Clone)]
pub enum CommandKind {
    Analyze(PathBuf),
    Project { repo: PathBuf, id: Option<String> },
    Corpus(PathBuf),
    History(PathBuf),
    Features(PathBuf),
    Dedup(PathBuf),
    Kappa(PathBuf),
    Catalog,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let o = cli.options;
        let mut labeling = ProjectLabelingConfig::default();
        let overrides = [
            (&mut labeling.dominant_ceiling, o.dominant_ceiling),
            (&mut labeling.dominant_floor, o.dominant_floor),
            (&mut labeling.pair_high, o.pair_high),
            (&mut labeling.pair_gap, o.pair_gap),
            (&mut labeling.low_gap, o.low_gap),
        ];
        for (slot, value) in overrides {
            if let Some(v) = value {
                *slot = v;
            }
        }
        labeling.validate()?;
        let mut file_labeling = FileLabelingConfig::default();
        if let Some(cutoff) = o.file_cutoff {
            if cutoff > Ratio::new(1, 1) {
                bail!("--file-cutoff must not exceed 1");
            }
            file_labeling.cutoff = cutoff;
        }
        let command = match cli.command {
            Command::Analyze { path } => CommandKind::Analyze(path),
            Command::Project { repo, id } => CommandKind::Project { repo, id },
            Command::Corpus { manifest } => CommandKind::Corpus(manifest),
            Command::History { manifest } => CommandKind::History(manifest),
            Command::Features { manifest } => CommandKind::Features(manifest),
            Command::Dedup { input } => CommandKind::Dedup(input),
            Command::Kappa { ratings } => CommandKind::Kappa(ratings),
            Command::Catalog => CommandKind::Catalog,
        };
        let base = o.output_dir.clone().unwrap_or_else(|| PathBuf::from("."));
        let history = matches!(command, CommandKind::Corpus(_) | CommandKind::History(_) | CommandKind::Project { .. });
        Ok(RunConfig {
            command,
            output_dir: o.output_dir,
            format: o.format,
            subset: if o.no_toys {
                Subset::NoToys
            } else if o.single_file {
                Subset::SingleFile
            } else {
                Subset::All
            },
            corpus: CorpusConfig {
                jobs: usize::from(o.jobs),
                dedup: if o.no_dedup {
                    DedupMode::Off
                } else if o.per_project_dedup {
                    DedupMode::PerProject
                } else {
                    DedupMode::Global
                },
                min_revisions: o.min_revisions,
                branch: o.branch,
                include_remote_branches: o.include_remote_branches,
                history,
                file_labeling,
                project_labeling: labeling,
                clone_dir: base.join("clones"),
            },
        })
    }
}

/// Runs the binary: parses arguments, executes, and reports fatal errors as
/// a JSON object on standard error. Returns the exit status.
pub fn main() -> i32 {
    init_logging();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            report_error("usage", &e.render().to_string());
            return 2;
        }
    };
    let outcome = RunConfig::from_cli(cli).and_then(|config| run(&config));
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            report_error("fatal", &format!("{e:#}"));
            1
        }
    }
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or("PARADIGM_PROFILER_LOG", "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn report_error(kind: &str, message: &str) {
    #[derive(Serialize)]
    struct ErrorSummary<'a> {
        error: &'a str,
        message: &'a str,
    }
    let line = serde_json::to_string(&ErrorSummary { error: kind, message: message.trim_end() })
        .expect("error summaries always serialize");
    eprintln!("{line}");
}

pub fn run(config: &RunConfig) -> Result<()> {
    match &config.command {
        CommandKind::Analyze(path) => analyze(config, path),
        CommandKind::Project { repo, id } => project(config, repo, id.as_deref()),
        CommandKind::Corpus(manifest) => {
            let corpus = manifest_corpus(config, manifest)?;
            let dir = required_dir(config);
            write_corpus_outputs(dir, &corpus).with_context(|| format!("writing outputs to {}", dir.display()))
        }
        CommandKind::History(manifest) => {
            let corpus = manifest_corpus(config, manifest)?;
            let dir = required_dir(config);
            fs::create_dir_all(dir)?;
            write_evolution_csv(create(dir, "evolution.csv")?, &corpus)?;
            let section = corpus.report().evolution;
            fs::write(dir.join("evolution.json"), to_json(&section))?;
            Ok(())
        }
        CommandKind::Features(manifest) => {
            let corpus = manifest_corpus(config, manifest)?;
            let rows = corpus.features().usage_rows();
            emit(config, "features.csv", |out, format| match format {
                Format::Csv => write_features_csv(out, &rows),
                Format::Json => out.write_all(to_json(&rows).as_bytes()),
            })
        }
        CommandKind::Dedup(input) => dedup(config, input),
        CommandKind::Kappa(ratings) => kappa(config, ratings),
        CommandKind::Catalog => emit(config, "catalog.csv", |out, format| match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                for row in catalog_rows() {
                    w.serialize(row).map_err(io::Error::other)?;
                }
                w.flush()
            }
            Format::Json => out.write_all(to_json(&catalog_rows()).as_bytes()),
        }),
    }
}

fn required_dir(config: &RunConfig) -> &Path {
    config.output_dir.as_deref().unwrap_or_else(|| Path::new("."))
}

fn create(dir: &Path, name: &str) -> io::Result<io::BufWriter<fs::File>> {
    Ok(io::BufWriter::new(fs::File::create(dir.join(name))?))
}

/// Writes to `<output-dir>/<name>` when an output directory is set, else to
/// standard output.
fn emit(config: &RunConfig, name: &str, write: impl FnOnce(&mut dyn Write, Format) -> io::Result<()>) -> Result<()> {
    match &config.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut out = create(dir, name)?;
            write(&mut out, config.format)?;
            out.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write(&mut out, config.format)?;
            out.flush()?;
        }
    }
    Ok(())
}

fn restrict(mut corpus: Corpus, subset: Subset) -> Corpus {
    let min = corpus.min_revisions;
    let keep = |p: &crate::corpus::ProjectRecord| match subset {
        Subset::All => true,
        Subset::NoToys => !p.is_toy(min),
        Subset::SingleFile => p.is_single_file(),
    };
    let kept: std::collections::BTreeSet<String> =
        corpus.projects.iter().filter(|p| keep(p)).map(|p| p.id.clone()).collect();
    corpus.projects.retain(|p| kept.contains(&p.id));
    corpus.evolution.retain(|e| kept.contains(&e.project));
    corpus.failed_files.retain(|f| kept.contains(&f.project));
    corpus
}

fn manifest_corpus(config: &RunConfig, manifest: &Path) -> Result<Corpus> {
    let entries = read_manifest(manifest)?;
    Ok(restrict(run_corpus(&entries, &config.corpus), config.subset))
}

/// `.py` files under `root`, sorted, as (display path, absolute path).
fn python_files(root: &Path) -> Result<Vec<(String, PathBuf)>> {
    if root.is_file() {
        return Ok(vec![(root.to_string_lossy().into_owned(), root.to_path_buf())]);
    }
    if !root.is_dir() {
        bail!("{} does not exist", root.display());
    }
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == "py") {
            let rel = entry.path().strip_prefix(root).unwrap_or(entry.path());
            let display = rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/");
            out.push((display, entry.path().to_path_buf()));
        }
    }
    Ok(out)
}

fn analyze_paths(config: &RunConfig, root: &Path) -> Result<Vec<FileRecord>> {
    let files = python_files(root)?;
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.corpus.jobs).build()?;
    pool.install(|| {
        files
            .par_iter()
            .map(|(display, path)| {
                let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
                Ok(analyze_source("", display, &bytes, None, &config.corpus.file_labeling))
            })
            .collect()
    })
}

fn analyze(config: &RunConfig, path: &Path) -> Result<()> {
    let records = analyze_paths(config, path)?;
    emit(config, "files.csv", |out, format| match format {
        Format::Csv => write_files_csv(out, &records, false),
        Format::Json => write_files_jsonl(out, &records, false),
    })
}

fn project(config: &RunConfig, repo: &Path, id: Option<&str>) -> Result<()> {
    let id = match id {
        Some(id) => id.to_owned(),
        None => fs::canonicalize(repo)
            .ok()
            .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
            .unwrap_or_else(|| "project".to_owned()),
    };
    let corpus = build_project_record(&id, repo, &config.corpus);
    if let Some(error) = &corpus.projects[0].error {
        bail!("{id}: {error}");
    }
    match &config.output_dir {
        Some(dir) => {
            write_corpus_outputs(dir, &corpus).with_context(|| format!("writing outputs to {}", dir.display()))
        }
        None => {
            let stdout = io::stdout();
            let mut out = stdout.lock();
            match config.format {
                Format::Csv => write_projects_csv(&mut out, &corpus)?,
                Format::Json => out.write_all(to_json(&ProjectJson::new(&corpus)).as_bytes())?,
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ProjectJson<'a> {
    project: &'a str,
    revisions: u64,
    committers: u64,
    python_files: usize,
    retained_files: usize,
    parse_failures: usize,
    counts: &'a crate::analyzer::ParadigmCounts,
    label: crate::labeling::Label,
    toy: bool,
    file_labels: crate::corpus::LabelCounts,
}

impl<'a> ProjectJson<'a> {
    fn new(corpus: &'a Corpus) -> Self {
        let p = &corpus.projects[0];
        ProjectJson {
            project: &p.id,
            revisions: p.revisions,
            committers: p.committers,
            python_files: p.python_files,
            retained_files: p.files.len(),
            parse_failures: p.parse_failures,
            counts: &p.aggregate,
            label: p.label,
            toy: p.is_toy(corpus.min_revisions),
            file_labels: p.file_labels,
        }
    }
}

fn dedup(config: &RunConfig, input: &Path) -> Result<()> {
    let parsed: Vec<FileRecord> = if input.is_dir() {
        analyze_paths(config, input)?
    } else {
        let entries: Vec<ManifestEntry> = read_manifest(input)?;
        let pool = rayon::ThreadPoolBuilder::new().num_threads(config.corpus.jobs).build()?;
        let scan_config = CorpusConfig { history: false, ..config.corpus.clone() };
        let scans: Vec<ProjectScan> = pool.install(|| {
            entries
                .par_iter()
                .map(|e| {
                    let branch = config.corpus.branch.as_deref().or(e.branch.as_deref());
                    match ensure_local(e, &config.corpus.clone_dir) {
                        Ok(path) => scan_project(&e.id, &path, branch, &scan_config),
                        Err(error) => ProjectScan { id: e.id.clone(), error: Some(error), ..ProjectScan::default() },
                    }
                })
                .collect()
        });
        for s in scans.iter().filter(|s| s.error.is_some()) {
            log::error!("{}: {}", s.id, s.error.as_deref().unwrap_or_default());
        }
        let corpus = assemble(scans, &CorpusConfig { dedup: DedupMode::Off, ..scan_config });
        corpus.files().cloned().collect()
    };
    let parsed: Vec<FileRecord> = parsed.into_iter().filter(|f| f.status == ParseStatus::Ok).collect();
    let (_, report) =
        if config.corpus.dedup == DedupMode::PerProject { dedup_per_project(parsed) } else { dedup_files(parsed) };
    emit(config, "duplicates.csv", |out, format| match format {
        Format::Csv => write_duplicates_csv(out, &report),
        Format::Json => {
            #[derive(Serialize)]
            struct Json<'r> {
                #[serde(flatten)]
                report: &'r crate::dedup::DuplicateReport,
                duplicate_fraction: f64,
            }
            let json = Json { report: &report, duplicate_fraction: report.duplicate_fraction() };
            out.write_all(to_json(&json).as_bytes())
        }
    })
}

#[derive(Debug, Serialize)]
struct KappaOutput {
    method: &'static str,
    raters: usize,
    subjects: usize,
    kappa: Option<f64>,
    observed: f64,
    chance: f64,
    interpretation: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    agreement_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostic: Option<String>,
}

fn kappa(config: &RunConfig, ratings: &Path) -> Result<()> {
    let file = fs::File::open(ratings).with_context(|| format!("opening {}", ratings.display()))?;
    let matrix = RatingMatrix::read_csv(file)?;
    let (method, k, rate): (&str, Kappa, Option<f64>) = if matrix.raters().len() == 2 {
        let (a, b) = (matrix.column(0), matrix.column(1));
        ("cohen", cohen_kappa(&a, &b)?, Some(agreement_rate(&a, &b)?))
    } else {
        ("fleiss", fleiss_kappa(&matrix), None)
    };
    if let Some(d) = &k.diagnostic {
        log::warn!("{d}");
    }
    let out = KappaOutput {
        method,
        raters: matrix.raters().len(),
        subjects: matrix.rows().len(),
        kappa: k.is_defined().then_some(k.value),
        observed: k.observed,
        chance: k.chance,
        interpretation: k.interpretation(),
        agreement_rate: rate,
        diagnostic: k.diagnostic.clone(),
    };
    emit(config, "kappa.csv", |w, format| match format {
        Format::Json => w.write_all(to_json(&out).as_bytes()),
        Format::Csv => {
            let mut c = csv::Writer::from_writer(w);
            c.write_record([
                "method",
                "raters",
                "subjects",
                "kappa",
                "observed",
                "chance",
                "interpretation",
                "agreement_rate",
            ])
            .map_err(io::Error::other)?;
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            c.write_record([
                out.method.to_owned(),
                out.raters.to_string(),
                out.subjects.to_string(),
                opt(out.kappa),
                out.observed.to_string(),
                out.chance.to_string(),
                out.interpretation.to_owned(),
                opt(out.agreement_rate),
            ])
            .map_err(io::Error::other)?;
            c.flush()
        }
    })
}
