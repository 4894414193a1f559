//! Repository-scale analysis: snapshots, history, per-project records and
//! corpus reports.

pub mod agreement;
pub mod manifest;
pub mod output;
pub mod stats;
pub mod vcs;

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::analyzer::{analyze_tree, FeatureTally, FileAnalysis, ParadigmCounts, UsageRow};
use crate::dedup::{canonical_hash, dedup_files, dedup_per_project, AstDigest, DedupKey, DuplicateReport};
use crate::labeling::{
    aggregate_project, label_file_with, label_project, percent_profile, FileLabelingConfig, Label,
    ProjectLabelingConfig,
};
use crate::syntax::{parse_source, SourceFile};

use manifest::{ensure_local, ManifestEntry};
pub use stats::{
    decile_histogram, evolution_report, summarize_distribution, DecileHistogram, EvolutionRecord, EvolutionReport,
    LabelCounts, Summary,
};

/// Outcome of reading and parsing one file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseStatus {
    Ok,
    SyntaxError,
    Undecodable,
}

impl ParseStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ParseStatus::Ok => "ok",
            ParseStatus::SyntaxError => "syntax_error",
            ParseStatus::Undecodable => "undecodable",
        }
    }
}

/// One analyzed file. Files that failed to parse carry zero counts, no
/// digest and no label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileRecord {
    pub project: String,
    pub path: String,
    pub revision: Option<String>,
    pub status: ParseStatus,
    pub analysis: FileAnalysis,
    pub digest: Option<AstDigest>,
    pub label: Option<Label>,
    pub diagnostic: Option<String>,
}

impl FileRecord {
    pub fn counts(&self) -> &ParadigmCounts {
        &self.analysis.counts
    }

    pub fn is_ok(&self) -> bool {
        self.status == ParseStatus::Ok
    }
}

impl DedupKey for FileRecord {
    fn project(&self) -> &str {
        &self.project
    }
    fn path(&self) -> &str {
        &self.path
    }
    fn digest(&self) -> AstDigest {
        self.digest.expect("only parsed files are deduplicated")
    }
}

/// Decodes, parses, analyzes and hashes one file.
pub fn analyze_source(
    project: &str,
    path: &str,
    bytes: &[u8],
    revision: Option<&str>,
    labeling: &FileLabelingConfig,
) -> FileRecord {
    let mut record = FileRecord {
        project: project.to_owned(),
        path: path.to_owned(),
        revision: revision.map(str::to_owned),
        status: ParseStatus::Ok,
        analysis: FileAnalysis::default(),
        digest: None,
        label: None,
        diagnostic: None,
    };
    let file = match SourceFile::from_bytes(path, bytes) {
        Ok(f) => f,
        Err(e) => {
            log::warn!("{project}: {e}");
            record.status = ParseStatus::Undecodable;
            record.diagnostic = Some(e.to_string());
            return record;
        }
    };
    match parse_source(&file) {
        Ok(tree) => {
            record.analysis = analyze_tree(&tree);
            record.digest = Some(canonical_hash(&tree));
            record.label = Some(label_file_with(&record.analysis.counts, labeling));
        }
        Err(e) => {
            log::warn!("{project}: {e}");
            record.status = ParseStatus::SyntaxError;
            record.diagnostic = Some(e.to_string());
        }
    }
    record
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DedupMode {
    #[default]
    Global,
    PerProject,
    Off,
}

#[derive(Debug, Clone)]
pub struct CorpusConfig {
    pub jobs: usize,
    pub dedup: DedupMode,
    pub min_revisions: u64,
    /// Overrides every manifest entry's branch.
    pub branch: Option<String>,
    pub include_remote_branches: bool,
    /// Whether to compute first/last labels over history.
    pub history: bool,
    pub file_labeling: FileLabelingConfig,
    pub project_labeling: ProjectLabelingConfig,
    /// Where remote manifest entries are cloned.
    pub clone_dir: PathBuf,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        CorpusConfig {
            jobs: 1,
            dedup: DedupMode::Global,
            min_revisions: 10,
            branch: None,
            include_remote_branches: false,
            history: true,
            file_labeling: FileLabelingConfig::default(),
            project_labeling: ProjectLabelingConfig::default(),
            clone_dir: PathBuf::from("clones"),
        }
    }
}

/// Raw per-project results before deduplication.
#[derive(Debug, Clone, Default)]
pub struct ProjectScan {
    pub id: String,
    pub revisions: u64,
    pub committers: u64,
    pub head: Option<String>,
    pub files: Vec<FileRecord>,
    pub evolution: Vec<EvolutionRecord>,
    /// History versions that could not be parsed, so their path has no
    /// evolution record.
    pub evolution_skipped: u64,
    pub error: Option<String>,
}

/// Reads one repository. Errors end up in [`ProjectScan::error`].
pub fn scan_project(id: &str, repo_path: &Path, branch: Option<&str>, config: &CorpusConfig) -> ProjectScan {
    let mut scan = ProjectScan { id: id.to_owned(), ..ProjectScan::default() };
    if let Err(e) = scan_into(&mut scan, repo_path, branch, config) {
        log::error!("{id}: {e}");
        scan.error = Some(e.to_string());
        scan.files.clear();
        scan.evolution.clear();
    }
    scan
}

fn scan_into(
    scan: &mut ProjectScan,
    repo_path: &Path,
    branch: Option<&str>,
    config: &CorpusConfig,
) -> Result<(), vcs::VcsError> {
    let repo = vcs::open(repo_path)?;
    let snapshot = vcs::enumerate_snapshot(&repo, branch)?;
    scan.head = snapshot.head.clone();
    scan.committers = vcs::count_committers(&repo, branch)?;
    let head = snapshot.head.as_deref();
    scan.files = snapshot
        .files
        .par_iter()
        .map(|f| analyze_source(&scan.id, &f.path, &f.content, head, &config.file_labeling))
        .collect();
    if config.history {
        let history = vcs::enumerate_history(&repo, config.include_remote_branches)?;
        scan.revisions = history.revisions;
        for (path, h) in &history.files {
            let label_of = |blob| -> Result<Option<Label>, vcs::VcsError> {
                let bytes = vcs::read_blob(&repo, blob)?;
                Ok(analyze_source(&scan.id, path, &bytes, None, &config.file_labeling).label)
            };
            match (label_of(h.first_blob)?, label_of(h.last_blob)?) {
                (Some(first), Some(last)) => scan.evolution.push(EvolutionRecord {
                    project: scan.id.clone(),
                    path: path.clone(),
                    first,
                    last,
                    first_commit: h.first_commit.to_string(),
                    last_commit: h.last_commit.to_string(),
                }),
                _ => scan.evolution_skipped += 1,
            }
        }
    } else {
        scan.revisions = vcs::count_revisions(&repo, config.include_remote_branches)?;
    }
    Ok(())
}

/// Per-project aggregates over the (deduplicated) head snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectRecord {
    pub id: String,
    pub revisions: u64,
    pub committers: u64,
    /// `.py` files at head, before deduplication and including failures.
    pub python_files: usize,
    /// Parsed files kept after deduplication.
    pub files: Vec<FileRecord>,
    pub parse_failures: usize,
    pub aggregate: ParadigmCounts,
    pub label: Label,
    pub file_labels: LabelCounts,
    pub error: Option<String>,
}

impl ProjectRecord {
    fn new(scan: &ProjectScan, files: Vec<FileRecord>, config: &ProjectLabelingConfig) -> Self {
        let aggregate = aggregate_project(files.iter().map(FileRecord::counts));
        ProjectRecord {
            id: scan.id.clone(),
            revisions: scan.revisions,
            committers: scan.committers,
            python_files: scan.files.len(),
            parse_failures: scan.files.iter().filter(|f| !f.is_ok()).count(),
            file_labels: files.iter().filter_map(|f| f.label).collect(),
            label: label_project(&aggregate, config),
            aggregate,
            files,
            error: scan.error.clone(),
        }
    }

    pub fn is_toy(&self, min_revisions: u64) -> bool {
        self.revisions < min_revisions
    }

    pub fn is_single_file(&self) -> bool {
        self.python_files == 1
    }

    pub fn is_analyzed(&self) -> bool {
        self.error.is_none()
    }
}

/// Records with at least `min_revisions` revisions.
pub fn filter_toys(records: &[ProjectRecord], min_revisions: u64) -> Vec<&ProjectRecord> {
    records.iter().filter(|r| !r.is_toy(min_revisions)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramScope {
    Files,
    Projects,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subset {
    All,
    NoToys,
    SingleFile,
}

/// Label counts over analyzed projects (or their files) in a subset.
pub fn label_histogram(
    records: &[ProjectRecord],
    scope: HistogramScope,
    subset: Subset,
    min_revisions: u64,
) -> LabelCounts {
    let chosen = records.iter().filter(|r| r.is_analyzed()).filter(|r| match subset {
        Subset::All => true,
        Subset::NoToys => !r.is_toy(min_revisions),
        Subset::SingleFile => r.is_single_file(),
    });
    let mut counts = LabelCounts::default();
    for r in chosen {
        match scope {
            HistogramScope::Projects => counts.add(r.label),
            HistogramScope::Files => {
                for label in r.files.iter().filter_map(|f| f.label) {
                    counts.add(label);
                }
            }
        }
    }
    counts
}

/// Everything a corpus run produces.
#[derive(Debug, Clone)]
pub struct Corpus {
    /// Sorted by project id.
    pub projects: Vec<ProjectRecord>,
    /// Files at head that could not be analyzed.
    pub failed_files: Vec<FileRecord>,
    pub dedup_mode: DedupMode,
    pub duplicates: DuplicateReport,
    pub evolution: Vec<EvolutionRecord>,
    pub evolution_skipped: u64,
    pub min_revisions: u64,
    pub history: bool,
}

/// Deduplicates and aggregates scans. Order of `scans` does not matter.
pub fn assemble(mut scans: Vec<ProjectScan>, config: &CorpusConfig) -> Corpus {
    scans.sort_by(|a, b| a.id.cmp(&b.id));
    let (parsed, mut failed): (Vec<FileRecord>, Vec<FileRecord>) =
        scans.iter().flat_map(|s| s.files.iter().cloned()).partition(FileRecord::is_ok);
    failed.sort_by(|a, b| (&a.project, &a.path).cmp(&(&b.project, &b.path)));
    let (retained, duplicates) = match config.dedup {
        DedupMode::Global => dedup_files(parsed),
        DedupMode::PerProject => dedup_per_project(parsed),
        DedupMode::Off => {
            let total = parsed.len();
            let mut parsed = parsed;
            parsed.sort_by(|a, b| (&a.project, &a.path).cmp(&(&b.project, &b.path)));
            (parsed, DuplicateReport { total, retained: total, ..DuplicateReport::default() })
        }
    };
    let mut retained = retained.into_iter().peekable();
    let mut projects = Vec::with_capacity(scans.len());
    for scan in &scans {
        let mut files = Vec::new();
        while let Some(f) = retained.next_if(|f| f.project == scan.id) {
            files.push(f);
        }
        projects.push(ProjectRecord::new(scan, files, &config.project_labeling));
    }
    let mut evolution: Vec<EvolutionRecord> = scans.iter().flat_map(|s| s.evolution.iter().cloned()).collect();
    evolution.sort_by(|a, b| (&a.project, &a.path).cmp(&(&b.project, &b.path)));
    Corpus {
        projects,
        failed_files: failed,
        dedup_mode: config.dedup,
        duplicates,
        evolution,
        evolution_skipped: scans.iter().map(|s| s.evolution_skipped).sum(),
        min_revisions: config.min_revisions,
        history: config.history,
    }
}

fn thread_pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool construction")
}

/// Scans every manifest entry on a pool of `config.jobs` workers, then
/// assembles the corpus.
pub fn run_corpus(entries: &[ManifestEntry], config: &CorpusConfig) -> Corpus {
    let scans = thread_pool(config.jobs).install(|| {
        entries
            .par_iter()
            .map(|entry| {
                let branch = config.branch.as_deref().or(entry.branch.as_deref());
                match ensure_local(entry, &config.clone_dir) {
                    Ok(path) => scan_project(&entry.id, &path, branch, config),
                    Err(error) => {
                        log::error!("{}: {error}", entry.id);
                        ProjectScan { id: entry.id.clone(), error: Some(error), ..ProjectScan::default() }
                    }
                }
            })
            .collect::<Vec<_>>()
    });
    assemble(scans, config)
}

/// Analyzes a single repository as a one-project corpus.
pub fn build_project_record(id: &str, repo_path: &Path, config: &CorpusConfig) -> Corpus {
    let scan = thread_pool(config.jobs).install(|| scan_project(id, repo_path, config.branch.as_deref(), config));
    assemble(vec![scan], config)
}

impl Corpus {
    pub fn analyzed(&self) -> impl Iterator<Item = &ProjectRecord> {
        self.projects.iter().filter(|p| p.is_analyzed())
    }

    /// Retained files of analyzed projects, sorted by project and path.
    pub fn files(&self) -> impl Iterator<Item = &FileRecord> {
        self.analyzed().flat_map(|p| p.files.iter())
    }

    pub fn features(&self) -> FeatureTally {
        let mut total = FeatureTally::default();
        for f in self.files() {
            total.merge(&f.analysis.features);
        }
        total
    }

    pub fn evolution_report(&self) -> EvolutionReport {
        evolution_report(&self.evolution)
    }

    pub fn report(&self) -> CorpusReport {
        let projects: Vec<&ProjectRecord> = self.analyzed().collect();
        let files: Vec<&FileRecord> = self.files().collect();
        let summarize =
            |f: &dyn Fn(&FileRecord) -> f64| summarize_distribution(&files.iter().map(|r| f(r)).collect::<Vec<_>>());
        let project_summary = |f: &dyn Fn(&ProjectRecord) -> f64| {
            summarize_distribution(&projects.iter().map(|r| f(r)).collect::<Vec<_>>())
        };
        let deciles = |f: &dyn Fn(&ProjectRecord) -> f64| {
            decile_histogram(&projects.iter().map(|r| (f(r), r.label)).collect::<Vec<_>>())
        };
        let count_status = |s: ParseStatus| self.failed_files.iter().filter(|f| f.status == s).count();
        let records = &self.projects;
        let min = self.min_revisions;
        CorpusReport {
            projects: ProjectTotals {
                total: self.projects.len(),
                analyzed: projects.len(),
                failed: self
                    .projects
                    .iter()
                    .filter_map(|p| p.error.as_ref().map(|e| FailedProject { id: p.id.clone(), error: e.clone() }))
                    .collect(),
            },
            files: FileTotals {
                python_files: self.duplicates.total + self.failed_files.len(),
                parsed: self.duplicates.total,
                syntax_errors: count_status(ParseStatus::SyntaxError),
                undecodable: count_status(ParseStatus::Undecodable),
                retained: files.len(),
            },
            dedup: DedupSummary {
                mode: self.dedup_mode,
                total: self.duplicates.total,
                retained: self.duplicates.retained,
                removed: self.duplicates.removed,
                duplicate_fraction: self.duplicates.duplicate_fraction(),
            },
            file_statistics: PerParadigm {
                statements: Some(summarize(&|r| r.counts().statements as f64)),
                functional: summarize(&|r| r.counts().functional as f64),
                oo: summarize(&|r| r.counts().oo as f64),
                procedural: summarize(&|r| r.counts().procedural as f64),
                imperative: summarize(&|r| r.counts().imperative as f64),
            },
            file_fractions: PerParadigm {
                statements: None,
                functional: summarize(&|r| percent_profile(r.counts()).functional),
                oo: summarize(&|r| percent_profile(r.counts()).oo),
                procedural: summarize(&|r| percent_profile(r.counts()).procedural),
                imperative: summarize(&|r| percent_profile(r.counts()).imperative),
            },
            file_labels: label_histogram(records, HistogramScope::Files, Subset::All, min),
            project_statistics: ProjectStatistics {
                revisions: project_summary(&|r| r.revisions as f64),
                committers: project_summary(&|r| r.committers as f64),
                python_files: project_summary(&|r| r.python_files as f64),
                statements: project_summary(&|r| r.aggregate.statements as f64),
            },
            project_labels: ProjectLabels {
                all: label_histogram(records, HistogramScope::Projects, Subset::All, min),
                no_toys: label_histogram(records, HistogramScope::Projects, Subset::NoToys, min),
                single_file: label_histogram(records, HistogramScope::Projects, Subset::SingleFile, min),
            },
            toy_filter: ToyFilter {
                min_revisions: min,
                removed: projects.iter().filter(|p| p.is_toy(min)).map(|p| p.id.clone()).collect(),
                retained: projects.iter().filter(|p| !p.is_toy(min)).count(),
            },
            features: self.features().usage_rows(),
            size_deciles: SizeDeciles {
                statements: deciles(&|r| r.aggregate.statements as f64),
                committers: deciles(&|r| r.committers as f64),
                revisions: deciles(&|r| r.revisions as f64),
            },
            evolution: self
                .history
                .then(|| EvolutionSection { report: self.evolution_report(), skipped_files: self.evolution_skipped }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusReport {
    pub projects: ProjectTotals,
    pub files: FileTotals,
    pub dedup: DedupSummary,
    /// Per-file tallies (deduplicated head files).
    pub file_statistics: PerParadigm,
    /// Per-file tally over statements.
    pub file_fractions: PerParadigm,
    pub file_labels: LabelCounts,
    pub project_statistics: ProjectStatistics,
    pub project_labels: ProjectLabels,
    pub toy_filter: ToyFilter,
    pub features: Vec<UsageRow>,
    pub size_deciles: SizeDeciles,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evolution: Option<EvolutionSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectTotals {
    pub total: usize,
    pub analyzed: usize,
    pub failed: Vec<FailedProject>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailedProject {
    pub id: String,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FileTotals {
    pub python_files: usize,
    pub parsed: usize,
    pub syntax_errors: usize,
    pub undecodable: usize,
    pub retained: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DedupSummary {
    pub mode: DedupMode,
    pub total: usize,
    pub retained: usize,
    pub removed: usize,
    pub duplicate_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerParadigm {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub statements: Option<Summary>,
    pub functional: Summary,
    pub oo: Summary,
    pub procedural: Summary,
    pub imperative: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectStatistics {
    pub revisions: Summary,
    pub committers: Summary,
    pub python_files: Summary,
    pub statements: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectLabels {
    pub all: LabelCounts,
    pub no_toys: LabelCounts,
    pub single_file: LabelCounts,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToyFilter {
    pub min_revisions: u64,
    pub removed: Vec<String>,
    pub retained: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SizeDeciles {
    pub statements: DecileHistogram,
    pub committers: DecileHistogram,
    pub revisions: DecileHistogram,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionSection {
    #[serde(flatten)]
    pub report: EvolutionReport,
    pub skipped_files: u64,
}
