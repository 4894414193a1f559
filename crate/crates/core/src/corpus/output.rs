//! Frozen CSV and JSON layouts of corpus artifacts.
//!
//! | file | columns |
//! |---|---|
//! | `files.csv` | project, path, revision, statements, functional, oo, procedural, imperative, label, parse_status |
//! | `projects.csv` | project, revisions, committers, python_files, retained_files, parse_failures, statements, functional, oo, procedural, imperative, label, toy, error |
//! | `features.csv` | feature, paradigm, count |
//! | `evolution.csv` | project, path, first_label, last_label, changed, first_commit, last_commit |
//! | `duplicates.csv` | digest, retained_path, removed_paths, count |

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use super::{Corpus, FileRecord};
use crate::analyzer::UsageRow;
use crate::dedup::{DuplicateReport, DUPLICATE_CSV_HEADER};

pub const FILES_HEADER: [&str; 10] = [
    "project",
    "path",
    "revision",
    "statements",
    "functional",
    "oo",
    "procedural",
    "imperative",
    "label",
    "parse_status",
];

pub const PROJECTS_HEADER: [&str; 14] = [
    "project",
    "revisions",
    "committers",
    "python_files",
    "retained_files",
    "parse_failures",
    "statements",
    "functional",
    "oo",
    "procedural",
    "imperative",
    "label",
    "toy",
    "error",
];

pub const FEATURES_HEADER: [&str; 3] = ["feature", "paradigm", "count"];

pub const EVOLUTION_HEADER: [&str; 7] =
    ["project", "path", "first_label", "last_label", "changed", "first_commit", "last_commit"];

fn csv_err(e: csv::Error) -> io::Error {
    io::Error::other(e)
}

fn file_row(f: &FileRecord) -> Vec<String> {
    let c = f.counts();
    vec![
        f.project.clone(),
        f.path.clone(),
        f.revision.clone().unwrap_or_default(),
        c.statements.to_string(),
        c.functional.to_string(),
        c.oo.to_string(),
        c.procedural.to_string(),
        c.imperative.to_string(),
        f.label.map(|l| l.as_str().to_owned()).unwrap_or_default(),
        f.status.as_str().to_owned(),
    ]
}

/// Writes file records. With `with_project` false the project column is
/// dropped.
pub fn write_files_csv<'a>(
    out: impl Write,
    files: impl IntoIterator<Item = &'a FileRecord>,
    with_project: bool,
) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let skip = usize::from(!with_project);
    w.write_record(&FILES_HEADER[skip..]).map_err(csv_err)?;
    for f in files {
        w.write_record(&file_row(f)[skip..]).map_err(csv_err)?;
    }
    w.flush()
}

/// One JSON object per line, same fields as the CSV.
pub fn write_files_jsonl<'a>(
    mut out: impl Write,
    files: impl IntoIterator<Item = &'a FileRecord>,
    with_project: bool,
) -> io::Result<()> {
    #[derive(Serialize)]
    struct Line<'r> {
        #[serde(skip_serializing_if = "Option::is_none")]
        project: Option<&'r str>,
        path: &'r str,
        revision: Option<&'r str>,
        statements: u64,
        functional: u64,
        oo: u64,
        procedural: u64,
        imperative: u64,
        label: Option<&'static str>,
        parse_status: &'static str,
    }
    for f in files {
        let c = f.counts();
        let line = Line {
            project: with_project.then_some(f.project.as_str()),
            path: &f.path,
            revision: f.revision.as_deref(),
            statements: c.statements,
            functional: c.functional,
            oo: c.oo,
            procedural: c.procedural,
            imperative: c.imperative,
            label: f.label.map(|l| l.as_str()),
            parse_status: f.status.as_str(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_projects_csv(out: impl Write, corpus: &Corpus) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(PROJECTS_HEADER).map_err(csv_err)?;
    for p in &corpus.projects {
        let a = &p.aggregate;
        w.write_record([
            p.id.clone(),
            p.revisions.to_string(),
            p.committers.to_string(),
            p.python_files.to_string(),
            p.files.len().to_string(),
            p.parse_failures.to_string(),
            a.statements.to_string(),
            a.functional.to_string(),
            a.oo.to_string(),
            a.procedural.to_string(),
            a.imperative.to_string(),
            if p.is_analyzed() { p.label.as_str().to_owned() } else { String::new() },
            p.is_toy(corpus.min_revisions).to_string(),
            p.error.clone().unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

pub fn write_features_csv(out: impl Write, rows: &[UsageRow]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(FEATURES_HEADER).map_err(csv_err)?;
    for r in rows {
        w.write_record([r.feature, r.paradigm.as_str(), &r.count.to_string()]).map_err(csv_err)?;
    }
    w.flush()
}

pub fn write_evolution_csv(out: impl Write, corpus: &Corpus) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(EVOLUTION_HEADER).map_err(csv_err)?;
    for r in &corpus.evolution {
        w.write_record([
            r.project.as_str(),
            r.path.as_str(),
            r.first.as_str(),
            r.last.as_str(),
            if r.changed() { "true" } else { "false" },
            r.first_commit.as_str(),
            r.last_commit.as_str(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()
}

pub fn write_duplicates_csv(out: impl Write, report: &DuplicateReport) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(DUPLICATE_CSV_HEADER).map_err(csv_err)?;
    for row in report.csv_rows() {
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

fn create(dir: &Path, name: &str) -> io::Result<io::BufWriter<fs::File>> {
    Ok(io::BufWriter::new(fs::File::create(dir.join(name))?))
}

/// Writes files.csv, projects.csv, features.csv, evolution.csv and
/// report.json into `dir`.
pub fn write_corpus_outputs(dir: &Path, corpus: &Corpus) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    let files = corpus.files().chain(corpus.failed_files.iter());
    let mut files: Vec<&FileRecord> = files.collect();
    files.sort_by(|a, b| (&a.project, &a.path).cmp(&(&b.project, &b.path)));
    write_files_csv(create(dir, "files.csv")?, files, true)?;
    write_projects_csv(create(dir, "projects.csv")?, corpus)?;
    write_features_csv(create(dir, "features.csv")?, &corpus.features().usage_rows())?;
    write_evolution_csv(create(dir, "evolution.csv")?, corpus)?;
    fs::write(dir.join("report.json"), to_json(&corpus.report()))
}
