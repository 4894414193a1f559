//! Repository manifests: `project_id<TAB>path_or_url[<TAB>branch]` per line.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ManifestError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("line {line}: expected `project_id<TAB>path_or_url[<TAB>branch]`")]
    Malformed { line: usize },
    #[error("line {line}: duplicate project id {id:?}")]
    DuplicateId { line: usize, id: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Local(PathBuf),
    Remote(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub id: String,
    pub location: Location,
    pub branch: Option<String>,
}

fn is_url(s: &str) -> bool {
    s.contains("://") || s.starts_with("git@")
}

/// Parses manifest text. Blank lines and lines starting with `#` are
/// skipped; relative paths resolve against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let mut seen = BTreeSet::new();
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = raw.trim_end_matches('\r').split('\t').map(str::trim).collect();
        let (id, target, branch) = match fields.as_slice() {
            [id, target] => (*id, *target, None),
            [id, target, branch] => (*id, *target, Some(*branch).filter(|b| !b.is_empty())),
            _ => return Err(ManifestError::Malformed { line }),
        };
        if id.is_empty() || target.is_empty() {
            return Err(ManifestError::Malformed { line });
        }
        if !seen.insert(id.to_owned()) {
            return Err(ManifestError::DuplicateId { line, id: id.to_owned() });
        }
        let location =
            if is_url(target) { Location::Remote(target.to_owned()) } else { Location::Local(base.join(target)) };
        entries.push(ManifestEntry { id: id.to_owned(), location, branch: branch.map(str::to_owned) });
    }
    Ok(entries)
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>, ManifestError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ManifestError::Io { path: path.display().to_string(), source })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    parse_manifest(&text, base)
}

/// Local directory for an entry. Remote entries are cloned with the `git`
/// command into `clone_root/<id>` unless a clone already exists there.
pub fn ensure_local(entry: &ManifestEntry, clone_root: &Path) -> Result<PathBuf, String> {
    match &entry.location {
        Location::Local(path) => Ok(path.clone()),
        Location::Remote(url) => {
            let dest = clone_root.join(&entry.id);
            if dest.join(".git").exists() || dest.join("HEAD").exists() {
                return Ok(dest);
            }
            std::fs::create_dir_all(clone_root).map_err(|e| format!("cannot create clone directory: {e}"))?;
            log::info!("cloning {url} into {}", dest.display());
            let status = Command::new("git")
                .arg("clone")
                .arg("--quiet")
                .arg("--no-single-branch")
                .arg(url)
                .arg(&dest)
                .status()
                .map_err(|e| format!("cannot run git: {e}"))?;
            if status.success() {
                Ok(dest)
            } else {
                Err(format!("git clone of {url} failed ({status})"))
            }
        }
    }
}
