//! Exact-duplicate detection by canonical AST digest.
//!
//! Two files are duplicates when their canonical serializations (see
//! [`canonical_json`]) are identical. Comments, whitespace and source
//! positions never reach the serialization; identifier names and literal
//! values do.

mod canonical;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::syntax::{SourceFile, SyntaxTree};

/// SHA-256 of a canonical serialization.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AstDigest([u8; 32]);

impl AstDigest {
    pub fn as_bytes(&self) -> &[u8; 32] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.0)
    }
}

impl fmt::Display for AstDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl fmt::Debug for AstDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AstDigest({})", &self.to_hex()[..12])
    }
}

impl FromStr for AstDigest {
    type Err = hex::FromHexError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = [0u8; 32];
        hex::decode_to_slice(s, &mut out)?;
        Ok(AstDigest(out))
    }
}

impl Serialize for AstDigest {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

/// The canonical JSON form of a parsed module.
pub fn canonical_json(tree: &SyntaxTree) -> String {
    canonical::serialize_module(tree.suite())
}

pub fn canonical_hash(tree: &SyntaxTree) -> AstDigest {
    AstDigest(Sha256::digest(canonical_json(tree).as_bytes()).into())
}

/// Anything that can take part in deduplication.
pub trait DedupKey {
    fn project(&self) -> &str;
    fn path(&self) -> &str;
    fn digest(&self) -> AstDigest;
}

/// A source file paired with its digest and owning project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashedFile {
    pub project: String,
    pub file: SourceFile,
    pub digest: AstDigest,
}

impl DedupKey for HashedFile {
    fn project(&self) -> &str {
        &self.project
    }
    fn path(&self) -> &str {
        &self.file.path
    }
    fn digest(&self) -> AstDigest {
        self.digest
    }
}

/// A file location inside the corpus.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct FileRef {
    pub project: String,
    pub path: String,
}

impl fmt::Display for FileRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.project.is_empty() {
            f.write_str(&self.path)
        } else {
            write!(f, "{}:{}", self.project, self.path)
        }
    }
}

/// One set of files sharing a digest, with more than one member.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DuplicateGroup {
    pub digest: AstDigest,
    pub retained: FileRef,
    pub removed: Vec<FileRef>,
}

impl DuplicateGroup {
    /// Number of files in the group, the retained one included.
    pub fn count(&self) -> usize {
        self.removed.len() + 1
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DuplicateReport {
    pub total: usize,
    pub retained: usize,
    pub removed: usize,
    pub groups: Vec<DuplicateGroup>,
}

impl DuplicateReport {
    /// Removed files over all files; 0 for an empty input.
    pub fn duplicate_fraction(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.removed as f64 / self.total as f64
        }
    }

    fn absorb(&mut self, other: DuplicateReport) {
        self.total += other.total;
        self.retained += other.retained;
        self.removed += other.removed;
        self.groups.extend(other.groups);
    }

    /// CSV rows: digest, retained path, removed paths (`;`-separated), count.
    pub fn csv_rows(&self) -> Vec<[String; 4]> {
        self.groups
            .iter()
            .map(|g| {
                let removed: Vec<String> = g.removed.iter().map(ToString::to_string).collect();
                [g.digest.to_hex(), g.retained.to_string(), removed.join(";"), g.count().to_string()]
            })
            .collect()
    }
}

pub const DUPLICATE_CSV_HEADER: [&str; 4] = ["digest", "retained_path", "removed_paths", "count"];

/// Keeps one file per distinct digest: the one with the smallest
/// `(project, path)`. Retained files come back sorted by `(project, path)`,
/// groups by digest.
pub fn dedup_files<T: DedupKey>(files: Vec<T>) -> (Vec<T>, DuplicateReport) {
    let total = files.len();
    let mut by_digest: BTreeMap<AstDigest, Vec<T>> = BTreeMap::new();
    for f in files {
        by_digest.entry(f.digest()).or_default().push(f);
    }
    let mut retained = Vec::with_capacity(by_digest.len());
    let mut groups = Vec::new();
    for (digest, mut members) in by_digest {
        members.sort_by(|a, b| (a.project(), a.path()).cmp(&(b.project(), b.path())));
        let mut members = members.into_iter();
        let keep = members.next().expect("groups are never empty");
        let removed: Vec<FileRef> = members.map(|m| file_ref(&m)).collect();
        if !removed.is_empty() {
            groups.push(DuplicateGroup { digest, retained: file_ref(&keep), removed });
        }
        retained.push(keep);
    }
    retained.sort_by(|a, b| (a.project(), a.path()).cmp(&(b.project(), b.path())));
    let report = DuplicateReport { total, retained: retained.len(), removed: total - retained.len(), groups };
    (retained, report)
}

/// Like [`dedup_files`], but duplicates are only looked for inside each
/// project.
pub fn dedup_per_project<T: DedupKey>(files: Vec<T>) -> (Vec<T>, DuplicateReport) {
    let mut by_project: BTreeMap<String, Vec<T>> = BTreeMap::new();
    for f in files {
        by_project.entry(f.project().to_owned()).or_default().push(f);
    }
    let mut retained = Vec::new();
    let mut report = DuplicateReport::default();
    for (_, members) in by_project {
        let (kept, r) = dedup_files(members);
        retained.extend(kept);
        report.absorb(r);
    }
    report.groups.sort_by(|a, b| a.digest.cmp(&b.digest).then_with(|| a.retained.cmp(&b.retained)));
    (retained, report)
}

fn file_ref<T: DedupKey>(f: &T) -> FileRef {
    FileRef { project: f.project().to_owned(), path: f.path().to_owned() }
}
