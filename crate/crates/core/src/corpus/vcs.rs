//! Read-only access to local git repositories.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use git2::{
    BranchType, Commit, Delta, DiffOptions, ErrorCode, ObjectType, Oid, Repository, Sort, Tree, TreeWalkMode,
    TreeWalkResult,
};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VcsError {
    #[error("not a readable git repository")]
    Open(#[source] git2::Error),
    #[error("branch {0:?} not found")]
    MissingBranch(String),
    #[error(transparent)]
    Git(#[from] git2::Error),
}

/// A `.py` file at the head snapshot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnapshotFile {
    pub path: String,
    pub content: Vec<u8>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Snapshot {
    /// Head commit id; `None` for a repository with no commits.
    pub head: Option<String>,
    /// Files sorted by path.
    pub files: Vec<SnapshotFile>,
}

/// The earliest and latest version of a path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FileHistory {
    pub first_blob: Oid,
    pub first_commit: Oid,
    pub last_blob: Oid,
    pub last_commit: Oid,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct History {
    /// Distinct commits reachable from the branches that were walked.
    pub revisions: u64,
    pub files: BTreeMap<String, FileHistory>,
}

pub fn open(path: &Path) -> Result<Repository, VcsError> {
    Repository::open(path).map_err(VcsError::Open)
}

fn is_python(path: &str) -> bool {
    path.ends_with(".py")
}

/// The commit at the tip of `branch`, or of HEAD when no branch is given.
/// `None` for an unborn HEAD.
pub fn head_commit<'r>(repo: &'r Repository, branch: Option<&str>) -> Result<Option<Commit<'r>>, VcsError> {
    match branch {
        Some(name) => {
            let branch =
                repo.find_branch(name, BranchType::Local).map_err(|_| VcsError::MissingBranch(name.to_owned()))?;
            Ok(Some(branch.get().peel_to_commit()?))
        }
        None => match repo.head() {
            Ok(head) => Ok(Some(head.peel_to_commit()?)),
            Err(e) if matches!(e.code(), ErrorCode::UnbornBranch | ErrorCode::NotFound) => Ok(None),
            Err(e) => Err(e.into()),
        },
    }
}

/// All `.py` blobs in the tree of the head commit.
pub fn enumerate_snapshot(repo: &Repository, branch: Option<&str>) -> Result<Snapshot, VcsError> {
    let Some(commit) = head_commit(repo, branch)? else {
        return Ok(Snapshot::default());
    };
    let tree = commit.tree()?;
    let mut blobs = Vec::new();
    tree.walk(TreeWalkMode::PreOrder, |root, entry| {
        // Skip symlinks (mode 120000) and submodules.
        if entry.kind() == Some(ObjectType::Blob) && entry.filemode() != 0o120000 {
            if let Ok(name) = entry.name() {
                let path = format!("{root}{name}");
                if is_python(&path) {
                    blobs.push((path, entry.id()));
                }
            }
        }
        TreeWalkResult::Ok
    })?;
    blobs.sort();
    let files = blobs
        .into_iter()
        .map(|(path, oid)| Ok(SnapshotFile { path, content: repo.find_blob(oid)?.content().to_vec() }))
        .collect::<Result<_, git2::Error>>()?;
    Ok(Snapshot { head: Some(commit.id().to_string()), files })
}

pub fn read_blob(repo: &Repository, oid: Oid) -> Result<Vec<u8>, VcsError> {
    Ok(repo.find_blob(oid)?.content().to_vec())
}

/// Tips of all local branches, plus remote-tracking branches on request.
fn branch_tips(repo: &Repository, include_remote: bool) -> Result<Vec<Oid>, VcsError> {
    let mut tips = BTreeSet::new();
    let kinds: &[BranchType] =
        if include_remote { &[BranchType::Local, BranchType::Remote] } else { &[BranchType::Local] };
    for &kind in kinds {
        for branch in repo.branches(Some(kind))? {
            let (branch, _) = branch?;
            if let Ok(commit) = branch.get().peel_to_commit() {
                tips.insert(commit.id());
            }
        }
    }
    // A detached HEAD still counts as a line of history.
    if let Ok(Some(head)) = head_commit(repo, None) {
        tips.insert(head.id());
    }
    Ok(tips.into_iter().collect())
}

/// Commits reachable from every branch tip, parents before children, then
/// stably ordered by commit time.
fn ordered_commits(repo: &Repository, include_remote: bool) -> Result<Vec<Oid>, VcsError> {
    let tips = branch_tips(repo, include_remote)?;
    if tips.is_empty() {
        return Ok(Vec::new());
    }
    let mut walk = repo.revwalk()?;
    walk.set_sorting(Sort::TOPOLOGICAL | Sort::REVERSE)?;
    for tip in tips {
        walk.push(tip)?;
    }
    let mut commits = Vec::new();
    for oid in walk {
        let oid = oid?;
        let time = repo.find_commit(oid)?.time().seconds();
        commits.push((time, oid));
    }
    commits.sort_by_key(|&(time, _)| time);
    Ok(commits.into_iter().map(|(_, oid)| oid).collect())
}

/// `.py` paths added or modified between two trees, with their new blobs.
fn touched(repo: &Repository, old: Option<&Tree<'_>>, new: &Tree<'_>) -> Result<HashMap<String, Oid>, VcsError> {
    let mut opts = DiffOptions::new();
    opts.ignore_submodules(true);
    let diff = repo.diff_tree_to_tree(old, Some(new), Some(&mut opts))?;
    let mut out = HashMap::new();
    for delta in diff.deltas() {
        if !matches!(delta.status(), Delta::Added | Delta::Modified | Delta::Typechange) {
            continue;
        }
        let file = delta.new_file();
        if file.mode() == git2::FileMode::Link {
            continue;
        }
        if let Some(path) = file.path().and_then(Path::to_str) {
            if is_python(path) {
                out.insert(path.to_owned(), file.id());
            }
        }
    }
    Ok(out)
}

/// Number of distinct commits on all branches.
pub fn count_revisions(repo: &Repository, include_remote: bool) -> Result<u64, VcsError> {
    Ok(ordered_commits(repo, include_remote)?.len() as u64)
}

/// First and last version of every `.py` path on any branch.
///
/// A merge commit touches a path only when the path differs from every
/// parent, so merges do not re-introduce content from the merged branch.
/// Deletions do not end a path's history.
pub fn enumerate_history(repo: &Repository, include_remote: bool) -> Result<History, VcsError> {
    let commits = ordered_commits(repo, include_remote)?;
    let mut files: BTreeMap<String, FileHistory> = BTreeMap::new();
    for &oid in &commits {
        let commit = repo.find_commit(oid)?;
        let tree = commit.tree()?;
        let changes = if commit.parent_count() == 0 {
            touched(repo, None, &tree)?
        } else {
            let mut common: Option<HashMap<String, Oid>> = None;
            for parent in commit.parents() {
                let t = touched(repo, Some(&parent.tree()?), &tree)?;
                common = Some(match common {
                    None => t,
                    Some(mut acc) => {
                        acc.retain(|path, _| t.contains_key(path));
                        acc
                    }
                });
            }
            common.unwrap_or_default()
        };
        for (path, blob) in changes {
            files
                .entry(path)
                .and_modify(|h| {
                    h.last_blob = blob;
                    h.last_commit = oid;
                })
                .or_insert(FileHistory { first_blob: blob, first_commit: oid, last_blob: blob, last_commit: oid });
        }
    }
    Ok(History { revisions: commits.len() as u64, files })
}

/// Distinct author emails over commits reachable from the head.
pub fn count_committers(repo: &Repository, branch: Option<&str>) -> Result<u64, VcsError> {
    let Some(head) = head_commit(repo, branch)? else {
        return Ok(0);
    };
    let mut walk = repo.revwalk()?;
    walk.push(head.id())?;
    let mut emails = BTreeSet::new();
    for oid in walk {
        let commit = repo.find_commit(oid?)?;
        emails.insert(commit.author().email_bytes().to_vec());
    }
    Ok(emails.len() as u64)
}
