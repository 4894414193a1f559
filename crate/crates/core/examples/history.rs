//! First and last label of each file across a repository's history.

use git2::{Repository, Signature, Time};
use paradigm_profiler::corpus::{scan_project, CorpusConfig};

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let repo = Repository::init(dir.path())?;
    let versions = [
        "def area(w, h):\n    return w * h\n",
        "def area(w, h):\n    return w * h\n\ndef perimeter(w, h):\n    return 2 * (w + h)\n",
        "class Rect:\n    def area(self):\n        return self.w * self.h\n",
    ];
    let mut parent = None;
    for (i, src) in versions.iter().enumerate() {
        let mut tree = repo.treebuilder(None)?;
        tree.insert("geometry.py", repo.blob(src.as_bytes())?, 0o100644)?;
        let tree = repo.find_tree(tree.write()?)?;
        let sig = Signature::new("dev", "dev@example.org", &Time::new(1_600_000_000 + 3600 * i as i64, 0))?;
        let parents: Vec<git2::Commit> = parent.iter().map(|p| repo.find_commit(*p)).collect::<Result<_, _>>()?;
        let refs: Vec<&git2::Commit> = parents.iter().collect();
        parent = Some(repo.commit(Some("HEAD"), &sig, &sig, &format!("v{i}"), &tree, &refs)?);
    }

    let scan = scan_project("geometry", dir.path(), None, &CorpusConfig::default());
    println!("{} revisions, {} committers", scan.revisions, scan.committers);
    for e in &scan.evolution {
        let mark = if e.changed() { "changed" } else { "same" };
        println!("{}: {} -> {} ({mark})", e.path, e.first, e.last);
    }
    Ok(())
}
