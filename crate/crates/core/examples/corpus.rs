//! A two-project corpus built from scratch: manifest, scan, dedup, report
//! files.

use std::path::Path;

use git2::{Repository, Signature, Time};
use paradigm_profiler::corpus::manifest::parse_manifest;
use paradigm_profiler::corpus::output::write_corpus_outputs;
use paradigm_profiler::corpus::{run_corpus, CorpusConfig};

/// One commit per entry of `versions`, each replacing the whole tree.
fn make_repo(path: &Path, versions: &[&[(&str, &str)]]) -> anyhow::Result<()> {
    let repo = Repository::init(path)?;
    let mut parent = None;
    for (i, files) in versions.iter().enumerate() {
        let mut tree = repo.treebuilder(None)?;
        for (name, src) in *files {
            tree.insert(name, repo.blob(src.as_bytes())?, 0o100644)?;
        }
        let tree = repo.find_tree(tree.write()?)?;
        let sig = Signature::new("dev", "dev@example.org", &Time::new(1_600_000_000 + 3600 * i as i64, 0))?;
        let parents: Vec<git2::Commit> = parent.iter().map(|p| repo.find_commit(*p)).collect::<Result<_, _>>()?;
        let refs: Vec<&git2::Commit> = parents.iter().collect();
        parent = Some(repo.commit(Some("HEAD"), &sig, &sig, &format!("v{i}"), &tree, &refs)?);
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let dir = tempfile::tempdir()?;
    let shapes: &[(&str, &str)] = &[
        ("shapes.py", "class Square:\n    def __init__(self, s):\n        self.s = s\n    def area(self):\n        return self.s ** 2\n"),
        ("util.py", "def clamp(x, lo, hi):\n    return max(lo, min(x, hi))\n"),
    ];
    make_repo(&dir.path().join("shapes"), &[shapes])?;
    let pipeline: &[(&str, &str)] = &[
        ("etl.py", "rows = [r.strip() for r in open('in.txt')]\nclean = list(filter(None, rows))\n"),
        ("util.py", "def clamp(x, lo, hi):\n    return max(lo, min(x, hi))\n"),
    ];
    make_repo(&dir.path().join("pipeline"), &[pipeline])?;

    let entries = parse_manifest("shapes\tshapes\npipeline\tpipeline\n", dir.path())?;
    let config = CorpusConfig { jobs: 2, min_revisions: 1, ..CorpusConfig::default() };
    let corpus = run_corpus(&entries, &config);
    for p in &corpus.projects {
        println!("{:<10} {:>2} files  {}  {}", p.id, p.files.len(), p.aggregate, p.label);
    }
    println!("duplicates removed: {}", corpus.duplicates.removed);

    let out = dir.path().join("out");
    write_corpus_outputs(&out, &corpus)?;
    for entry in std::fs::read_dir(&out)? {
        println!("wrote {}", entry?.file_name().to_string_lossy());
    }
    Ok(())
}
