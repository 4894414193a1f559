//! Exact-duplicate removal by canonical syntax tree digest.

use paradigm_profiler::dedup::HashedFile;
use paradigm_profiler::{canonical_hash, dedup_files, parse_source, SourceFile};

fn main() {
    let files = [
        ("app", "util.py", "def clamp(x, lo, hi):\n    return max(lo, min(x, hi))\n"),
        ("lib", "vendored/util.py", "# copied\ndef clamp(x,  lo, hi):\n    return max(lo, min(x, hi))  # same\n"),
        ("app", "main.py", "print(clamp(5, 0, 3))\n"),
    ];
    let hashed: Vec<HashedFile> = files
        .iter()
        .map(|(project, path, src)| {
            let file = SourceFile::new(*path, *src);
            let digest = canonical_hash(&parse_source(&file).expect("valid source"));
            HashedFile { project: project.to_string(), file, digest }
        })
        .collect();
    let (kept, report) = dedup_files(hashed);
    for f in &kept {
        println!("kept {}:{} {}", f.project, f.file.path, &f.digest.to_string()[..12]);
    }
    for g in &report.groups {
        let removed: Vec<String> = g.removed.iter().map(ToString::to_string).collect();
        println!("{} retained, removed {}", g.retained, removed.join(", "));
    }
    println!("duplicate fraction {:.3}", report.duplicate_fraction());
}
