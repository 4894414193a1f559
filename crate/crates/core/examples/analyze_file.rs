//! Counts and label for one Python file.
//!
//! ```text
//! cargo run --example analyze_file -- path/to/module.py
//! ```

use paradigm_profiler::{count_file, label_file, parse_source, percent_profile, Paradigm, SourceFile};

fn main() -> anyhow::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/multi_paradigm.py").into());
    let source = SourceFile::new(&path, std::fs::read_to_string(&path)?);
    let tree = parse_source(&source)?;
    let counts = count_file(&tree);
    let profile = percent_profile(&counts);
    println!("{path}: {} statements", counts.statements);
    for p in Paradigm::ALL {
        println!("  {:<15} {:>4}  {:5.1}%", p.as_str(), counts.get(p), 100.0 * profile.get(p));
    }
    println!("label: {}", label_file(&counts));
    Ok(())
}
