//! The feature catalog as a table.

use paradigm_profiler::catalog::catalog_rows;
use paradigm_profiler::FeatureKind;

fn main() {
    let mark = |b: bool| if b { "x" } else { "." };
    println!("{:<30} I P O F  counted", "feature");
    for (kind, row) in FeatureKind::ALL.iter().zip(catalog_rows()) {
        println!(
            "{:<30} {} {} {} {}  {}",
            kind.row_label(),
            mark(row.imperative),
            mark(row.procedural),
            mark(row.object_oriented),
            mark(row.functional),
            kind.counted_paradigms()
        );
    }
}
