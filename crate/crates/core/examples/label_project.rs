//! Project labels from aggregated file counts, with default and custom
//! thresholds.

use paradigm_profiler::labeling::Ratio;
use paradigm_profiler::{aggregate_project, label_project, ParadigmCounts, ProjectLabelingConfig};

fn main() {
    // functional, oo, procedural, imperative, statements
    let files = [ParadigmCounts::new(0, 50, 30, 3, 60), ParadigmCounts::new(0, 35, 25, 2, 40)];
    let total = aggregate_project(&files);
    let default = ProjectLabelingConfig::default();
    println!("aggregate {total}");
    println!("default thresholds: {}", label_project(&total, &default));

    let strict = ProjectLabelingConfig { pair_gap: Ratio::new(2, 5), ..default };
    strict.validate().expect("thresholds in range");
    println!("pair gap 2/5: {}", label_project(&total, &strict));
}
