//! Hand-derived oracle tables shared by several test targets.

use paradigm_profiler::{Label, ParadigmCounts};

/// Project-labeling boundary cases over 3000 statements, so every
/// threshold is hit exactly and one statement is the smallest step.
/// Expected labels come from evaluating the three Mixed rules by hand.
pub fn project_boundaries() -> Vec<(&'static str, ParadigmCounts, Label)> {
    let c = |f, oo, p, i| ParadigmCounts::new(f, oo, p, i, 3000);
    vec![
        // second = 2/3 is not above the ceiling; the gap of 1/3 clears both pair rules.
        ("second at 2/3", c(0, 3000, 2000, 0), Label::OO),
        ("second just above 2/3", c(0, 3000, 2001, 0), Label::Mixed),
        // largest = 1/3 is not below the floor; gap 0.3 clears the low-gap rule.
        ("largest at 1/3", c(100, 0, 1000, 0), Label::Procedural),
        ("largest just below 1/3", c(100, 0, 999, 0), Label::Mixed),
        // second = 0.5 is not above pair_high; largest 0.6 is above 0.5.
        ("second at pair_high", c(0, 1800, 1500, 0), Label::OO),
        ("second just above pair_high", c(0, 1800, 1501, 0), Label::Mixed),
        // second 0.6, gap exactly 0.2 is not below pair_gap.
        ("gap at pair_gap", c(0, 2400, 1800, 0), Label::OO),
        ("gap just below pair_gap", c(0, 2399, 1800, 0), Label::Mixed),
        // largest 0.5 (not above it), gap exactly 0.1 is not below low_gap.
        ("gap at low_gap", c(0, 0, 1500, 1200), Label::Procedural),
        ("gap just below low_gap", c(0, 0, 1500, 1201), Label::Mixed),
        // largest just above 0.5 escapes the low-gap rule despite a small gap.
        ("largest just above 1/2", c(0, 0, 1501, 1300), Label::Procedural),
        ("exact tie for first", c(0, 1500, 1500, 10), Label::Mixed),
        ("all tallies zero", c(0, 0, 0, 0), Label::Mixed),
    ]
}

/// Three raters, six subjects. By hand: mean agreement 11/18, chance
/// agreement 41/162, kappa 58/121.
pub fn fleiss_table() -> Vec<Vec<Label>> {
    use Label::*;
    vec![
        vec![OO, OO, OO],
        vec![OO, OO, Procedural],
        vec![Procedural, Procedural, Procedural],
        vec![Imperative, Procedural, Imperative],
        vec![Functional, OO, Mixed],
        vec![Mixed, Mixed, Mixed],
    ]
}

pub const FLEISS_KAPPA: f64 = 58.0 / 121.0;
