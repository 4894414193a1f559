//! Predominant-paradigm labels for files and projects.
//!
//! All threshold comparisons are done on exact rationals so that boundary
//! values such as 2/3 classify identically on every platform.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::analyzer::ParadigmCounts;
use crate::catalog::Paradigm;

/// A file or project label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Functional,
    OO,
    Procedural,
    Imperative,
    Mixed,
}

impl Label {
    pub const ALL: [Label; 5] = [Label::Functional, Label::OO, Label::Procedural, Label::Imperative, Label::Mixed];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Functional => "Functional",
            Label::OO => "OO",
            Label::Procedural => "Procedural",
            Label::Imperative => "Imperative",
            Label::Mixed => "Mixed",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl From<Paradigm> for Label {
    fn from(p: Paradigm) -> Self {
        match p {
            Paradigm::Functional => Label::Functional,
            Paradigm::ObjectOriented => Label::OO,
            Paradigm::Procedural => Label::Procedural,
            Paradigm::Imperative => Label::Imperative,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Label {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("unknown label {0:?} (expected Functional, OO, Procedural, Imperative or Mixed)")]
pub struct UnknownLabel(pub String);

impl FromStr for Label {
    type Err = UnknownLabel;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Label::ALL.into_iter().find(|l| l.as_str() == s.trim()).ok_or_else(|| UnknownLabel(s.to_owned()))
    }
}

/// A non-negative rational number with a positive denominator.
#[derive(Debug, Clone, Copy)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn numer(self) -> u64 {
        self.num
    }

    pub fn denom(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    fn cross(self, other: Ratio) -> (u128, u128) {
        (self.num as u128 * other.den as u128, other.num as u128 * self.den as u128)
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.cross(*other);
        a == b
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = self.cross(*other);
        a.cmp(&b)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RatioParseError {
    #[error("malformed fraction {0:?}")]
    Malformed(String),
    #[error("zero denominator in {0:?}")]
    ZeroDenominator(String),
}

/// Accepts `p/q` or a plain decimal such as `0.5`.
impl FromStr for Ratio {
    type Err = RatioParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let malformed = || RatioParseError::Malformed(s.to_owned());
        if let Some((n, d)) = s.split_once('/') {
            let num: u64 = n.trim().parse().map_err(|_| malformed())?;
            let den: u64 = d.trim().parse().map_err(|_| malformed())?;
            if den == 0 {
                return Err(RatioParseError::ZeroDenominator(s.to_owned()));
            }
            return Ok(Ratio::new(num, den));
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if int.is_empty() && frac.is_empty() || frac.len() > 18 {
            return Err(malformed());
        }
        let digits = format!("{int}{frac}");
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let num: u64 = digits.parse().map_err(|_| malformed())?;
        Ok(Ratio::new(num, 10u64.pow(frac.len() as u32)))
    }
}

/// Difference of two fractions sharing a denominator, as a fraction of it.
fn gap(largest: u64, second: u64, total: u64) -> Ratio {
    Ratio::new(largest - second, total)
}

/// Per-paradigm share of a file's or project's statements.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParadigmFractions {
    pub functional: f64,
    pub oo: f64,
    pub procedural: f64,
    pub imperative: f64,
}

impl ParadigmFractions {
    pub fn get(&self, paradigm: Paradigm) -> f64 {
        match paradigm {
            Paradigm::Functional => self.functional,
            Paradigm::ObjectOriented => self.oo,
            Paradigm::Procedural => self.procedural,
            Paradigm::Imperative => self.imperative,
        }
    }
}

/// Each tally divided by the statement count; all zero for an empty file.
pub fn percent_profile(counts: &ParadigmCounts) -> ParadigmFractions {
    let share = |n: u64| {
        if counts.statements == 0 {
            0.0
        } else {
            n as f64 / counts.statements as f64
        }
    };
    ParadigmFractions {
        functional: share(counts.functional),
        oo: share(counts.oo),
        procedural: share(counts.procedural),
        imperative: share(counts.imperative),
    }
}

/// The paradigm with the strictly largest tally, with the runner-up tally.
/// `None` on a tie for first or when every tally is zero.
fn leader(counts: &ParadigmCounts) -> Option<(Paradigm, u64, u64)> {
    let mut ranked: Vec<(Paradigm, u64)> = Paradigm::ALL.iter().map(|&p| (p, counts.get(p))).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    let (top, largest) = ranked[0];
    let second = ranked[1].1;
    if largest == 0 || largest == second {
        None
    } else {
        Some((top, largest, second))
    }
}

/// File labeling options.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FileLabelingConfig {
    /// Minimum share of the file's statements the winning paradigm needs.
    pub cutoff: Ratio,
}

impl Default for FileLabelingConfig {
    fn default() -> Self {
        FileLabelingConfig { cutoff: Ratio::new(0, 1) }
    }
}

/// Largest tally wins; ties and all-zero tallies are Mixed.
pub fn label_file(counts: &ParadigmCounts) -> Label {
    label_file_with(counts, &FileLabelingConfig::default())
}

pub fn label_file_with(counts: &ParadigmCounts, config: &FileLabelingConfig) -> Label {
    match leader(counts) {
        Some((p, largest, _)) if Ratio::new(largest, counts.statements.max(1)) >= config.cutoff => p.into(),
        _ => Label::Mixed,
    }
}

/// Thresholds for project labeling, as fractions of total statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProjectLabelingConfig {
    pub dominant_ceiling: Ratio,
    pub dominant_floor: Ratio,
    pub pair_high: Ratio,
    pub pair_gap: Ratio,
    pub low_gap: Ratio,
}

impl Default for ProjectLabelingConfig {
    fn default() -> Self {
        ProjectLabelingConfig {
            dominant_ceiling: Ratio::new(2, 3),
            dominant_floor: Ratio::new(1, 3),
            pair_high: Ratio::new(1, 2),
            pair_gap: Ratio::new(1, 5),
            low_gap: Ratio::new(1, 10),
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("invalid project labeling thresholds: {0}")]
pub struct InvalidConfig(pub String);

impl ProjectLabelingConfig {
    /// Checks `0 < floor < pair_high < ceiling < 1` and both gaps in `(0, 1)`.
    pub fn validate(&self) -> Result<(), InvalidConfig> {
        let zero = Ratio::new(0, 1);
        let one = Ratio::new(1, 1);
        let ordered = zero < self.dominant_floor
            && self.dominant_floor < self.pair_high
            && self.pair_high < self.dominant_ceiling
            && self.dominant_ceiling < one;
        if !ordered {
            return Err(InvalidConfig(format!(
                "need 0 < floor ({}) < pair_high ({}) < ceiling ({}) < 1",
                self.dominant_floor, self.pair_high, self.dominant_ceiling
            )));
        }
        for (name, g) in [("pair_gap", self.pair_gap), ("low_gap", self.low_gap)] {
            if !(zero < g && g < one) {
                return Err(InvalidConfig(format!("{name} ({g}) must lie in (0, 1)")));
            }
        }
        Ok(())
    }
}

/// Component-wise sum of file counts.
pub fn aggregate_project<'a>(file_counts: impl IntoIterator<Item = &'a ParadigmCounts>) -> ParadigmCounts {
    file_counts.into_iter().copied().sum()
}

/// Labels a project from its aggregated counts.
///
/// Ties for first, all-zero tallies and empty projects are Mixed. Otherwise,
/// with `largest` and `second` the two highest shares of total statements,
/// the project is Mixed when any of these hold:
///
/// 1. `second > 2/3` or `largest < 1/3`
/// 2. `second > 1/2` and `largest - second < 1/5`
/// 3. `largest <= 1/2` and `largest - second < 1/10`
///
/// and labeled with the leading paradigm otherwise.
pub fn label_project(aggregate: &ParadigmCounts, config: &ProjectLabelingConfig) -> Label {
    let Some((top, largest, second)) = leader(aggregate) else {
        return Label::Mixed;
    };
    let total = aggregate.statements;
    if total == 0 {
        return Label::Mixed;
    }
    let l = Ratio::new(largest, total);
    let s = Ratio::new(second, total);
    let g = gap(largest, second, total);
    let case1 = s > config.dominant_ceiling || l < config.dominant_floor;
    let case2 = s > config.pair_high && g < config.pair_gap;
    let case3 = l <= config.pair_high && g < config.low_gap;
    if case1 || case2 || case3 {
        Label::Mixed
    } else {
        top.into()
    }
}
