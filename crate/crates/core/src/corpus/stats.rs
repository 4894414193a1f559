//! Descriptive statistics over corpus records.

use std::collections::BTreeSet;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::labeling::Label;

/// Count of items per label.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LabelCounts {
    #[serde(rename = "Functional")]
    pub functional: u64,
    #[serde(rename = "OO")]
    pub oo: u64,
    #[serde(rename = "Procedural")]
    pub procedural: u64,
    #[serde(rename = "Imperative")]
    pub imperative: u64,
    #[serde(rename = "Mixed")]
    pub mixed: u64,
}

impl LabelCounts {
    pub fn add(&mut self, label: Label) {
        *self.slot(label) += 1;
    }

    pub fn get(&self, label: Label) -> u64 {
        match label {
            Label::Functional => self.functional,
            Label::OO => self.oo,
            Label::Procedural => self.procedural,
            Label::Imperative => self.imperative,
            Label::Mixed => self.mixed,
        }
    }

    fn slot(&mut self, label: Label) -> &mut u64 {
        match label {
            Label::Functional => &mut self.functional,
            Label::OO => &mut self.oo,
            Label::Procedural => &mut self.procedural,
            Label::Imperative => &mut self.imperative,
            Label::Mixed => &mut self.mixed,
        }
    }

    pub fn total(&self) -> u64 {
        Label::ALL.iter().map(|&l| self.get(l)).sum()
    }
}

impl FromIterator<Label> for LabelCounts {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        let mut counts = LabelCounts::default();
        for label in iter {
            counts.add(label);
        }
        counts
    }
}

/// Count, mean, sample standard deviation, extremes and quartiles. All
/// fields but `count` are `None` for an empty input.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: Option<f64>,
    pub std: Option<f64>,
    pub min: Option<f64>,
    #[serde(rename = "25%")]
    pub q25: Option<f64>,
    #[serde(rename = "50%")]
    pub q50: Option<f64>,
    #[serde(rename = "75%")]
    pub q75: Option<f64>,
    pub max: Option<f64>,
}

pub fn summarize_distribution(values: &[f64]) -> Summary {
    let count = values.len();
    if count == 0 {
        return Summary { count, mean: None, std: None, min: None, q25: None, q50: None, q75: None, max: None };
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = count as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let std =
        if count == 1 { 0.0 } else { (sorted.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt() };
    Summary {
        count,
        mean: Some(mean),
        std: Some(std),
        min: Some(sorted[0]),
        q25: Some(quantile(&sorted, 0.25)),
        q50: Some(quantile(&sorted, 0.5)),
        q75: Some(quantile(&sorted, 0.75)),
        max: Some(sorted[count - 1]),
    }
}

/// Quantile of sorted, non-empty data by linear interpolation between the
/// closest ranks.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Per-label counts of records binned into deciles of a size metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecileHistogram {
    /// The nine inner bin edges. Bin `i` holds values `v` with
    /// `edges[i-1] <= v < edges[i]`.
    pub edges: Vec<f64>,
    pub bins: Vec<LabelCounts>,
    /// Set when the metric has fewer than ten distinct values, so some bins
    /// are necessarily empty or merged.
    pub degenerate: bool,
}

pub fn decile_histogram(samples: &[(f64, Label)]) -> DecileHistogram {
    let mut bins = vec![LabelCounts::default(); 10];
    if samples.is_empty() {
        return DecileHistogram { edges: Vec::new(), bins, degenerate: true };
    }
    let mut sorted: Vec<f64> = samples.iter().map(|s| s.0).collect();
    sorted.sort_by(f64::total_cmp);
    let edges: Vec<f64> = (1..10).map(|i| quantile(&sorted, i as f64 / 10.0)).collect();
    let distinct: BTreeSet<u64> = sorted.iter().map(|v| v.to_bits()).collect();
    if distinct.len() < 10 {
        log::warn!("only {} distinct size values; deciles are degenerate", distinct.len());
    }
    for &(value, label) in samples {
        let bin = edges.iter().filter(|&&e| e <= value).count();
        bins[bin].add(label);
    }
    DecileHistogram { edges, bins, degenerate: distinct.len() < 10 }
}

/// First and last label of one file across its history.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EvolutionRecord {
    pub project: String,
    pub path: String,
    pub first: Label,
    pub last: Label,
    pub first_commit: String,
    pub last_commit: String,
}

impl EvolutionRecord {
    pub fn changed(&self) -> bool {
        self.first != self.last
    }
}

/// Label transitions, indexed `[first][last]` in [`Label::ALL`] order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TransitionMatrix(pub [[u64; 5]; 5]);

impl TransitionMatrix {
    pub fn get(&self, first: Label, last: Label) -> u64 {
        self.0[first.index()][last.index()]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().flatten().sum()
    }
}

impl Serialize for TransitionMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(5))?;
        for from in Label::ALL {
            let row: LabelCounts =
                Label::ALL.iter().flat_map(|&to| std::iter::repeat_n(to, self.get(from, to) as usize)).collect();
            map.serialize_entry(from.as_str(), &row)?;
        }
        map.end()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionReport {
    pub files: u64,
    pub changed: u64,
    pub unchanged: u64,
    pub changed_fraction: f64,
    pub first_labels: LabelCounts,
    pub last_labels: LabelCounts,
    /// Off-diagonal only: files whose label did not change are not entered.
    pub transitions: TransitionMatrix,
}

pub fn evolution_report(records: &[EvolutionRecord]) -> EvolutionReport {
    let mut transitions = TransitionMatrix::default();
    let mut first_labels = LabelCounts::default();
    let mut last_labels = LabelCounts::default();
    for r in records {
        first_labels.add(r.first);
        last_labels.add(r.last);
        if r.changed() {
            transitions.0[r.first.index()][r.last.index()] += 1;
        }
    }
    let files = records.len() as u64;
    let changed = transitions.total();
    EvolutionReport {
        files,
        changed,
        unchanged: files - changed,
        changed_fraction: if files == 0 { 0.0 } else { changed as f64 / files as f64 },
        first_labels,
        last_labels,
        transitions,
    }
}
