//! Chance-corrected agreement between raters labeling the same subjects.

use std::io::Read;

use serde::Serialize;
use thiserror::Error;

use crate::labeling::Label;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AgreementError {
    #[error("at least two raters are required, got {0}")]
    TooFewRaters(usize),
    #[error("no subjects to compare")]
    NoSubjects,
    #[error("subject {subject} has {found} ratings, expected {expected}")]
    RaggedRow { subject: usize, found: usize, expected: usize },
    #[error("rating vectors differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("ratings file: {0}")]
    Malformed(String),
}

/// Subjects by raters, one label per cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatingMatrix {
    raters: Vec<String>,
    rows: Vec<Vec<Label>>,
}

impl RatingMatrix {
    pub fn new(raters: Vec<String>, rows: Vec<Vec<Label>>) -> Result<Self, AgreementError> {
        if raters.len() < 2 {
            return Err(AgreementError::TooFewRaters(raters.len()));
        }
        if rows.is_empty() {
            return Err(AgreementError::NoSubjects);
        }
        for (subject, row) in rows.iter().enumerate() {
            if row.len() != raters.len() {
                return Err(AgreementError::RaggedRow { subject, found: row.len(), expected: raters.len() });
            }
        }
        Ok(RatingMatrix { raters, rows })
    }

    /// Raters named `r1`, `r2`, ...
    pub fn from_rows(rows: Vec<Vec<Label>>) -> Result<Self, AgreementError> {
        let width = rows.first().map_or(0, Vec::len);
        let raters = (1..=width).map(|i| format!("r{i}")).collect();
        Self::new(raters, rows)
    }

    pub fn raters(&self) -> &[String] {
        &self.raters
    }

    pub fn rows(&self) -> &[Vec<Label>] {
        &self.rows
    }

    /// One rater's labels over all subjects.
    pub fn column(&self, rater: usize) -> Vec<Label> {
        self.rows.iter().map(|r| r[rater]).collect()
    }

    /// Reads a CSV file whose header names the raters and whose rows hold
    /// one label per rater.
    pub fn read_csv(input: impl Read) -> Result<Self, AgreementError> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let bad = |e: csv::Error| AgreementError::Malformed(e.to_string());
        let raters: Vec<String> = reader.headers().map_err(bad)?.iter().map(str::to_owned).collect();
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record = record.map_err(bad)?;
            let row = record
                .iter()
                .map(|cell| {
                    cell.parse::<Label>().map_err(|e| AgreementError::Malformed(format!("subject {}: {e}", i + 1)))
                })
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Self::new(raters, rows)
    }
}

/// A kappa statistic with its ingredients. `value` is NaN when chance
/// agreement is total, in which case `diagnostic` says why.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Kappa {
    pub value: f64,
    pub observed: f64,
    pub chance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl Kappa {
    fn from_parts(observed: f64, chance: f64) -> Self {
        if chance >= 1.0 {
            Kappa {
                value: f64::NAN,
                observed,
                chance,
                diagnostic: Some("every rating falls in one category; kappa is undefined".into()),
            }
        } else {
            Kappa { value: (observed - chance) / (1.0 - chance), observed, chance, diagnostic: None }
        }
    }

    pub fn is_defined(&self) -> bool {
        !self.value.is_nan()
    }

    pub fn interpretation(&self) -> &'static str {
        interpret(self.value)
    }
}

/// Fleiss' kappa over the five label categories.
pub fn fleiss_kappa(matrix: &RatingMatrix) -> Kappa {
    let n = matrix.raters.len() as f64;
    let subjects = matrix.rows.len() as f64;
    let mut totals = [0u64; 5];
    let mut agreement = 0.0;
    for row in &matrix.rows {
        let mut counts = [0u64; 5];
        for label in row {
            counts[label.index()] += 1;
        }
        let squares: u64 = counts.iter().map(|c| c * c).sum();
        agreement += (squares as f64 - n) / (n * (n - 1.0));
        for (t, c) in totals.iter_mut().zip(counts) {
            *t += c;
        }
    }
    let observed = agreement / subjects;
    let chance = totals
        .iter()
        .map(|&t| {
            let p = t as f64 / (subjects * n);
            p * p
        })
        .sum();
    Kappa::from_parts(observed, chance)
}

/// Cohen's kappa for two raters.
pub fn cohen_kappa(a: &[Label], b: &[Label]) -> Result<Kappa, AgreementError> {
    if a.len() != b.len() {
        return Err(AgreementError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(AgreementError::NoSubjects);
    }
    let len = a.len() as f64;
    let mut ma = [0u64; 5];
    let mut mb = [0u64; 5];
    for (x, y) in a.iter().zip(b) {
        ma[x.index()] += 1;
        mb[y.index()] += 1;
    }
    let observed = agreement_rate(a, b)?;
    let chance = ma.iter().zip(&mb).map(|(&x, &y)| (x as f64 / len) * (y as f64 / len)).sum();
    Ok(Kappa::from_parts(observed, chance))
}

/// Fraction of positions where both raters chose the same label.
pub fn agreement_rate(a: &[Label], b: &[Label]) -> Result<f64, AgreementError> {
    if a.len() != b.len() {
        return Err(AgreementError::LengthMismatch(a.len(), b.len()));
    }
    if a.is_empty() {
        return Err(AgreementError::NoSubjects);
    }
    let same = a.iter().zip(b).filter(|(x, y)| x == y).count();
    Ok(same as f64 / a.len() as f64)
}

/// Conventional verbal band for a kappa value.
pub fn interpret(kappa: f64) -> &'static str {
    if kappa.is_nan() {
        "undefined"
    } else if kappa > 0.80 {
        "very good"
    } else if kappa > 0.60 {
        "good"
    } else if kappa > 0.40 {
        "moderate"
    } else if kappa > 0.20 {
        "fair"
    } else {
        "poor"
    }
}
