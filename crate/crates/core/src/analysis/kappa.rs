use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::AnalysisError;

/// A reviewer's verdict on one sampled cast.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    TruePositive,
    FalsePositive,
}

impl Label {
    pub fn as_str(self) -> &'static str {
        match self {
            Label::TruePositive => "TP",
            Label::FalsePositive => "FP",
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "TP" | "tp" => Ok(Label::TruePositive),
            "FP" | "fp" => Ok(Label::FalsePositive),
            other => Err(format!("label must be TP or FP, got `{other}`")),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RatingSheet {
    pub rater_id: String,
    /// Keyed by record id (`file:line:col:kind`).
    pub labels: BTreeMap<String, Label>,
}

impl RatingSheet {
    pub fn new(rater_id: impl Into<String>) -> Self {
        RatingSheet {
            rater_id: rater_id.into(),
            labels: BTreeMap::new(),
        }
    }

    pub fn with_labels<I, K>(rater_id: impl Into<String>, labels: I) -> Self
    where
        I: IntoIterator<Item = (K, Label)>,
        K: Into<String>,
    {
        RatingSheet {
            rater_id: rater_id.into(),
            labels: labels.into_iter().map(|(k, l)| (k.into(), l)).collect(),
        }
    }

    fn positive_rate(&self) -> f64 {
        let tp = self.labels.values().filter(|&&l| l == Label::TruePositive).count();
        tp as f64 / self.labels.len() as f64
    }
}

/// Agreement between two raters beyond chance.
pub fn cohen_kappa(a: &RatingSheet, b: &RatingSheet) -> Result<f64, AnalysisError> {
    if !a.labels.keys().eq(b.labels.keys()) {
        return Err(AnalysisError::KeyMismatch(a.rater_id.clone(), b.rater_id.clone()));
    }
    if a.labels.is_empty() {
        return Err(AnalysisError::InvalidArgument("rating sheets are empty".into()));
    }
    let n = a.labels.len() as f64;
    let agree = a.labels.values().zip(b.labels.values()).filter(|(x, y)| x == y).count();
    let observed = agree as f64 / n;
    let (pa, pb) = (a.positive_rate(), b.positive_rate());
    let chance = pa * pb + (1.0 - pa) * (1.0 - pb);
    if chance == 1.0 {
        return Ok(1.0);
    }
    Ok((observed - chance) / (1.0 - chance))
}

/// Mean of the kappa over every unordered pair of sheets.
pub fn mean_pairwise_kappa(sheets: &[RatingSheet]) -> Result<f64, AnalysisError> {
    if sheets.len() < 2 {
        return Err(AnalysisError::TooFewSheets(sheets.len()));
    }
    let mut sum = 0.0;
    let mut pairs = 0usize;
    for (i, a) in sheets.iter().enumerate() {
        for b in &sheets[i + 1..] {
            sum += cohen_kappa(a, b)?;
            pairs += 1;
        }
    }
    Ok(sum / pairs as f64)
}
