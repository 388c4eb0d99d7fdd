use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::{RankedList, Scored};
use crate::syntax::CastKind;

/// 75th percentile of the standard normal distribution.
pub const UPPER_QUARTILE_Z: f64 = 0.67449;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum OutlierMode {
    /// Threshold at the upper quartile of a normal fitted to the kind's scores.
    #[default]
    Gaussian,
    /// Threshold at the observed 75th percentile.
    Empirical,
}

impl OutlierMode {
    pub fn as_str(self) -> &'static str {
        match self {
            OutlierMode::Gaussian => "gaussian",
            OutlierMode::Empirical => "empirical",
        }
    }
}

impl fmt::Display for OutlierMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OutlierMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gaussian" => Ok(OutlierMode::Gaussian),
            "empirical" => Ok(OutlierMode::Empirical),
            _ => Err(format!("unknown outlier mode `{s}` (expected gaussian or empirical)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub mean: f64,
    /// Population standard deviation.
    pub stddev: f64,
}

/// Mean and population standard deviation; `None` below two values.
pub fn fit_gaussian(values: &[f64]) -> Option<GaussianFit> {
    if values.len() < 2 {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some(GaussianFit {
        mean,
        stddev: var.sqrt(),
    })
}

/// Linearly interpolated percentile (`q` in `[0, 1]`) of unsorted values.
pub fn percentile(values: &[f64], q: f64) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    Some(sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierSet<T> {
    pub kind: CastKind,
    pub mean: f64,
    pub stddev: f64,
    pub threshold: f64,
    /// Casts scoring strictly above the threshold, in rank order.
    pub members: Vec<T>,
    /// Size of the kind's scored population.
    pub population: usize,
}

/// Per kind, the casts whose conditional entropy exceeds the upper
/// quartile. With fewer than two scores there is no fit and the empirical
/// rule applies, which selects nothing.
pub fn select_outliers<T: Scored + Clone>(
    ranked: &BTreeMap<CastKind, RankedList<T>>,
    mode: OutlierMode,
) -> BTreeMap<CastKind, OutlierSet<T>> {
    let mut out = BTreeMap::new();
    for (&kind, list) in ranked {
        let values: Vec<f64> = list.entries.iter().map(Scored::ce).collect();
        let Some(first) = values.first().copied() else {
            continue;
        };
        let fit = fit_gaussian(&values).unwrap_or(GaussianFit {
            mean: first,
            stddev: 0.0,
        });
        let threshold = match (mode, values.len()) {
            (OutlierMode::Gaussian, n) if n >= 2 => fit.mean + UPPER_QUARTILE_Z * fit.stddev,
            _ => percentile(&values, 0.75).unwrap_or(first),
        };
        // A zero spread means every score equals the mean: nothing stands out.
        let members = if fit.stddev == 0.0 {
            Vec::new()
        } else {
            list.entries.iter().filter(|e| e.ce() > threshold).cloned().collect()
        };
        out.insert(
            kind,
            OutlierSet {
                kind,
                mean: fit.mean,
                stddev: fit.stddev,
                threshold,
                members,
                population: values.len(),
            },
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::rank;
    use super::super::rank::tests::item;
    use super::*;

    #[test]
    fn fit_values() {
        assert_eq!(
            fit_gaussian(&[1.0, 1.0, 1.0, 1.0]),
            Some(GaussianFit { mean: 1.0, stddev: 0.0 })
        );
        assert_eq!(fit_gaussian(&[0.0, 2.0]), Some(GaussianFit { mean: 1.0, stddev: 1.0 }));
        let fit = fit_gaussian(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(fit.mean, 2.5);
        assert!((fit.stddev - 1.25f64.sqrt()).abs() < 1e-15);
        assert_eq!(fit_gaussian(&[3.0]), None);
    }

    #[test]
    fn percentile_interpolates() {
        assert_eq!(percentile(&[4.0, 1.0, 3.0, 2.0], 0.75), Some(3.25));
        assert_eq!(percentile(&[7.0], 0.75), Some(7.0));
        assert_eq!(percentile(&[], 0.75), None);
    }

    #[test]
    fn single_spike_is_the_only_outlier() {
        let items: Vec<_> = [0.0, 0.0, 0.0, 0.0, 4.0]
            .iter()
            .enumerate()
            .map(|(i, &ce)| item(CastKind::Static, ce, "f", i as u32))
            .collect();
        let sets = select_outliers(&rank(items), OutlierMode::Gaussian);
        let set = &sets[&CastKind::Static];
        assert!((set.mean - 0.8).abs() < 1e-12);
        assert!((set.stddev - 1.6).abs() < 1e-12);
        assert!((set.threshold - 1.879184).abs() < 1e-6);
        assert_eq!(set.members.len(), 1);
        assert_eq!(set.members[0].ce, 4.0);
        assert_eq!(set.population, 5);
    }

    #[test]
    fn constant_scores_have_no_outliers() {
        for mode in [OutlierMode::Gaussian, OutlierMode::Empirical] {
            let items: Vec<_> = (0..6).map(|i| item(CastKind::Const, 1.5, "f", i)).collect();
            let sets = select_outliers(&rank(items), mode);
            assert!(sets[&CastKind::Const].members.is_empty());
        }
    }

    #[test]
    fn single_score_has_no_outliers() {
        let sets = select_outliers(&rank(vec![item(CastKind::Dynamic, 9.0, "f", 1)]), OutlierMode::Gaussian);
        assert!(sets[&CastKind::Dynamic].members.is_empty());
        assert_eq!(sets[&CastKind::Dynamic].threshold, 9.0);
    }

    #[test]
    fn empirical_mode_uses_observed_quartile() {
        let items: Vec<_> = (1..=8).map(|i| item(CastKind::Static, i as f64, "f", i)).collect();
        let sets = select_outliers(&rank(items), OutlierMode::Empirical);
        let set = &sets[&CastKind::Static];
        assert_eq!(set.threshold, 6.25);
        let ces: Vec<_> = set.members.iter().map(|m| m.ce).collect();
        assert_eq!(ces, [8.0, 7.0]);
    }

    #[test]
    fn kinds_are_fit_separately() {
        let mut items: Vec<_> = [0.0, 0.0, 0.0, 0.0, 4.0]
            .iter()
            .enumerate()
            .map(|(i, &ce)| item(CastKind::Static, ce, "s", i as u32))
            .collect();
        items.extend(
            [10.0, 10.0, 10.0]
                .iter()
                .enumerate()
                .map(|(i, &ce)| item(CastKind::Reinterpret, ce, "r", i as u32)),
        );
        let sets = select_outliers(&rank(items), OutlierMode::Gaussian);
        assert_eq!(sets[&CastKind::Static].members.len(), 1);
        assert!(sets[&CastKind::Reinterpret].members.is_empty());
    }
}
