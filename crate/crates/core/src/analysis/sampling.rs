use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::AnalysisError;

fn open_unit(name: &str, v: f64) -> Result<(), AnalysisError> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(AnalysisError::InvalidArgument(format!(
            "{name} must lie in (0, 1), got {v}"
        )))
    }
}

/// Two-sided standard normal quantile for a confidence level.
pub fn z_for_confidence(confidence: f64) -> Result<f64, AnalysisError> {
    open_unit("confidence", confidence)?;
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence) / 2.0))
}

/// Sample size for estimating a proportion `p` within `margin` at the given
/// confidence, with finite population correction and capped at `population`.
pub fn sample_size(population: usize, confidence: f64, margin: f64, p: f64) -> Result<usize, AnalysisError> {
    if population == 0 {
        return Err(AnalysisError::InvalidArgument("population must be at least 1".into()));
    }
    open_unit("margin", margin)?;
    open_unit("p", p)?;
    let z = z_for_confidence(confidence)?;
    let n0 = z * z * p * (1.0 - p) / (margin * margin);
    let corrected = n0 / (1.0 + (n0 - 1.0) / population as f64);
    Ok((corrected.ceil() as usize).clamp(1, population))
}

/// Uniform sample of `n` items without replacement, fixed by `seed`.
/// Items come back in population order.
pub fn draw_sample<T: Clone>(population: &[T], n: usize, seed: u64) -> Result<Vec<T>, AnalysisError> {
    if n > population.len() {
        return Err(AnalysisError::SampleTooLarge {
            requested: n,
            population: population.len(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, population.len(), n).into_vec();
    picked.sort_unstable();
    Ok(picked.into_iter().map(|i| population[i].clone()).collect())
}
