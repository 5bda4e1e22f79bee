use serde::{Deserialize, Serialize};

use crate::error::{GhError, Result};
use crate::sample::Sample;

/// Strictly increasing probabilities inside `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileSet {
    probs: Vec<f64>,
}

impl QuantileSet {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(GhError::Domain("empty probability set".into()));
        }
        if probs.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(GhError::Domain("probabilities must lie in (0, 1)".into()));
        }
        if probs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(GhError::Domain(
                "probabilities must be strictly increasing".into(),
            ));
        }
        Ok(Self { probs })
    }

    /// Lower-tail probabilities for the letter-value recipe.
    pub fn letter_values() -> Self {
        Self {
            probs: vec![0.005, 0.01, 0.025, 0.05, 0.10, 0.25],
        }
    }

    /// `p_i = (i - 1/3) / (m + 1/3)`, `i = 1..=m`.
    pub fn plotting_positions(m: usize) -> Result<Self> {
        Self::new(
            (1..=m)
                .map(|i| (i as f64 - 1.0 / 3.0) / (m as f64 + 1.0 / 3.0))
                .collect(),
        )
    }

    /// Ten plotting positions, the default for quantile least squares.
    pub fn least_squares_default() -> Self {
        Self::plotting_positions(10).expect("ten plotting positions are valid")
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// Linear interpolation between order statistics at position `1 + (n-1)·prob`.
pub fn sample_quantile(s: &Sample, prob: f64) -> Result<f64> {
    if !(prob > 0.0 && prob < 1.0) {
        return Err(GhError::Domain(format!(
            "probability {prob} outside (0, 1)"
        )));
    }
    let y = s.values();
    let v = (y.len() - 1) as f64 * prob;
    let lo = v.floor() as usize;
    let frac = v - lo as f64;
    if lo + 1 >= y.len() {
        return Ok(y[y.len() - 1]);
    }
    Ok((1.0 - frac) * y[lo] + frac * y[lo + 1])
}
