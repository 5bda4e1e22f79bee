use serde::Serialize;

use crate::error::{GhError, Result};

/// An immutable, ascending-sorted vector of finite observations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    /// Sorts `values` and validates them (non-empty, all finite).
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(GhError::InsufficientSample { needed: 1, got: 0 });
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(GhError::Domain(format!("non-finite observation {bad}")));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.len() as f64
    }

    /// Returns the sample `a + b * y`. `b` must be nonzero; a negative `b` reverses the order.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        Sample::new(self.values.iter().map(|y| a + b * y).collect())
    }
}
