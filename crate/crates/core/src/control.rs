use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Truncation and tolerance settings shared by every series evaluator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SeriesControl {
    /// Highest ADM iterate order `k` kept in a decomposition.
    pub max_k: usize,
    /// Absolute tolerance on the neglected tail of a series.
    pub tol_abs: f64,
    /// Relative tolerance on the neglected tail of a series.
    pub tol_rel: f64,
    /// Hard cap on the number of terms any summation loop may visit.
    pub term_cap: usize,
    /// Largest admissible rounding error estimate (`max|term|·ε·terms`)
    /// before a cancelling series is rejected.
    pub max_rounding: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_k: 40,
            tol_abs: 1e-12,
            tol_rel: 1e-14,
            term_cap: 10_000,
            max_rounding: 1e-8,
        }
    }
}

impl SeriesControl {
    pub fn validate(&self) -> Result<()> {
        if self.max_k < 1 {
            return Err(Error::InvalidParams("max_k must be at least 1".into()));
        }
        if !(self.tol_abs > 0.0 && self.tol_abs.is_finite()) {
            return Err(Error::InvalidParams("tol_abs must be positive".into()));
        }
        if !(self.tol_rel > 0.0 && self.tol_rel.is_finite()) {
            return Err(Error::InvalidParams("tol_rel must be positive".into()));
        }
        if self.term_cap < 1 {
            return Err(Error::InvalidParams("term_cap must be at least 1".into()));
        }
        if !(self.max_rounding > 0.0) {
            return Err(Error::InvalidParams("max_rounding must be positive".into()));
        }
        Ok(())
    }

    /// The tail tolerance that applies to a partial sum of size `sum`.
    pub fn tail_tolerance(&self, sum: f64) -> f64 {
        self.tol_abs.max(self.tol_rel * sum.abs())
    }
}
