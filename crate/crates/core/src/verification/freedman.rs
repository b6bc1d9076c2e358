//! Monte Carlo coverage of the variance-adaptive Freedman-type bound
//!
//! `|sum X_t| <= 2e sqrt((e-2) L V) ∨ 2 B L`, with
//! `L = ln((ln(n/B) + 2) / delta)` and `V = sum E[X_t^2 | H_t]`,
//! which should hold with probability at least `1 - delta`.
//!
//! The derivation of the bound uses an `eta` grid of size
//! `ln(n/B)/2 + 1`, while the stated bound has `ln(n/B) + 2` inside the
//! logarithm. The stated form is what is checked here; it is the larger of
//! the two and so the more conservative.

use std::f64::consts::E;

use rand::RngCore;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::bernoulli;

/// How the simulated martingale differences are generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MartingaleModel {
    /// `X_t = B (Bern(p) - p)` where `p = 0.5` while the running sum is
    /// non-negative and `p = 0.1` otherwise, so the conditional variance
    /// depends on the history.
    RegimeSwitching,
    /// `X_t = 0` throughout.
    Zero,
}

/// The bound's right-hand side for `n` steps, range `B` and variance sum `V`.
pub fn freedman_bound(n: usize, range: f64, delta: f64, variance_sum: f64) -> f64 {
    let log_term = (((n as f64 / range).ln() + 2.0) / delta).ln();
    let var_part = 2.0 * E * ((E - 2.0) * log_term * variance_sum).sqrt();
    var_part.max(2.0 * range * log_term)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CoverageReport {
    pub trials: usize,
    pub covered: usize,
    pub coverage: f64,
    /// `1 - delta - 3 sqrt(delta (1 - delta) / trials)`
    pub required: f64,
}

impl CoverageReport {
    pub fn passes(&self) -> bool {
        self.coverage >= self.required
    }
}

/// Fraction of `trials` simulated sequences of length `n` on which the bound holds.
pub fn freedman_coverage(
    trials: usize,
    n: usize,
    range: f64,
    delta: f64,
    model: MartingaleModel,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<CoverageReport> {
    if trials < 1000 {
        return Err(Error::Parameter(format!("need at least 1000 trials, got {trials}")));
    }
    if n == 0 {
        return Err(Error::Parameter("sequence length must be positive".into()));
    }
    if !(range > 0.0 && range.is_finite()) {
        return Err(Error::Parameter(format!("range B must be positive, got {range}")));
    }
    if !(delta > 0.0 && delta <= 2.0 / E) {
        return Err(Error::Parameter(format!("delta must lie in (0, 2/e], got {delta}")));
    }
    if (n as f64 / range).ln() + 2.0 <= 0.0 {
        return Err(Error::Parameter(format!(
            "n = {n} is too small relative to B = {range}"
        )));
    }
    let mut covered = 0;
    for _ in 0..trials {
        let (mut sum, mut var) = (0.0f64, 0.0f64);
        if model == MartingaleModel::RegimeSwitching {
            for _ in 0..n {
                let p = if sum >= 0.0 { 0.5 } else { 0.1 };
                let hit = bernoulli(rng, p) as u8 as f64;
                sum += range * (hit - p);
                var += range * range * p * (1.0 - p);
            }
        }
        if sum.abs() <= freedman_bound(n, range, delta, var) {
            covered += 1;
        }
    }
    let coverage = covered as f64 / trials as f64;
    let required = 1.0 - delta - 3.0 * (delta * (1.0 - delta) / trials as f64).sqrt();
    Ok(CoverageReport {
        trials,
        covered,
        coverage,
        required,
    })
}
