//! The two technical inequalities used to sum up exploration costs.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::rng::{uniform_index, unit_f64};

/// Both sides of the square-root summation inequality for one sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumSqCheck {
    /// `1/2 sum_{j<=n} sqrt(x_j) - sqrt(x_{n+1})/4`
    pub lhs1: f64,
    /// `1/4 sum_{j<=n} sqrt(x_j)`, evaluated only when `x_{n+1} <= sum_{j<=n} x_j`
    pub lhs2: Option<f64>,
    /// `sum_{j<=n} x_j / sqrt(x_j + x_{j+1})`
    pub rhs: f64,
    pub holds: bool,
}

/// Both sides of the exponential recursion inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpRecursionCheck {
    pub lhs: f64,
    /// `1 / alpha`
    pub bound: f64,
    pub holds: bool,
}

// Relative slack for rounding in an m-term float sum; the inequalities are
// tight in limits, so an exact comparison would flag rounding noise.
fn slack(terms: usize, scale: f64) -> f64 {
    4.0 * (terms as f64 + 2.0) * f64::EPSILON * scale.abs()
}

/// Evaluate the square-root summation inequality on `x_1..x_{n+1}`.
pub fn check_sumsq_lemma(xs: &[f64]) -> Result<SumSqCheck> {
    if xs.len() < 2 {
        return Err(Error::Parameter(format!("need at least 2 values, got {}", xs.len())));
    }
    if let Some(&x) = xs.iter().find(|x| !(**x > 0.0 && x.is_finite())) {
        return Err(Error::Parameter(format!("values must be positive, got {x}")));
    }
    let n = xs.len() - 1;
    let head = &xs[..n];
    let sqrt_sum: f64 = head.iter().map(|x| x.sqrt()).sum();
    let last = xs[n];
    let rhs: f64 = xs.windows(2).map(|w| w[0] / (w[0] + w[1]).sqrt()).sum();
    let lhs1 = 0.5 * sqrt_sum - 0.25 * last.sqrt();
    let lhs2 = (last <= head.iter().sum::<f64>()).then_some(0.25 * sqrt_sum);
    let tol = slack(n, rhs.max(sqrt_sum));
    let holds = lhs1 <= rhs + tol && lhs2.is_none_or(|l| l <= rhs + tol);
    Ok(SumSqCheck { lhs1, lhs2, rhs, holds })
}

/// Evaluate `sum_k exp(-alpha Y_k) y_k + exp(-alpha Y_m) / alpha <= 1/alpha`
/// where `Y_k` are prefix sums of `ys`.
pub fn check_exp_recursion_lemma(alpha: f64, ys: &[f64]) -> Result<ExpRecursionCheck> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::Parameter(format!("alpha must be positive, got {alpha}")));
    }
    if ys.is_empty() {
        return Err(Error::Parameter("need at least one y".into()));
    }
    if let Some(&y) = ys.iter().find(|y| !(**y > 0.0 && y.is_finite())) {
        return Err(Error::Parameter(format!("values must be positive, got {y}")));
    }
    let mut prefix = 0.0;
    let mut lhs = 0.0;
    for &y in ys {
        prefix += y;
        lhs += (-alpha * prefix).exp() * y;
    }
    lhs += (-alpha * prefix).exp() / alpha;
    let bound = 1.0 / alpha;
    Ok(ExpRecursionCheck {
        lhs,
        bound,
        holds: lhs <= bound + slack(ys.len(), bound),
    })
}

/// Outcome of a randomized sweep over one of the inequalities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepReport {
    pub instances: usize,
    pub violations: usize,
    /// Smallest `rhs - lhs` seen (negative means a violation).
    pub min_margin: f64,
}

/// Random sequences of length 2..=50 with values in `(0, 100]`.
pub fn sumsq_sweep(instances: usize, rng: &mut (impl RngCore + ?Sized)) -> SweepReport {
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..instances {
        let len = 2 + uniform_index(rng, 49);
        let xs: Vec<f64> = (0..len).map(|_| 100.0 * (1.0 - unit_f64(rng))).collect();
        let c = check_sumsq_lemma(&xs).expect("generated values are positive");
        let margin = (c.rhs - c.lhs1).min(c.lhs2.map_or(f64::INFINITY, |l| c.rhs - l));
        min_margin = min_margin.min(margin);
        violations += usize::from(!c.holds);
    }
    SweepReport {
        instances,
        violations,
        min_margin,
    }
}

/// Random `alpha` in `(0, 10]` and 1..=50 values in `(0, 10]`.
pub fn exp_recursion_sweep(instances: usize, rng: &mut (impl RngCore + ?Sized)) -> SweepReport {
    let mut violations = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..instances {
        let alpha = 10.0 * (1.0 - unit_f64(rng));
        let len = 1 + uniform_index(rng, 50);
        let ys: Vec<f64> = (0..len).map(|_| 10.0 * (1.0 - unit_f64(rng))).collect();
        let c = check_exp_recursion_lemma(alpha, &ys).expect("generated values are positive");
        min_margin = min_margin.min(c.bound - c.lhs);
        violations += usize::from(!c.holds);
    }
    SweepReport {
        instances,
        violations,
        min_margin,
    }
}
