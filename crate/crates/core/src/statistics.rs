//! Interval estimators, the confidence radius and the pairwise elimination test.
//!
//! For every arm three prefix sums are kept, indexed by global step:
//!
//! * `Ĝ`: `sum_t 1{A_t = a} r_t`, the importance-weighted reward of arm `a`;
//! * `G̃̂`: `sum_t 1{Ã_t = a} r_t`, the same over the auxiliary draw, whose
//!   per-step probability is exactly `1/K` for active arms;
//! * `P`: `sum_t P_t(a)`, the cumulative sampling probability.
//!
//! Reward sums are stored in 64.64 fixed point (`u128`), so interval sums
//! obtained by differencing two prefixes are exact and agree bit-for-bit with
//! direct summation in any order. Every reward in `[2^-11, 1]` is represented
//! without rounding; smaller rewards are rounded to the nearest `2^-64`.
//!
//! The confidence radius for the interval `[n', n]` is
//!
//! ```text
//! C(n', n) = sqrt( ln( 2 K N^2 (ln(n - n' + 1) + 2) / delta ) )
//! ```
//!
//! with natural logarithms throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{ArmId, ProblemDims};

const FIXED_ONE: f64 = 18_446_744_073_709_551_616.0; // 2^64
const FIXED_INV: f64 = 1.0 / FIXED_ONE;

/// Multiplier on the confidence radius in both elimination conditions.
pub const ELIMINATION_CONSTANT: f64 = 12.0;

#[inline]
pub(crate) fn to_fixed(reward: f64) -> u128 {
    (reward * FIXED_ONE).round() as u128
}

#[inline]
pub(crate) fn fixed_to_f64(x: i128) -> f64 {
    x as f64 * FIXED_INV
}

/// Exact fixed-point image of a threshold `>= 1`; such values scaled by
/// `2^64` are integral, so the comparison `delta > threshold` stays exact.
#[inline]
fn threshold_to_fixed(threshold: f64) -> i128 {
    debug_assert!(threshold >= 1.0);
    (threshold * FIXED_ONE) as i128
}

/// Per-arm prefix sums over the steps of one run.
#[derive(Debug, Clone)]
pub struct EstimatorTables {
    arms: usize,
    len: usize,
    // arm-major, each arm owns `capacity + 1` slots with slot 0 == 0
    stride: usize,
    g_hat: Vec<u128>,
    g_tilde: Vec<u128>,
    p: Vec<f64>,
}

impl EstimatorTables {
    pub fn new(arms: usize, capacity: usize) -> Self {
        let stride = capacity + 1;
        Self {
            arms,
            len: 0,
            stride,
            g_hat: vec![0; arms * stride],
            g_tilde: vec![0; arms * stride],
            p: vec![0.0; arms * stride],
        }
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    /// Number of recorded steps.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn capacity(&self) -> usize {
        self.stride - 1
    }

    /// Forget all recorded steps.
    pub fn reset(&mut self) {
        self.len = 0;
        self.g_hat.fill(0);
        self.g_tilde.fill(0);
        self.p.fill(0.0);
    }

    #[inline]
    fn at(&self, arm: usize, t: usize) -> usize {
        arm * self.stride + t
    }

    /// Append step `len + 1`: played arm, auxiliary draw, reward and `P_t`.
    pub fn record(&mut self, arm: ArmId, aux: Option<ArmId>, reward: f64, probs: &[f64]) -> Result<()> {
        if self.len == self.capacity() {
            return Err(Error::Range(format!("estimator tables full at {} steps", self.len)));
        }
        if probs.len() != self.arms {
            return Err(Error::Dimension(format!(
                "{} probabilities for {} arms",
                probs.len(),
                self.arms
            )));
        }
        if arm.index() >= self.arms || aux.is_some_and(|x| x.index() >= self.arms) {
            return Err(Error::Range(format!("arm {arm} outside [0, {})", self.arms)));
        }
        if !(0.0..=1.0).contains(&reward) {
            return Err(Error::RewardRange(reward));
        }
        let t = self.len + 1;
        let r = to_fixed(reward);
        for a in 0..self.arms {
            let prev = self.at(a, t - 1);
            let cur = self.at(a, t);
            self.g_hat[cur] = self.g_hat[prev] + if a == arm.index() { r } else { 0 };
            self.g_tilde[cur] = self.g_tilde[prev] + if aux.map(ArmId::index) == Some(a) { r } else { 0 };
            self.p[cur] = self.p[prev] + probs[a];
        }
        self.len = t;
        Ok(())
    }

    fn check_interval(&self, start: usize, end: usize) -> Result<()> {
        if start == 0 || start > end {
            return Err(Error::Interval { start, end });
        }
        if end > self.len {
            return Err(Error::Range(format!(
                "interval end {end} beyond recorded history {}",
                self.len
            )));
        }
        Ok(())
    }

    fn check_arm(&self, arm: ArmId) -> Result<()> {
        if arm.index() >= self.arms {
            return Err(Error::Range(format!("arm {arm} outside [0, {})", self.arms)));
        }
        Ok(())
    }

    #[inline]
    fn diff(table: &[u128], i_end: usize, i_before: usize) -> u128 {
        table[i_end] - table[i_before]
    }

    #[inline]
    pub(crate) fn g_hat_fixed(&self, arm: usize, start: usize, end: usize) -> u128 {
        Self::diff(&self.g_hat, self.at(arm, end), self.at(arm, start - 1))
    }

    #[inline]
    pub(crate) fn g_tilde_fixed(&self, arm: usize, start: usize, end: usize) -> u128 {
        Self::diff(&self.g_tilde, self.at(arm, end), self.at(arm, start - 1))
    }

    #[inline]
    pub(crate) fn p_sum_raw(&self, arm: usize, start: usize, end: usize) -> f64 {
        self.p[self.at(arm, end)] - self.p[self.at(arm, start - 1)]
    }

    /// `Ĝ_{start:end}(arm)`.
    pub fn g_hat(&self, arm: ArmId, start: usize, end: usize) -> Result<f64> {
        self.check_arm(arm)?;
        self.check_interval(start, end)?;
        Ok(fixed_to_f64(self.g_hat_fixed(arm.index(), start, end) as i128))
    }

    /// `G̃̂_{start:end}(arm)`.
    pub fn g_tilde_hat(&self, arm: ArmId, start: usize, end: usize) -> Result<f64> {
        self.check_arm(arm)?;
        self.check_interval(start, end)?;
        Ok(fixed_to_f64(self.g_tilde_fixed(arm.index(), start, end) as i128))
    }

    /// `P_{start:end}(arm)`.
    pub fn p_sum(&self, arm: ArmId, start: usize, end: usize) -> Result<f64> {
        self.check_arm(arm)?;
        self.check_interval(start, end)?;
        Ok(self.p_sum_raw(arm.index(), start, end))
    }

    /// `Δ̂_{start:end}(a', a) = Ĝ(a') - Ĝ(a)`.
    pub fn delta_hat(&self, a_prime: ArmId, a: ArmId, start: usize, end: usize) -> Result<f64> {
        self.check_arm(a_prime)?;
        self.check_arm(a)?;
        self.check_interval(start, end)?;
        Ok(fixed_to_f64(self.delta_hat_fixed(
            a_prime.index(),
            a.index(),
            start,
            end,
        )))
    }

    /// `Δ̃̂_{start:end}(a', a) = G̃̂(a') - G̃̂(a)`.
    pub fn delta_tilde_hat(&self, a_prime: ArmId, a: ArmId, start: usize, end: usize) -> Result<f64> {
        self.check_arm(a_prime)?;
        self.check_arm(a)?;
        self.check_interval(start, end)?;
        Ok(fixed_to_f64(self.delta_tilde_fixed(
            a_prime.index(),
            a.index(),
            start,
            end,
        )))
    }

    #[inline]
    pub(crate) fn delta_hat_fixed(&self, a_prime: usize, a: usize, start: usize, end: usize) -> i128 {
        self.g_hat_fixed(a_prime, start, end) as i128 - self.g_hat_fixed(a, start, end) as i128
    }

    #[inline]
    pub(crate) fn delta_tilde_fixed(&self, a_prime: usize, a: usize, start: usize, end: usize) -> i128 {
        self.g_tilde_fixed(a_prime, start, end) as i128 - self.g_tilde_fixed(a, start, end) as i128
    }
}

/// An interval `[start, end]` together with the problem it belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceQuery {
    pub start: usize,
    pub end: usize,
    pub dims: ProblemDims,
}

impl ConfidenceQuery {
    pub fn new(start: usize, end: usize, dims: ProblemDims) -> Result<Self> {
        if start == 0 || start > end || end > dims.horizon() {
            return Err(Error::Interval { start, end });
        }
        Ok(Self { start, end, dims })
    }

    pub fn length(&self) -> usize {
        self.end - self.start + 1
    }
}

/// Radius for an interval of `length` steps.
pub fn radius_for_length(dims: &ProblemDims, length: usize) -> f64 {
    let k = dims.arms() as f64;
    let n = dims.horizon() as f64;
    // logs of the factors, so large N cannot overflow
    let inner = (length as f64).ln() + 2.0;
    let log_arg = (2.0 * k).ln() + 2.0 * n.ln() + inner.ln() - dims.delta().ln();
    log_arg.sqrt()
}

/// `C_{n', n}` for a validated query.
pub fn confidence_radius(q: &ConfidenceQuery) -> f64 {
    radius_for_length(&q.dims, q.length())
}

/// Which interval start points `is_better` examines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanMode {
    /// Every start point in range.
    #[default]
    Full,
    /// Start points at distance `2^j - 1` from the current step plus both
    /// activation markers; `O(log n)` per pair.
    Geometric,
}

impl std::str::FromStr for ScanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(Self::Full),
            "geometric" => Ok(Self::Geometric),
            other => Err(Error::Parameter(format!("unknown scan mode '{other}'"))),
        }
    }
}

impl std::fmt::Display for ScanMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Full => "full",
            Self::Geometric => "geometric",
        })
    }
}

/// Per-length thresholds, precomputed once per problem.
#[derive(Debug, Clone)]
pub struct ThresholdTable {
    dims: ProblemDims,
    radius: Vec<f64>,
    // auxiliary-estimator threshold, fixed point
    tilde_fixed: Vec<i128>,
    // lower bound for the GOOD-pair threshold: 12 C^2, fixed point
    hat_floor_fixed: Vec<i128>,
}

impl ThresholdTable {
    pub fn new(dims: ProblemDims) -> Self {
        let n = dims.horizon();
        let k = dims.arms() as f64;
        let mut radius = vec![0.0; n + 1];
        let mut tilde_fixed = vec![0; n + 1];
        let mut hat_floor_fixed = vec![0; n + 1];
        for len in 1..=n {
            let c = radius_for_length(&dims, len);
            radius[len] = c;
            tilde_fixed[len] = threshold_to_fixed(tilde_threshold(c, len, k));
            hat_floor_fixed[len] = threshold_to_fixed(ELIMINATION_CONSTANT * c * c);
        }
        Self {
            dims,
            radius,
            tilde_fixed,
            hat_floor_fixed,
        }
    }

    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn radius(&self, length: usize) -> f64 {
        self.radius[length]
    }

    /// Threshold of the auxiliary-estimator condition for an interval length.
    pub fn tilde_threshold(&self, length: usize) -> f64 {
        tilde_threshold(self.radius[length], length, self.dims.arms() as f64)
    }

    /// Threshold of the GOOD-pair condition given `P_{n':n}(a)`.
    pub fn hat_threshold(&self, length: usize, p_sum: f64) -> f64 {
        hat_threshold(self.radius[length], p_sum)
    }
}

/// `12 C (sqrt(len / K) ∨ C)`.
pub fn tilde_threshold(c: f64, length: usize, arms: f64) -> f64 {
    ELIMINATION_CONSTANT * c * (length as f64 / arms).sqrt().max(c)
}

/// `12 C (sqrt(P) ∨ C)`.
pub fn hat_threshold(c: f64, p_sum: f64) -> f64 {
    ELIMINATION_CONSTANT * c * p_sum.max(0.0).sqrt().max(c)
}

/// Activation and GOOD-membership markers for the pair `(a', a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairMarkers {
    pub active_since_a: usize,
    pub active_since_a_prime: usize,
    /// Step since which `a` has been GOOD, or `None` if it is BAD.
    pub good_since_a: Option<usize>,
    pub good_since_a_prime: Option<usize>,
}

impl PairMarkers {
    fn both_good_from(&self, start: usize) -> bool {
        matches!((self.good_since_a, self.good_since_a_prime), (Some(x), Some(y)) if x <= start && y <= start)
    }
}

const FIXED_UNIT: i128 = 1 << 64;

/// Outcome of testing one start point.
enum Probe {
    Fires,
    /// Neither condition fires here, nor at any of the next `skip - 1`
    /// earlier start points.
    Skip(usize),
}

// Going one start point earlier changes either delta by at most one reward
// (at most 1), and neither threshold decreases as the interval grows. A
// start point whose delta sits `g` below its threshold therefore cannot be
// followed by a firing start point within `floor(g) + 1` steps.
#[inline]
fn probe(
    tables: &EstimatorTables,
    thresholds: &ThresholdTable,
    a_prime: usize,
    a: usize,
    start: usize,
    n: usize,
    markers: &PairMarkers,
) -> Probe {
    let len = n - start + 1;
    let dt = tables.delta_tilde_fixed(a_prime, a, start, n);
    let gap_tilde = thresholds.tilde_fixed[len] - dt;
    if gap_tilde < 0 {
        return Probe::Fires;
    }
    let mut gap = gap_tilde;
    if markers.both_good_from(start) {
        let dh = tables.delta_hat_fixed(a_prime, a, start, n);
        let floor = thresholds.hat_floor_fixed[len];
        let gap_hat = if dh > floor {
            let thr = threshold_to_fixed(thresholds.hat_threshold(len, tables.p_sum_raw(a, start, n)));
            if dh > thr {
                return Probe::Fires;
            }
            thr - dh
        } else {
            // the floor never exceeds the threshold, so this understates the gap
            floor - dh
        };
        gap = gap.min(gap_hat);
    }
    Probe::Skip(
        usize::try_from(gap / FIXED_UNIT)
            .unwrap_or(usize::MAX)
            .saturating_add(1),
    )
}

#[inline]
fn fires_at(
    tables: &EstimatorTables,
    thresholds: &ThresholdTable,
    a_prime: usize,
    a: usize,
    start: usize,
    n: usize,
    markers: &PairMarkers,
) -> bool {
    matches!(probe(tables, thresholds, a_prime, a, start, n, markers), Probe::Fires)
}

/// Whether some interval `[n', n]` with `n' >= max(Active(a), Active(a'))`
/// certifies that `a'` beat `a`.
///
/// Strict inequalities throughout; a delta equal to its threshold does not
/// fire.
pub fn is_better(
    tables: &EstimatorTables,
    thresholds: &ThresholdTable,
    a_prime: ArmId,
    a: ArmId,
    n: usize,
    markers: &PairMarkers,
    scan: ScanMode,
) -> Result<bool> {
    tables.check_arm(a_prime)?;
    tables.check_arm(a)?;
    let lower = markers.active_since_a.max(markers.active_since_a_prime);
    tables.check_interval(lower.max(1), n)?;
    if lower == 0 {
        return Err(Error::Interval { start: 0, end: n });
    }
    if a_prime == a {
        return Ok(false);
    }
    let (ap, ai) = (a_prime.index(), a.index());
    match scan {
        ScanMode::Full => {
            let mut start = n;
            loop {
                match probe(tables, thresholds, ap, ai, start, n, markers) {
                    Probe::Fires => return Ok(true),
                    Probe::Skip(j) if start - lower >= j => start -= j,
                    Probe::Skip(_) => return Ok(false),
                }
            }
        }
        ScanMode::Geometric => {
            let mut offset = 0usize;
            while offset <= n - lower {
                if fires_at(tables, thresholds, ap, ai, n - offset, n, markers) {
                    return Ok(true);
                }
                offset = 2 * offset + 1;
            }
            let extra = [markers.active_since_a, markers.active_since_a_prime];
            Ok(extra
                .into_iter()
                .filter(|&s| s >= lower && s <= n)
                .any(|s| fires_at(tables, thresholds, ap, ai, s, n, markers)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, uniform_index, unit_f64};
    use proptest::prelude::*;

    fn arm(i: usize) -> ArmId {
        ArmId::from_index(i)
    }

    struct Step {
        arm: usize,
        aux: Option<usize>,
        reward: f64,
        probs: Vec<f64>,
    }

    fn random_history(k: usize, len: usize, seed: u64) -> Vec<Step> {
        let mut rng = stream(seed, 7);
        (0..len)
            .map(|_| {
                let a = uniform_index(&mut rng, k);
                let aux = if unit_f64(&mut rng) < 0.5 { Some(a) } else { None };
                let reward = if unit_f64(&mut rng) < 0.3 {
                    unit_f64(&mut rng)
                } else {
                    (unit_f64(&mut rng) < 0.5) as u8 as f64
                };
                Step {
                    arm: a,
                    aux,
                    reward,
                    probs: vec![1.0 / k as f64; k],
                }
            })
            .collect()
    }

    fn fill(k: usize, hist: &[Step]) -> EstimatorTables {
        let mut t = EstimatorTables::new(k, hist.len());
        for s in hist {
            t.record(arm(s.arm), s.aux.map(arm), s.reward, &s.probs).unwrap();
        }
        t
    }

    // direct exact summation, independent of the prefix tables
    fn brute(hist: &[Step], start: usize, end: usize, a_prime: usize, a: usize, tilde: bool) -> f64 {
        let mut acc: i128 = 0;
        for s in &hist[start - 1..end] {
            let who = if tilde { s.aux } else { Some(s.arm) };
            let r = (s.reward * FIXED_ONE).round() as i128;
            if who == Some(a_prime) {
                acc += r;
            }
            if who == Some(a) {
                acc -= r;
            }
        }
        acc as f64 / FIXED_ONE
    }

    #[test]
    fn radius_closed_form() {
        let dims = ProblemDims::new(2, 100, 0.01).unwrap();
        let q = ConfidenceQuery::new(1, 100, dims).unwrap();
        assert!((confidence_radius(&q) - 4.133_963_911_666_672).abs() < 1e-12);
        let direct = ((2.0 * 2.0 * 100.0f64.powi(2) * (100f64.ln() + 2.0)) / 0.01)
            .ln()
            .sqrt();
        assert!((confidence_radius(&q) - direct).abs() < 1e-12);
    }

    #[test]
    fn radius_single_step_drops_inner_log() {
        let dims = ProblemDims::new(2, 100, 0.01).unwrap();
        let q = ConfidenceQuery::new(7, 7, dims).unwrap();
        let expect = (4.0 * 2.0 * 100.0f64.powi(2) / 0.01).ln().sqrt();
        assert!((confidence_radius(&q) - expect).abs() < 1e-12);
        assert!((expect - 3.986_847_388_557_043).abs() < 1e-12);
    }

    #[test]
    fn radius_at_default_delta_matches_full_horizon_form() {
        let n = 1000usize;
        let dims = ProblemDims::with_default_delta(3, n).unwrap();
        let q = ConfidenceQuery::new(1, n, dims).unwrap();
        let nf = n as f64;
        let expect = (2.0 * 3.0 * nf.powi(3) * (nf.ln() + 2.0)).ln().sqrt();
        assert!((confidence_radius(&q) - expect).abs() < 1e-12);
    }

    #[test]
    fn query_rejects_reversed_interval() {
        let dims = ProblemDims::new(2, 100, 0.1).unwrap();
        assert_eq!(
            ConfidenceQuery::new(5, 4, dims),
            Err(Error::Interval { start: 5, end: 4 })
        );
    }

    #[test]
    fn delta_single_term() {
        let mut t = EstimatorTables::new(3, 10);
        t.record(arm(1), Some(arm(1)), 0.7, &[0.2, 0.6, 0.2]).unwrap();
        assert_eq!(t.delta_hat(arm(1), arm(0), 1, 1).unwrap(), 0.7);
        assert_eq!(t.delta_tilde_hat(arm(1), arm(0), 1, 1).unwrap(), 0.7);
        assert_eq!(t.delta_hat(arm(2), arm(2), 1, 1).unwrap(), 0.0);
        assert!(matches!(t.delta_hat(arm(1), arm(0), 1, 2), Err(Error::Range(_))));
    }

    #[test]
    fn prefix_matches_brute_force_on_fifty_steps() {
        let hist = random_history(4, 50, 3);
        let t = fill(4, &hist);
        for start in 1..=50 {
            for end in start..=50 {
                for ap in 0..4 {
                    for a in 0..4 {
                        assert_eq!(
                            t.delta_hat(arm(ap), arm(a), start, end).unwrap(),
                            brute(&hist, start, end, ap, a, false)
                        );
                        assert_eq!(
                            t.delta_tilde_hat(arm(ap), arm(a), start, end).unwrap(),
                            brute(&hist, start, end, ap, a, true)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn tables_invariants() {
        let hist = random_history(3, 120, 8);
        let t = fill(3, &hist);
        for a in 0..3 {
            for s in 2..=120 {
                assert!(t.g_hat_fixed(a, 1, s) >= t.g_hat_fixed(a, 1, s - 1));
                assert!(t.g_tilde_fixed(a, 1, s) >= t.g_tilde_fixed(a, 1, s - 1));
                assert!(t.p_sum_raw(a, 1, s) >= t.p_sum_raw(a, 1, s - 1));
            }
        }
        for s in 1..=120 {
            let nonzero = (0..3).filter(|&a| t.g_hat_fixed(a, s, s) > 0).count();
            assert!(nonzero <= 1);
            let p: f64 = (0..3).map(|a| t.p_sum_raw(a, s, s)).sum();
            assert!((p - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn record_validation() {
        let mut t = EstimatorTables::new(2, 1);
        assert!(matches!(
            t.record(arm(0), None, 1.5, &[0.5, 0.5]),
            Err(Error::RewardRange(_))
        ));
        assert!(matches!(t.record(arm(0), None, 0.5, &[1.0]), Err(Error::Dimension(_))));
        t.record(arm(0), None, 0.5, &[0.5, 0.5]).unwrap();
        assert!(t.record(arm(0), None, 0.5, &[0.5, 0.5]).is_err());
        t.reset();
        assert!(t.is_empty());
    }

    fn good_markers(start: usize) -> PairMarkers {
        PairMarkers {
            active_since_a: start,
            active_since_a_prime: start,
            good_since_a: Some(start),
            good_since_a_prime: Some(start),
        }
    }

    #[test]
    fn diagonal_never_fires() {
        let hist = random_history(2, 80, 5);
        let t = fill(2, &hist);
        let th = ThresholdTable::new(ProblemDims::new(2, 80, 0.5).unwrap());
        for n in 1..=80 {
            assert!(!is_better(&t, &th, arm(0), arm(0), n, &good_markers(1), ScanMode::Full).unwrap());
        }
    }

    #[test]
    fn single_step_threshold_exceeds_any_single_delta() {
        // 12 C^2 >= 12 for every admissible (K, N, delta)
        let dims = ProblemDims::new(2, 2, 0.999).unwrap();
        let th = ThresholdTable::new(dims);
        assert!(th.tilde_threshold(1) >= 12.0);
        assert!(th.hat_threshold(1, 1.0) >= 12.0);
    }

    /// Tables in which arm `a'` collected reward 1 through the auxiliary draw
    /// on every one of `len` steps while arm `a` collected nothing.
    fn aux_window(k: usize, n: usize, len: usize) -> EstimatorTables {
        let mut t = EstimatorTables::new(k, n);
        let probs = vec![1.0 / k as f64; k];
        for _ in 0..len {
            t.record(arm(1), Some(arm(1)), 1.0, &probs).unwrap();
        }
        t
    }

    #[test]
    fn sixty_four_step_window_cannot_reach_threshold() {
        // K=4, N=1024, delta=1/N, window of 64: threshold = 12 C max(4, C)
        // with C = 4.969079633286951, i.e. 296.3010288233661 (independent
        // calculator); no 64-step delta can exceed 64.
        let dims = ProblemDims::with_default_delta(4, 1024).unwrap();
        let th = ThresholdTable::new(dims);
        assert!((th.radius(64) - 4.969_079_633_286_951).abs() < 1e-12);
        assert!((th.tilde_threshold(64) - 296.301_028_823_366_1).abs() < 1e-9);
        let t = aux_window(4, 1024, 64);
        assert_eq!(t.delta_tilde_hat(arm(1), arm(0), 1, 64).unwrap(), 64.0);
        let m = PairMarkers {
            active_since_a: 1,
            active_since_a_prime: 1,
            good_since_a: None,
            good_since_a_prime: None,
        };
        assert!(!is_better(&t, &th, arm(1), arm(0), 64, &m, ScanMode::Full).unwrap());
    }

    #[test]
    fn long_dominant_window_fires() {
        // K=2, N=4096, delta=1/N: full-window threshold 12 C sqrt(2048) with
        // C = 5.354760512029269, i.e. 2907.9455767187296 < 4096
        let dims = ProblemDims::with_default_delta(2, 4096).unwrap();
        let th = ThresholdTable::new(dims);
        assert!((th.tilde_threshold(4096) - 2_907.945_576_718_729_6).abs() < 1e-8);
        let t = aux_window(2, 4096, 4096);
        let m = PairMarkers {
            active_since_a: 1,
            active_since_a_prime: 1,
            good_since_a: None,
            good_since_a_prime: None,
        };
        assert!(is_better(&t, &th, arm(1), arm(0), 4096, &m, ScanMode::Full).unwrap());
        assert!(is_better(&t, &th, arm(1), arm(0), 4096, &m, ScanMode::Geometric).unwrap());
        assert!(!is_better(&t, &th, arm(0), arm(1), 4096, &m, ScanMode::Full).unwrap());
        // a late activation marker leaves only windows of <= 297 steps,
        // whose threshold (779.02...) is out of reach
        let late = PairMarkers {
            active_since_a: 3800,
            ..m
        };
        assert!(!is_better(&t, &th, arm(1), arm(0), 4096, &late, ScanMode::Full).unwrap());
    }

    #[test]
    fn good_pair_branch_needs_both_good() {
        // Ĝ differs but G̃̂ does not: only the GOOD-pair condition can fire
        let n = 4096;
        let dims = ProblemDims::with_default_delta(2, n).unwrap();
        let th = ThresholdTable::new(dims);
        let mut t = EstimatorTables::new(2, n);
        for _ in 0..n {
            t.record(arm(1), None, 1.0, &[0.5, 0.5]).unwrap();
        }
        assert!(th.hat_threshold(n, t.p_sum(arm(0), 1, n).unwrap()) < n as f64);
        let good = good_markers(1);
        assert!(is_better(&t, &th, arm(1), arm(0), n, &good, ScanMode::Full).unwrap());
        let bad = PairMarkers {
            good_since_a: None,
            ..good
        };
        assert!(!is_better(&t, &th, arm(1), arm(0), n, &bad, ScanMode::Full).unwrap());
        let late_good = PairMarkers {
            good_since_a: Some(n),
            ..good
        };
        assert!(!is_better(&t, &th, arm(1), arm(0), n, &late_good, ScanMode::Full).unwrap());
    }

    #[test]
    fn is_better_rejects_bad_interval() {
        let t = fill(2, &random_history(2, 10, 1));
        let th = ThresholdTable::new(ProblemDims::new(2, 10, 0.5).unwrap());
        assert!(is_better(&t, &th, arm(0), arm(1), 11, &good_markers(1), ScanMode::Full).is_err());
        assert!(is_better(&t, &th, arm(0), arm(1), 5, &good_markers(6), ScanMode::Full).is_err());
    }

    proptest! {
        #[test]
        fn prefix_equals_direct_sum(seed in 0u64..10_000, len in 1usize..200, k in 2usize..6) {
            let hist = random_history(k, len, seed);
            let t = fill(k, &hist);
            let mut rng = stream(seed, 99);
            for _ in 0..20 {
                let s = 1 + uniform_index(&mut rng, len);
                let e = s + uniform_index(&mut rng, len - s + 1);
                let ap = uniform_index(&mut rng, k);
                let a = uniform_index(&mut rng, k);
                let dh = t.delta_hat(arm(ap), arm(a), s, e).unwrap();
                prop_assert_eq!(dh, brute(&hist, s, e, ap, a, false));
                prop_assert_eq!(dh, -t.delta_hat(arm(a), arm(ap), s, e).unwrap());
                prop_assert_eq!(t.delta_tilde_hat(arm(ap), arm(a), s, e).unwrap(), brute(&hist, s, e, ap, a, true));
            }
        }

        #[test]
        fn radius_monotone(k in 2usize..32, n in 2usize..100_000, d1 in 0.001f64..0.999, d2 in 0.001f64..0.999, l1 in 1usize..100_000, l2 in 1usize..100_000) {
            let (lo, hi) = (l1.min(l2).min(n), l1.max(l2).min(n));
            let dims = ProblemDims::new(k, n, d1).unwrap();
            prop_assert!(radius_for_length(&dims, lo) <= radius_for_length(&dims, hi));
            prop_assert!(radius_for_length(&dims, lo) > 0.0);
            let (dl, dh) = (d1.min(d2), d1.max(d2));
            let lo_d = ProblemDims::new(k, n, dl).unwrap();
            let hi_d = ProblemDims::new(k, n, dh).unwrap();
            prop_assert!(radius_for_length(&lo_d, hi) >= radius_for_length(&hi_d, hi));
        }

        #[test]
        fn full_scan_is_order_free(seed in 0u64..1000, bias in 0.0f64..1.0) {
            // a small problem (K=2, N=400, delta near 1) so that some windows fire
            let n = 400;
            let dims = ProblemDims::new(2, n, 0.99).unwrap();
            let th = ThresholdTable::new(dims);
            let mut rng = stream(seed, 5);
            let mut t = EstimatorTables::new(2, n);
            for _ in 0..n {
                let a = (unit_f64(&mut rng) < bias) as usize;
                t.record(arm(a), Some(arm(a)), (unit_f64(&mut rng) < 0.9) as u8 as f64, &[0.5, 0.5]).unwrap();
            }
            let m = good_markers(1);
            let end = 1 + uniform_index(&mut rng, n);
            let fast = is_better(&t, &th, arm(1), arm(0), end, &m, ScanMode::Full).unwrap();
            // ascending oracle evaluated with f64 thresholds straight from the formula
            let oracle = (1..=end).any(|s| {
                let len = end - s + 1;
                let c = radius_for_length(&dims, len);
                let dt = t.delta_tilde_hat(arm(1), arm(0), s, end).unwrap();
                let dh = t.delta_hat(arm(1), arm(0), s, end).unwrap();
                let p = t.p_sum(arm(0), s, end).unwrap();
                dt > tilde_threshold(c, len, 2.0) || dh > hat_threshold(c, p)
            });
            prop_assert_eq!(fast, oracle);
            if fast {
                // geometric scan can only see a subset
            } else {
                prop_assert!(!is_better(&t, &th, arm(1), arm(0), end, &m, ScanMode::Geometric).unwrap());
            }
        }

        #[test]
        fn skip_ahead_matches_every_start(
            seed in 0u64..1000,
            bias in 0.3f64..1.0,
            late in 0usize..400,
            a_good in proptest::bool::ANY,
        ) {
            // a small GOOD-pair probability for arm 0 keeps the hat threshold reachable
            let (k, n) = (3, 1000);
            let dims = ProblemDims::new(k, n, 0.99).unwrap();
            let th = ThresholdTable::new(dims);
            let mut rng = stream(seed, 6);
            let mut t = EstimatorTables::new(k, n);
            for _ in 0..n {
                let a = if unit_f64(&mut rng) < bias { 1 } else { uniform_index(&mut rng, k) };
                let aux = (unit_f64(&mut rng) < 0.7).then_some(arm(a));
                let p1 = 0.8 + 0.19 * unit_f64(&mut rng);
                let probs = [(1.0 - p1) / 2.0, p1, (1.0 - p1) / 2.0];
                t.record(arm(a), aux, 0.5 + 0.5 * unit_f64(&mut rng), &probs).unwrap();
            }
            let end = n - uniform_index(&mut rng, 200);
            let m = PairMarkers {
                active_since_a: 1,
                active_since_a_prime: 1 + late.min(end - 1),
                good_since_a: a_good.then_some(1),
                good_since_a_prime: Some(1 + late / 2),
            };
            let lower = m.active_since_a.max(m.active_since_a_prime);
            let fast = is_better(&t, &th, arm(1), arm(0), end, &m, ScanMode::Full).unwrap();
            let naive = (lower..=end).any(|s| fires_at(&t, &th, 1, 0, s, end, &m));
            prop_assert_eq!(fast, naive);
        }
    }
}
