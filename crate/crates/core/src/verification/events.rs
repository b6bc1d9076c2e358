//! Oracle-side diagnostics for the four concentration events of the
//! analysis, evaluated on a recorded run with access to the true means.
//!
//! Checking every interval is quadratic in the horizon, so intervals are
//! subsampled: every interval whose length is a power of two, plus every
//! interval `[t_s, n]` starting at an episode start and ending inside that
//! episode.
//!
//! The auxiliary-estimator events (2 and 4) are only meaningful while arm
//! `a` is active: outside the active set `Ã = a` cannot happen, so the
//! estimate is zero while `g(a)/K` keeps accumulating. Those two events are
//! checked on intervals where `a` is active at every step; events 1 and 3
//! are checked on all sampled intervals.

use serde::Serialize;

use crate::environments::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::statistics::radius_for_length;
use crate::types::{ArmId, ProblemDims, RunTrace};

/// `C'` for an interval of `length`: `sqrt(ln(2 K^2 N^2 (ln L + 2) / delta))`.
pub fn wide_radius(dims: &ProblemDims, length: usize) -> f64 {
    let (k, n) = (dims.arms() as f64, dims.horizon() as f64);
    let log_arg = 2f64.ln() + 2.0 * k.ln() + 2.0 * n.ln() + ((length as f64).ln() + 2.0).ln() - dims.delta().ln();
    log_arg.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EventDiagnostics {
    pub e1: bool,
    pub e2: bool,
    pub e3: bool,
    pub e4: bool,
    pub intervals: usize,
    /// Largest `|deviation| / bound` seen for each event.
    pub worst_ratio: [f64; 4],
}

impl EventDiagnostics {
    pub fn all_hold(&self) -> bool {
        self.e1 && self.e2 && self.e3 && self.e4
    }
}

struct Prefix {
    n: usize,
    k: usize,
    // per arm
    hat: Vec<f64>,
    weighted: Vec<f64>,
    p: Vec<f64>,
    tilde_hat: Vec<f64>,
    tilde: Vec<f64>,
    active: Vec<u32>,
    // per ordered pair (a, a')
    g_prime: Vec<f64>,
    g_pair: Vec<f64>,
    d_prime: Vec<f64>,
}

impl Prefix {
    fn idx(&self, a: usize, t: usize) -> usize {
        a * (self.n + 1) + t
    }

    fn pidx(&self, a: usize, b: usize, t: usize) -> usize {
        (a * self.k + b) * (self.n + 1) + t
    }

    fn build(trace: &RunTrace, env: &EnvironmentSpec, dists: &[Vec<f64>]) -> Self {
        let (n, k) = (trace.len(), env.arms());
        let mut p = Self {
            n,
            k,
            hat: vec![0.0; k * (n + 1)],
            weighted: vec![0.0; k * (n + 1)],
            p: vec![0.0; k * (n + 1)],
            tilde_hat: vec![0.0; k * (n + 1)],
            tilde: vec![0.0; k * (n + 1)],
            active: vec![0; k * (n + 1)],
            g_prime: vec![0.0; k * k * (n + 1)],
            g_pair: vec![0.0; k * k * (n + 1)],
            d_prime: vec![0.0; k * k * (n + 1)],
        };
        for (i, step) in trace.steps.iter().enumerate() {
            let t = i + 1;
            let g = env.means_at(t);
            let probs = &dists[i];
            for a in 0..k {
                let (cur, prev) = (p.idx(a, t), p.idx(a, t - 1));
                let played = step.arm.index() == a;
                let revealed = step.aux.map(ArmId::index) == Some(a);
                p.hat[cur] = p.hat[prev] + if played { step.reward } else { 0.0 };
                p.weighted[cur] = p.weighted[prev] + probs[a] * g[a];
                p.p[cur] = p.p[prev] + probs[a];
                p.tilde_hat[cur] = p.tilde_hat[prev] + if revealed { step.reward } else { 0.0 };
                p.tilde[cur] = p.tilde[prev] + g[a] / k as f64;
                p.active[cur] = p.active[prev] + u32::from(probs[a] > 0.0);
                for b in 0..k {
                    let (cur, prev) = (p.pidx(a, b, t), p.pidx(a, b, t - 1));
                    p.g_prime[cur] = p.g_prime[prev] + if played { g[b] } else { 0.0 };
                    p.g_pair[cur] = p.g_pair[prev] + probs[a] * g[b];
                    p.d_prime[cur] = p.d_prime[prev] + if revealed { g[a] - g[b] } else { 0.0 };
                }
            }
        }
        p
    }

    fn arm(&self, v: &[f64], a: usize, s: usize, e: usize) -> f64 {
        v[self.idx(a, e)] - v[self.idx(a, s - 1)]
    }

    fn pair(&self, v: &[f64], a: usize, b: usize, s: usize, e: usize) -> f64 {
        v[self.pidx(a, b, e)] - v[self.pidx(a, b, s - 1)]
    }

    fn active_throughout(&self, a: usize, s: usize, e: usize) -> bool {
        (self.active[self.idx(a, e)] - self.active[self.idx(a, s - 1)]) as usize == e - s + 1
    }
}

/// Evaluate the four events on a run recorded with per-step distributions.
pub fn event_diagnostics(trace: &RunTrace, env: &EnvironmentSpec, dims: &ProblemDims) -> Result<EventDiagnostics> {
    let dists = trace
        .distributions
        .as_ref()
        .ok_or_else(|| Error::Parameter("run was recorded without per-step distributions".into()))?;
    if trace.len() != env.horizon() || dists.len() != trace.len() {
        return Err(Error::Dimension(format!(
            "trace has {} steps and {} distributions, environment horizon is {}",
            trace.len(),
            dists.len(),
            env.horizon()
        )));
    }
    if dims.arms() != env.arms() || dims.horizon() != env.horizon() {
        return Err(Error::Dimension(
            "problem dimensions do not match the environment".into(),
        ));
    }
    let pre = Prefix::build(trace, env, dists);
    let (n, k) = (pre.n, pre.k);
    let kf = k as f64;

    let mut intervals: Vec<(usize, usize)> = Vec::new();
    let mut len = 1;
    while len <= n {
        intervals.extend((1..=n + 1 - len).map(|s| (s, s + len - 1)));
        len *= 2;
    }
    let mut start = 1;
    for t in 1..=n {
        let ep = trace.steps[t - 1].episode;
        if t > 1 && ep != trace.steps[t - 2].episode {
            start = t;
        }
        if !(t - start + 1).is_power_of_two() {
            intervals.push((start, t));
        }
    }

    let mut worst = [0.0f64; 4];
    for &(s, e) in &intervals {
        let len = e - s + 1;
        let c = radius_for_length(dims, len);
        let cw = wide_radius(dims, len);
        let len_term = (len as f64 / kf).sqrt();
        for a in 0..k {
            let p_sum = pre.arm(&pre.p, a, s, e);
            let dev1 = (pre.arm(&pre.hat, a, s, e) - pre.arm(&pre.weighted, a, s, e)).abs();
            worst[0] = worst[0].max(dev1 / (6.0 * c * p_sum.sqrt().max(c)));
            let active = pre.active_throughout(a, s, e);
            if active {
                let dev2 = (pre.arm(&pre.tilde_hat, a, s, e) - pre.arm(&pre.tilde, a, s, e)).abs();
                worst[1] = worst[1].max(dev2 / (6.0 * c * len_term.max(c)));
            }
            let bound3 = 5.0 * cw * p_sum.sqrt().max(cw);
            let bound4 = 5.0 * cw * len_term.max(cw);
            for b in 0..k {
                let dev3 = (pre.pair(&pre.g_prime, a, b, s, e) - pre.pair(&pre.g_pair, a, b, s, e)).abs();
                worst[2] = worst[2].max(dev3 / bound3);
                if active {
                    let delta_tilde = pre.arm(&pre.tilde, a, s, e) - pre.arm(&pre.tilde, b, s, e);
                    let dev4 = (pre.pair(&pre.d_prime, a, b, s, e) - delta_tilde).abs();
                    worst[3] = worst[3].max(dev4 / bound4);
                }
            }
        }
    }
    Ok(EventDiagnostics {
        e1: worst[0] <= 1.0,
        e2: worst[1] <= 1.0,
        e3: worst[2] <= 1.0,
        e4: worst[3] <= 1.0,
        intervals: intervals.len(),
        worst_ratio: worst,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadiusGridReport {
    pub checked: u64,
    pub violations: u64,
    /// Largest `C' / C` seen.
    pub max_ratio: f64,
}

/// Check `C' <= 2 C` for `K` in `2..=max_arms`, every length up to
/// `max_length`, with the horizon equal to the length (the tightest case)
/// and equal to `max_length`, at `delta` in `{0.05, 0.01, 1/N}`.
pub fn wide_radius_grid(max_arms: usize, max_length: usize) -> Result<RadiusGridReport> {
    let mut checked = 0u64;
    let mut violations = 0u64;
    let mut max_ratio = 0.0f64;
    for k in 2..=max_arms {
        for len in 2..=max_length {
            for horizon in [len, max_length] {
                for delta in [0.05, 0.01, 1.0 / horizon as f64] {
                    let dims = ProblemDims::new(k, horizon, delta)?;
                    let ratio = wide_radius(&dims, len) / radius_for_length(&dims, len);
                    max_ratio = max_ratio.max(ratio);
                    checked += 1;
                    violations += u64::from(ratio > 2.0);
                }
            }
        }
    }
    Ok(RadiusGridReport {
        checked,
        violations,
        max_ratio,
    })
}
