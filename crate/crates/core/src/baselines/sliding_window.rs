use std::collections::VecDeque;

use rand::RngCore;

use super::argmax_index;
use crate::error::{Error, Result};
use crate::policy::{check_horizon, check_outcome, point_mass, Policy, Selection};
use crate::types::{ArmId, StepOutcome};

/// `floor(sqrt(N ln N))`, the usual window when only the horizon is known.
pub fn default_window(horizon: usize) -> usize {
    let n = horizon as f64;
    ((n * n.ln()).sqrt().floor() as usize).max(1)
}

/// UCB computed over the trailing `window` steps only.
///
/// The index is `mean + sqrt(2 ln(min(n, W)) / pulls)` over the window; an
/// arm without a pull inside the window is played first. With `W = N` this
/// makes exactly the choices of [`Ucb1`](super::Ucb1).
#[derive(Debug, Clone)]
pub struct SlidingWindowUcb {
    arms: usize,
    horizon: usize,
    window: usize,
    steps: usize,
    history: VecDeque<(usize, f64)>,
    pulls: Vec<u64>,
    sums: Vec<f64>,
    pending: Option<ArmId>,
}

impl SlidingWindowUcb {
    pub fn new(arms: usize, horizon: usize, window: usize) -> Result<Self> {
        if arms < 2 || horizon < 2 {
            return Err(Error::InvalidDims(format!(
                "need K >= 2 and N >= 2, got K={arms} N={horizon}"
            )));
        }
        if window < arms {
            return Err(Error::Parameter(format!("window {window} is smaller than K={arms}")));
        }
        Ok(Self {
            arms,
            horizon,
            window,
            steps: 0,
            history: VecDeque::with_capacity(window.min(horizon)),
            pulls: vec![0; arms],
            sums: vec![0.0; arms],
            pending: None,
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    fn choose(&self) -> usize {
        if let Some(a) = self.pulls.iter().position(|&p| p == 0) {
            return a;
        }
        let log_n = (self.steps.min(self.window) as f64).ln();
        argmax_index(
            self.pulls
                .iter()
                .zip(&self.sums)
                .map(|(&p, &s)| s / p as f64 + (2.0 * log_n / p as f64).sqrt()),
        )
    }
}

impl Policy for SlidingWindowUcb {
    fn name(&self) -> &str {
        "sw-ucb"
    }

    fn arms(&self) -> usize {
        self.arms
    }

    fn horizon(&self) -> usize {
        self.horizon
    }

    fn steps_taken(&self) -> usize {
        self.steps
    }

    fn select(&mut self, _rng: &mut dyn RngCore) -> Result<Selection> {
        check_horizon(self.steps, self.horizon)?;
        let arm = self.choose();
        self.pending = Some(ArmId::from_index(arm));
        Ok(Selection {
            distribution: point_mass(self.arms, arm),
            arm: ArmId::from_index(arm),
            aux: None,
        })
    }

    fn update(&mut self, outcome: &StepOutcome) -> Result<()> {
        check_outcome(outcome, self.pending)?;
        self.pending = None;
        if self.history.len() == self.window {
            let (old, r) = self.history.pop_front().expect("window is non-empty");
            self.pulls[old] -= 1;
            self.sums[old] -= r;
            if self.pulls[old] == 0 {
                // drop accumulated rounding once the arm leaves the window
                self.sums[old] = 0.0;
            }
        }
        let a = outcome.arm.index();
        self.history.push_back((a, outcome.reward));
        self.pulls[a] += 1;
        self.sums[a] += outcome.reward;
        self.steps += 1;
        Ok(())
    }
}
