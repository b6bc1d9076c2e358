use rand::RngCore;

use crate::error::{Error, Result};
use crate::policy::{check_horizon, check_outcome, Policy, Selection};
use crate::rng::sample_categorical;
use crate::types::{ArmId, StepOutcome};

/// Mixing coefficient `gamma` and sharing rate `alpha` for EXP3.S.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exp3sParams {
    /// Number of switches the tuning assumes.
    pub switch_budget: usize,
    pub gamma: f64,
    pub alpha: f64,
}

impl Exp3sParams {
    /// Horizon-tuned defaults with hardness `H = budget + 1`:
    /// `alpha = 1/N`, `gamma = min(1, sqrt(K (H ln(KN) + e) / ((e - 1) N)))`.
    pub fn tuned(arms: usize, horizon: usize, switch_budget: usize) -> Self {
        let (k, n) = (arms as f64, horizon as f64);
        let e = std::f64::consts::E;
        let h = switch_budget as f64 + 1.0;
        let gamma = (k * (h * (k * n).ln() + e) / ((e - 1.0) * n)).sqrt().min(1.0);
        Self {
            switch_budget,
            gamma,
            alpha: 1.0 / n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Parameter(format!(
                "gamma must lie in (0, 1], got {}",
                self.gamma
            )));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::Parameter(format!(
                "alpha must be non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// EXP3.S: exponential weights with uniform mixing and weight sharing.
/// Every arm keeps probability at least `gamma / K`.
#[derive(Debug, Clone)]
pub struct Exp3s {
    arms: usize,
    horizon: usize,
    params: Exp3sParams,
    steps: usize,
    // normalized to sum 1 after every update; the rule is scale-invariant
    weights: Vec<f64>,
    probs: Vec<f64>,
    pending: Option<ArmId>,
}

impl Exp3s {
    pub fn new(arms: usize, horizon: usize, params: Exp3sParams) -> Result<Self> {
        if arms < 2 || horizon < 2 {
            return Err(Error::InvalidDims(format!(
                "need K >= 2 and N >= 2, got K={arms} N={horizon}"
            )));
        }
        params.validate()?;
        let w = vec![1.0 / arms as f64; arms];
        Ok(Self {
            arms,
            horizon,
            params,
            steps: 0,
            probs: w.clone(),
            weights: w,
            pending: None,
        })
    }

    pub fn params(&self) -> &Exp3sParams {
        &self.params
    }

    fn distribution(&self) -> Vec<f64> {
        let total: f64 = self.weights.iter().sum();
        let g = self.params.gamma;
        let k = self.arms as f64;
        self.weights.iter().map(|w| (1.0 - g) * w / total + g / k).collect()
    }
}

impl Policy for Exp3s {
    fn name(&self) -> &str {
        "exp3s"
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

    fn select(&mut self, rng: &mut dyn RngCore) -> Result<Selection> {
        check_horizon(self.steps, self.horizon)?;
        self.probs = self.distribution();
        let arm = ArmId::from_index(sample_categorical(rng, &self.probs));
        self.pending = Some(arm);
        Ok(Selection {
            distribution: self.probs.clone(),
            arm,
            aux: None,
        })
    }

    fn update(&mut self, outcome: &StepOutcome) -> Result<()> {
        check_outcome(outcome, self.pending)?;
        self.pending = None;
        let k = self.arms as f64;
        let a = outcome.arm.index();
        let old_total: f64 = self.weights.iter().sum();
        let share = std::f64::consts::E * self.params.alpha / k * old_total;
        let estimate = outcome.reward / self.probs[a];
        self.weights[a] *= (self.params.gamma * estimate / k).exp();
        for w in &mut self.weights {
            *w += share;
        }
        let total: f64 = self.weights.iter().sum();
        for w in &mut self.weights {
            *w /= total;
        }
        self.steps += 1;
        Ok(())
    }
}
