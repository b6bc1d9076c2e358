use rand::RngCore;

use super::argmax_index;
use crate::error::{Error, Result};
use crate::policy::{check_horizon, check_outcome, point_mass, Policy, Selection};
use crate::types::{ArmId, ProblemDims, StepOutcome};

/// UCB1: one round-robin pass, then `argmax mean + sqrt(2 ln n / pulls)`
/// where `n` counts completed steps.
#[derive(Debug, Clone)]
pub struct Ucb1 {
    arms: usize,
    horizon: usize,
    steps: usize,
    pulls: Vec<u64>,
    sums: Vec<f64>,
    pending: Option<ArmId>,
}

impl Ucb1 {
    pub fn new(arms: usize, horizon: usize) -> Result<Self> {
        if arms < 2 || horizon < 2 {
            return Err(Error::InvalidDims(format!(
                "UCB1 needs K >= 2 and N >= 2, got K={arms} N={horizon}"
            )));
        }
        Ok(Self {
            arms,
            horizon,
            steps: 0,
            pulls: vec![0; arms],
            sums: vec![0.0; arms],
            pending: None,
        })
    }

    pub fn from_dims(dims: &ProblemDims) -> Self {
        Self::new(dims.arms(), dims.horizon()).expect("dims are validated")
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    fn choose(&self) -> usize {
        if let Some(a) = self.pulls.iter().position(|&p| p == 0) {
            return a;
        }
        let log_n = (self.steps as f64).ln();
        argmax_index(
            self.pulls
                .iter()
                .zip(&self.sums)
                .map(|(&p, &s)| s / p as f64 + (2.0 * log_n / p as f64).sqrt()),
        )
    }
}

impl Policy for Ucb1 {
    fn name(&self) -> &str {
        "ucb1"
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
        let a = outcome.arm.index();
        self.pulls[a] += 1;
        self.sums[a] += outcome.reward;
        self.steps += 1;
        Ok(())
    }
}
