use rand::RngCore;

use crate::error::{Error, Result};
use crate::policy::{check_horizon, check_outcome, Policy, Selection};
use crate::rng::uniform_index;
use crate::types::{ArmId, StepOutcome};

/// Plays every arm with probability `1/K`. A reference point for regret.
#[derive(Debug, Clone)]
pub struct Uniform {
    arms: usize,
    horizon: usize,
    steps: usize,
    pending: Option<ArmId>,
}

impl Uniform {
    pub fn new(arms: usize, horizon: usize) -> Result<Self> {
        if arms < 2 || horizon < 2 {
            return Err(Error::InvalidDims(format!(
                "need K >= 2 and N >= 2, got K={arms} N={horizon}"
            )));
        }
        Ok(Self {
            arms,
            horizon,
            steps: 0,
            pending: None,
        })
    }
}

impl Policy for Uniform {
    fn name(&self) -> &str {
        "uniform"
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
        let arm = ArmId::from_index(uniform_index(rng, self.arms));
        self.pending = Some(arm);
        Ok(Selection {
            distribution: vec![1.0 / self.arms as f64; self.arms],
            arm,
            aux: None,
        })
    }

    fn update(&mut self, outcome: &StepOutcome) -> Result<()> {
        check_outcome(outcome, self.pending)?;
        self.pending = None;
        self.steps += 1;
        Ok(())
    }
}
