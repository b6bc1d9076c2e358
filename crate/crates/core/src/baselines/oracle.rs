use std::sync::Arc;

use rand::RngCore;

use crate::environments::EnvironmentSpec;
use crate::error::Result;
use crate::policy::{check_horizon, check_outcome, point_mass, Policy, Selection};
use crate::types::{ArmId, StepOutcome};

/// Clairvoyant policy: reads the true means and plays the current optimum
/// (lowest index on ties). Its dynamic regret is zero by construction.
#[derive(Debug, Clone)]
pub struct Oracle {
    env: Arc<EnvironmentSpec>,
    steps: usize,
    pending: Option<ArmId>,
}

impl Oracle {
    pub fn new(env: Arc<EnvironmentSpec>) -> Self {
        Self {
            env,
            steps: 0,
            pending: None,
        }
    }
}

impl Policy for Oracle {
    fn name(&self) -> &str {
        "oracle"
    }

    fn arms(&self) -> usize {
        self.env.arms()
    }

    fn horizon(&self) -> usize {
        self.env.horizon()
    }

    fn steps_taken(&self) -> usize {
        self.steps
    }

    fn select(&mut self, _rng: &mut dyn RngCore) -> Result<Selection> {
        check_horizon(self.steps, self.env.horizon())?;
        let arm = self.env.optimal_arm(self.steps + 1);
        self.pending = Some(arm);
        Ok(Selection {
            distribution: point_mass(self.env.arms(), arm.index()),
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
