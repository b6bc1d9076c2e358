//! The contract every bandit policy implements.
//!
//! A step is a `select` followed by exactly one `update` carrying the
//! outcome of that selection. Policies are plain mutable values owned by a
//! single replication; they must be `Send` so the harness can move them to
//! worker threads.

use rand::RngCore;

use crate::error::{Error, Result};
use crate::types::{ArmId, StepOutcome};

/// Result of `select`: the distribution the arm was drawn from, the arm, and
/// the auxiliary draw.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub distribution: Vec<f64>,
    pub arm: ArmId,
    pub aux: Option<ArmId>,
}

pub trait Policy: Send {
    /// Short human-readable name.
    fn name(&self) -> &str;

    fn arms(&self) -> usize;

    fn horizon(&self) -> usize;

    /// Steps completed so far.
    fn steps_taken(&self) -> usize;

    /// Choose the arm for the next step. Fails once the horizon is exhausted.
    fn select(&mut self, rng: &mut dyn RngCore) -> Result<Selection>;

    /// Fold in the outcome of the preceding `select`.
    fn update(&mut self, outcome: &StepOutcome) -> Result<()>;

    /// Current episode index, for policies that restart.
    fn episode(&self) -> Option<usize> {
        None
    }

    /// Number of arms still considered potentially optimal, where meaningful.
    fn good_size(&self) -> Option<usize> {
        None
    }
}

pub(crate) fn check_horizon(steps_taken: usize, horizon: usize) -> Result<()> {
    if steps_taken >= horizon {
        return Err(Error::Contract(format!(
            "select called at step {} beyond horizon {horizon}",
            steps_taken + 1
        )));
    }
    Ok(())
}

/// Distribution with all mass on one arm.
pub(crate) fn point_mass(arms: usize, arm: usize) -> Vec<f64> {
    let mut d = vec![0.0; arms];
    d[arm] = 1.0;
    d
}

/// Shared `update` validation: reward range, aux consistency, and that the
/// outcome belongs to the pending selection.
pub(crate) fn check_outcome(outcome: &StepOutcome, pending: Option<ArmId>) -> Result<()> {
    outcome.validate()?;
    match pending {
        None => Err(Error::Contract("update without a preceding select".into())),
        Some(arm) if arm != outcome.arm => Err(Error::Contract(format!(
            "outcome for arm {} but arm {arm} was selected",
            outcome.arm
        ))),
        Some(_) => Ok(()),
    }
}
