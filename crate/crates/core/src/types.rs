//! Shared domain types.
//!
//! Arms are 0-indexed everywhere in this crate: arm `0` is the first arm.
//! Steps are 1-indexed (`1..=N`) so that intervals `[n', n]` read the same
//! way they do in the usual bandit notation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an arm in `0..K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArmId(usize);

impl ArmId {
    /// Checked constructor: `index` must be below `arms`.
    pub fn new(index: usize, arms: usize) -> Result<Self> {
        if index >= arms {
            return Err(Error::Range(format!("arm {index} not in [0, {arms})")));
        }
        Ok(Self(index))
    }

    /// Unchecked constructor for call sites that already hold a valid index.
    pub(crate) const fn from_index(index: usize) -> Self {
        Self(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for ArmId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arm count, horizon and confidence parameter of one problem instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemDims {
    arms: usize,
    horizon: usize,
    delta: f64,
}

impl ProblemDims {
    pub fn new(arms: usize, horizon: usize, delta: f64) -> Result<Self> {
        if arms < 2 {
            return Err(Error::InvalidDims(format!("need at least 2 arms, got {arms}")));
        }
        if horizon < 2 {
            return Err(Error::InvalidDims(format!("horizon must be at least 2, got {horizon}")));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::InvalidDims(format!("delta must lie in (0, 1), got {delta}")));
        }
        Ok(Self { arms, horizon, delta })
    }

    /// Dimensions with the default confidence parameter `delta = 1/N`.
    pub fn with_default_delta(arms: usize, horizon: usize) -> Result<Self> {
        Self::new(arms, horizon, 1.0 / horizon.max(2) as f64)
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn arm(&self, index: usize) -> Result<ArmId> {
        ArmId::new(index, self.arms)
    }
}

/// What the environment and policy agreed on for one step.
///
/// `aux` is the auxiliary draw used by the second-type estimator: either the
/// played arm itself or `None` (the "not an arm" outcome).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub arm: ArmId,
    pub reward: f64,
    pub aux: Option<ArmId>,
}

impl StepOutcome {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.reward) {
            return Err(Error::RewardRange(self.reward));
        }
        if let Some(aux) = self.aux {
            if aux != self.arm {
                return Err(Error::Contract(format!(
                    "auxiliary arm {aux} differs from played arm {}",
                    self.arm
                )));
            }
        }
        Ok(())
    }
}

/// One step of a simulated run.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceStep {
    pub arm: ArmId,
    pub aux: Option<ArmId>,
    pub reward: f64,
    /// Episode the step was played in (ArmSwitch only).
    pub episode: Option<usize>,
    /// `|GOOD|` at selection time (ArmSwitch only).
    pub good_size: Option<usize>,
    /// True instantaneous regret `max_a g_n(a) - g_n(A_n)`.
    pub regret: f64,
}

/// Per-step record of a full run, step `n` stored at index `n - 1`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunTrace {
    pub steps: Vec<TraceStep>,
    /// Sampling distributions `P_n`, kept only when recording was requested.
    pub distributions: Option<Vec<Vec<f64>>>,
}

impl RunTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Number of distinct episodes seen, if the policy reports episodes.
    pub fn episode_count(&self) -> Option<usize> {
        self.steps.last().and_then(|s| s.episode)
    }

    pub fn arms(&self) -> impl Iterator<Item = ArmId> + '_ {
        self.steps.iter().map(|s| s.arm)
    }
}
