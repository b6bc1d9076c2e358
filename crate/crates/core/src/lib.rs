//! ArmSwitch for switching multi-armed bandits.
//!
//! The crate provides the ArmSwitch policy, whose regret depends on the
//! number of changes `S` in the identity of the optimal arm rather than on
//! the number of changes `M` in the reward means, together with:
//!
//! * [`environments`]: piecewise-stationary and per-step reward schedules,
//!   the four named scenarios and the environment file format;
//! * [`baselines`]: UCB1, EXP3.S, sliding-window UCB, a uniform player and
//!   the clairvoyant oracle;
//! * [`statistics`]: the importance-weighted estimators, confidence radius
//!   and the elimination test;
//! * [`verification`]: executable checks of the supporting inequalities,
//!   concentration events and estimator unbiasedness;
//! * [`harness`]: replicated experiments, sweeps and the `armswitch` CLI.
//!
//! Arms are 0-indexed; steps are 1-indexed.
//!
//! ```
//! use armswitch::prelude::*;
//!
//! let env = Scenario::SingleSwap
//!     .build(&ScenarioParams { horizon: 500, ..Default::default() })
//!     .unwrap();
//! let dims = ProblemDims::with_default_delta(env.arms(), env.horizon()).unwrap();
//! let mut policy = ArmSwitch::new(dims, ScanMode::Full);
//! let (mut env_rng, mut policy_rng) = replication_streams(7, 0);
//! let trace = simulate(&mut policy, &env, &mut env_rng, &mut policy_rng, false).unwrap();
//! let regret = dynamic_regret(&trace, &env).unwrap();
//! assert!(regret >= 0.0 && regret <= 500.0);
//! ```

pub mod armswitch;
pub mod baselines;
pub mod environments;
pub mod error;
pub mod harness;
pub mod policy;
pub mod regret;
pub mod rng;
pub mod statistics;
pub mod types;
pub mod verification;

pub use error::{Error, Result};

/// The types most programs need.
pub mod prelude {
    pub use crate::armswitch::{ActiveSet, ArmSwitch};
    pub use crate::baselines::{Exp3s, Exp3sParams, Oracle, SlidingWindowUcb, Ucb1, Uniform};
    pub use crate::environments::{EnvironmentSpec, NoiseModel, Scenario, ScenarioParams, Segment};
    pub use crate::error::{Error, Result};
    pub use crate::policy::{Policy, Selection};
    pub use crate::regret::{dynamic_regret, simulate};
    pub use crate::rng::{replication_streams, SimRng};
    pub use crate::statistics::ScanMode;
    pub use crate::types::{ArmId, ProblemDims, RunTrace, StepOutcome};
}
