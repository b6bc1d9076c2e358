//! Dynamic (pseudo-)regret and the basic simulation loop.

use rand::RngCore;

use crate::environments::EnvironmentSpec;
use crate::error::{Error, Result};
use crate::policy::Policy;
use crate::types::{RunTrace, StepOutcome, TraceStep};

/// `sum_n (max_a g_n(a) - g_n(A_n))` over the trace, using true means only.
pub fn dynamic_regret(trace: &RunTrace, env: &EnvironmentSpec) -> Result<f64> {
    if trace.len() != env.horizon() {
        return Err(Error::Dimension(format!(
            "trace has {} steps, environment horizon is {}",
            trace.len(),
            env.horizon()
        )));
    }
    Ok(trace
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| env.instantaneous_regret(i + 1, s.arm))
        .sum())
}

/// Run `policy` against `env` for the full horizon.
///
/// Rewards are drawn from `env_rng`, policy randomness from `policy_rng`.
/// With `record_distributions` the per-step sampling distributions are kept
/// in the trace.
pub fn simulate(
    policy: &mut dyn Policy,
    env: &EnvironmentSpec,
    env_rng: &mut dyn RngCore,
    policy_rng: &mut dyn RngCore,
    record_distributions: bool,
) -> Result<RunTrace> {
    if policy.arms() != env.arms() || policy.horizon() != env.horizon() {
        return Err(Error::Dimension(format!(
            "policy is K={} N={}, environment is K={} N={}",
            policy.arms(),
            policy.horizon(),
            env.arms(),
            env.horizon()
        )));
    }
    let horizon = env.horizon();
    let mut steps = Vec::with_capacity(horizon);
    let mut distributions = record_distributions.then(|| Vec::with_capacity(horizon));
    for n in 1..=horizon {
        let episode = policy.episode();
        let good_size = policy.good_size();
        let sel = policy.select(policy_rng)?;
        let reward = env.sample_reward(n, sel.arm, env_rng);
        policy.update(&StepOutcome {
            arm: sel.arm,
            reward,
            aux: sel.aux,
        })?;
        steps.push(TraceStep {
            arm: sel.arm,
            aux: sel.aux,
            reward,
            episode,
            good_size,
            regret: env.instantaneous_regret(n, sel.arm),
        });
        if let Some(d) = distributions.as_mut() {
            d.push(sel.distribution);
        }
    }
    Ok(RunTrace { steps, distributions })
}
