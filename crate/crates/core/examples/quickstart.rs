//! ArmSwitch against UCB1 and EXP3.S on a single swap of the optimal arm.
//!
//! ```text
//! cargo run --release --example quickstart
//! ```

use armswitch::prelude::*;

fn main() -> Result<()> {
    let n = 20_000;
    let env = Scenario::SingleSwap.build(&ScenarioParams {
        arms: 2,
        horizon: n,
        gap: 0.6,
        ..Default::default()
    })?;
    let dims = ProblemDims::with_default_delta(2, n)?;

    let mut policies: Vec<Box<dyn Policy>> = vec![
        Box::new(ArmSwitch::new(dims, ScanMode::Full)),
        Box::new(Ucb1::new(2, n)?),
        Box::new(Exp3s::new(2, n, Exp3sParams::tuned(2, n, 1))?),
        Box::new(Uniform::new(2, n)?),
    ];
    println!(
        "{} with K=2, N={n}, S={}, M={}",
        env.name(),
        env.switches(),
        env.changes()
    );
    for policy in &mut policies {
        // Same two streams for every policy: identical reward draws.
        let (mut env_rng, mut policy_rng) = replication_streams(1, 0);
        let trace = simulate(policy.as_mut(), &env, &mut env_rng, &mut policy_rng, false)?;
        let episodes = trace
            .episode_count()
            .map(|e| format!(", {e} episode(s)"))
            .unwrap_or_default();
        println!(
            "{:<10} regret {:>9.1}{episodes}",
            policy.name(),
            dynamic_regret(&trace, &env)?
        );
    }
    Ok(())
}
