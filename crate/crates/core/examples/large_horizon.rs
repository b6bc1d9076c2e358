//! A long single-swap run where eliminations and a restart actually happen,
//! comparing the full and geometric interval scans.
//!
//! ```text
//! cargo run --release --example large_horizon
//! ```

use std::time::Instant;

use armswitch::prelude::*;

fn main() -> Result<()> {
    let n = 1_000_000;
    let env = Scenario::SingleSwap.build(&ScenarioParams {
        arms: 2,
        horizon: n,
        gap: 0.8,
        ..Default::default()
    })?;
    let dims = ProblemDims::with_default_delta(2, n)?;
    for scan in [ScanMode::Full, ScanMode::Geometric] {
        let started = Instant::now();
        let mut policy = ArmSwitch::new(dims, scan);
        let (mut e, mut p) = replication_streams(0, 0);
        let trace = simulate(&mut policy, &env, &mut e, &mut p, false)?;
        let regret = dynamic_regret(&trace, &env)?;
        let restarts: Vec<usize> = trace
            .steps
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0].episode != w[1].episode)
            .map(|(i, _)| i + 2)
            .collect();
        println!(
            "{scan:?}: regret {regret:.0}, {} dominance findings, episodes start at {restarts:?}, {:.2}s",
            policy.eliminations(),
            started.elapsed().as_secs_f64()
        );
    }
    let mut ucb = Ucb1::new(2, n)?;
    let (mut e, mut p) = replication_streams(0, 0);
    println!(
        "UCB1 regret {:.0}",
        dynamic_regret(&simulate(&mut ucb, &env, &mut e, &mut p, false)?, &env)?
    );
    Ok(())
}
