//! Programmatic `run` and `sweep`: writes CSV series and `summary.json`
//! under a temporary directory and prints the sweep table.

use armswitch::environments::{Scenario, ScenarioParams};
use armswitch::harness::{
    parse_policy_list, run_experiment, sweep, EnvSource, ExperimentConfig, HarnessError, SweepAxis,
};

fn main() -> Result<(), HarnessError> {
    let out = std::env::temp_dir().join("armswitch-scaling-sweep");
    let base = ExperimentConfig {
        env: EnvSource::Scenario {
            scenario: Scenario::Stationary,
            params: ScenarioParams {
                arms: 2,
                gap: 0.4,
                ..Default::default()
            },
        },
        policies: parse_policy_list("armswitch,ucb1,sw-ucb,exp3s-S")?,
        replications: 20,
        seed: 1,
        output_dir: out.clone(),
        ..ExperimentConfig::default()
    };
    let (table, _) = sweep(&base, SweepAxis::Horizon, &[1_000, 2_000, 4_000, 8_000])?;
    print!("{}", table.to_csv());
    for policy in ["armswitch", "ucb1"] {
        let ratio = table.mean(8_000, policy).unwrap() / table.mean(2_000, policy).unwrap();
        println!("{policy}: regret(8000)/regret(2000) = {ratio:.2}");
    }

    let periodic = ExperimentConfig {
        env: EnvSource::Scenario {
            scenario: Scenario::PeriodicS,
            params: ScenarioParams {
                arms: 3,
                horizon: 6_000,
                switches: 2,
                ..Default::default()
            },
        },
        output_dir: out.join("periodic"),
        ..base
    };
    let summary = run_experiment(&periodic)?;
    for p in &summary.policies {
        println!(
            "{:<10} mean {:>8.1}  p50 {:>8.1}  p95 {:>8.1}",
            p.label, p.mean_regret, p.quantiles.p50, p.quantiles.p95
        );
    }
    println!("outputs in {}", out.display());
    Ok(())
}
