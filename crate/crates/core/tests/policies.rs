//! Monte Carlo behaviour of ArmSwitch and the baselines on the named scenarios.

use std::sync::Arc;

use armswitch::policy::Policy;
use armswitch::prelude::*;

fn params(horizon: usize, gap: f64) -> ScenarioParams {
    ScenarioParams {
        arms: 2,
        horizon,
        gap,
        ..Default::default()
    }
}

/// Final regret of `make()` over `reps` seeded replications.
fn regrets(env: &EnvironmentSpec, reps: u64, mut make: impl FnMut() -> Box<dyn Policy>) -> Vec<f64> {
    (0..reps)
        .map(|r| {
            let mut policy = make();
            let (mut e, mut p) = replication_streams(42, r);
            let trace = simulate(policy.as_mut(), env, &mut e, &mut p, false).unwrap();
            dynamic_regret(&trace, env).unwrap()
        })
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

#[test]
fn optimal_arm_survives_a_stationary_run() {
    let env = Scenario::Stationary.build(&params(4000, 0.5)).unwrap();
    let dims = ProblemDims::with_default_delta(2, 4000).unwrap();
    let mut kept = 0;
    for r in 0..100 {
        let mut policy = ArmSwitch::new(dims, ScanMode::Full);
        let (mut e, mut p) = replication_streams(3, r);
        simulate(&mut policy, &env, &mut e, &mut p, false).unwrap();
        kept += usize::from(policy.good_set().iter().any(|a| a.index() == 0));
    }
    assert!(kept >= 95, "optimal arm kept in {kept}/100 runs");
}

#[test]
fn no_switches_means_one_episode() {
    let env = Scenario::PeriodicS
        .build(&ScenarioParams {
            arms: 3,
            horizon: 3000,
            switches: 0,
            ..Default::default()
        })
        .unwrap();
    let dims = ProblemDims::with_default_delta(3, 3000).unwrap();
    let mut single = 0;
    for r in 0..100 {
        let mut policy = ArmSwitch::new(dims, ScanMode::Geometric);
        let (mut e, mut p) = replication_streams(4, r);
        let trace = simulate(&mut policy, &env, &mut e, &mut p, false).unwrap();
        single += usize::from(trace.episode_count() == Some(1));
    }
    assert!(single >= 95, "single episode in {single}/100 runs");
}

#[test]
fn armswitch_never_panics_on_random_schedules() {
    let mut rng = armswitch::rng::stream(5, 0);
    for case in 0..40u64 {
        let k = 2 + armswitch::rng::uniform_index(&mut rng, 6);
        let n = 20 + armswitch::rng::uniform_index(&mut rng, 400);
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|_| (0..k).map(|_| armswitch::rng::unit_f64(&mut rng)).collect())
            .collect();
        let env = EnvironmentSpec::from_schedule(rows, NoiseModel::Bernoulli).unwrap();
        let dims = ProblemDims::new(k, n, 0.5).unwrap();
        for scan in [ScanMode::Full, ScanMode::Geometric] {
            let mut policy = ArmSwitch::new(dims, scan);
            let (mut e, mut p) = replication_streams(case, 0);
            let trace = simulate(&mut policy, &env, &mut e, &mut p, true).unwrap();
            assert_eq!(trace.len(), n);
            assert!(policy.select(&mut p).is_err(), "select past the horizon must fail");
        }
    }
}

#[test]
fn scan_modes_agree_on_a_stationary_run() {
    // Below the first elimination the two scans cannot differ.
    let env = Scenario::Stationary.build(&params(2000, 0.4)).unwrap();
    let dims = ProblemDims::with_default_delta(2, 2000).unwrap();
    let run = |scan| {
        let mut policy = ArmSwitch::new(dims, scan);
        let (mut e, mut p) = replication_streams(9, 0);
        simulate(&mut policy, &env, &mut e, &mut p, false).unwrap()
    };
    assert_eq!(run(ScanMode::Full), run(ScanMode::Geometric));
}

#[test]
fn uniform_policy_regret_is_half_the_horizon() {
    let env = EnvironmentSpec::make_piecewise(2, 10_000, vec![Segment::new(10_000, vec![1.0, 0.0])], NoiseModel::Fixed)
        .unwrap();
    let r = regrets(&env, 1, || Box::new(Uniform::new(2, 10_000).unwrap()))[0];
    // Binomial(10^4, 1/2): 4 sigma is 200.
    assert!((r - 5000.0).abs() <= 200.0, "uniform regret {r}");
}

#[test]
fn ucb1_has_small_stationary_regret() {
    let env = Scenario::Stationary.build(&params(10_000, 0.4)).unwrap();
    let m = mean(&regrets(&env, 50, || Box::new(Ucb1::new(2, 10_000).unwrap())));
    assert!(m < 150.0, "UCB1 mean regret {m}");
}

#[test]
fn ucb1_keeps_paying_after_the_swap() {
    let env = Scenario::SingleSwap.build(&params(10_000, 0.4)).unwrap();
    let (mut half, mut full) = (0.0, 0.0);
    for r in 0..50 {
        let mut policy = Ucb1::new(2, 10_000).unwrap();
        let (mut e, mut p) = replication_streams(42, r);
        let trace = simulate(&mut policy, &env, &mut e, &mut p, false).unwrap();
        half += trace.steps[..5000].iter().map(|s| s.regret).sum::<f64>();
        full += trace.steps.iter().map(|s| s.regret).sum::<f64>();
    }
    assert!(full / half >= 1.5, "regret(N)/regret(N/2) = {}", full / half);
}

#[test]
#[ignore = "UCB1 re-adapts within a few dozen steps on SINGLE_SWAP, so EXP3.S loses this head-to-head"]
fn exp3s_beats_ucb1_after_a_swap() {
    let env = Scenario::SingleSwap.build(&params(10_000, 0.4)).unwrap();
    let ucb = mean(&regrets(&env, 50, || Box::new(Ucb1::new(2, 10_000).unwrap())));
    let exp3s = mean(&regrets(&env, 50, || {
        Box::new(Exp3s::new(2, 10_000, Exp3sParams::tuned(2, 10_000, 1)).unwrap())
    }));
    assert!(exp3s < ucb, "EXP3.S {exp3s} vs UCB1 {ucb}");
}

#[test]
fn full_window_sliding_ucb_matches_ucb1() {
    let env = Scenario::Stationary.build(&params(3000, 0.2)).unwrap();
    for r in 0..5 {
        let run = |policy: &mut dyn Policy| {
            let (mut e, mut p) = replication_streams(11, r);
            simulate(policy, &env, &mut e, &mut p, false).unwrap()
        };
        let a = run(&mut Ucb1::new(2, 3000).unwrap());
        let b = run(&mut SlidingWindowUcb::new(2, 3000, 3000).unwrap());
        assert_eq!(a.steps, b.steps);
    }
}

#[test]
fn sliding_window_ucb_recovers_after_the_swap() {
    let n = 10_000;
    let env = Scenario::SingleSwap.build(&params(n, 0.4)).unwrap();
    let window = armswitch::baselines::default_window(n);
    let mut tail = 0.0;
    let reps = 20;
    for r in 0..reps {
        let mut policy = SlidingWindowUcb::new(2, n, window).unwrap();
        let (mut e, mut p) = replication_streams(42, r);
        let trace = simulate(&mut policy, &env, &mut e, &mut p, false).unwrap();
        tail += trace.steps[3 * n / 4..].iter().map(|s| s.regret).sum::<f64>() / (n / 4) as f64;
    }
    let per_step = tail / reps as f64;
    assert!(per_step <= 0.1, "late per-step regret {per_step}");
}

#[test]
fn oracle_has_zero_regret_everywhere() {
    for scenario in Scenario::ALL {
        let env = Arc::new(
            scenario
                .build(&ScenarioParams {
                    arms: 3,
                    horizon: 900,
                    ..Default::default()
                })
                .unwrap(),
        );
        let shared = Arc::clone(&env);
        let r = regrets(&env, 3, move || Box::new(Oracle::new(Arc::clone(&shared))));
        assert!(r.iter().all(|&x| x == 0.0), "{}: {r:?}", scenario.name());
    }
}

#[test]
fn policies_are_deterministic_per_seed() {
    let env = Arc::new(
        Scenario::PeriodicS
            .build(&ScenarioParams {
                arms: 3,
                horizon: 1500,
                ..Default::default()
            })
            .unwrap(),
    );
    let dims = ProblemDims::with_default_delta(3, 1500).unwrap();
    let makers: Vec<Box<dyn Fn() -> Box<dyn Policy>>> = vec![
        Box::new(move || Box::new(ArmSwitch::new(dims, ScanMode::Full))),
        Box::new(|| Box::new(Ucb1::new(3, 1500).unwrap())),
        Box::new(|| Box::new(Exp3s::new(3, 1500, Exp3sParams::tuned(3, 1500, 3)).unwrap())),
        Box::new(|| Box::new(SlidingWindowUcb::new(3, 1500, 100).unwrap())),
        Box::new(|| Box::new(Uniform::new(3, 1500).unwrap())),
    ];
    for make in &makers {
        let run = || {
            let mut policy = make();
            let (mut e, mut p) = replication_streams(8, 2);
            simulate(policy.as_mut(), &env, &mut e, &mut p, true).unwrap()
        };
        assert_eq!(run(), run());
    }
}
