//! Executable checks of the mathematics behind the algorithm: the two
//! summation inequalities, the martingale concentration bound, estimator
//! unbiasedness and the concentration events on simulated runs.
//!
//! [`run_suite`] bundles them into the table printed by `armswitch verify`.

mod events;
mod freedman;
mod lemmas;
mod unbiasedness;

use std::fmt::Write as _;

use rand::RngCore;
use rayon::prelude::*;
use serde::Serialize;

pub use events::{event_diagnostics, wide_radius, wide_radius_grid, EventDiagnostics, RadiusGridReport};
pub use freedman::{freedman_bound, freedman_coverage, CoverageReport, MartingaleModel};
pub use lemmas::{
    check_exp_recursion_lemma, check_sumsq_lemma, exp_recursion_sweep, sumsq_sweep, ExpRecursionCheck, SumSqCheck,
    SweepReport,
};
pub use unbiasedness::{default_cases, estimator_unbiasedness, ArmUnbiasedness, EstimatorCheck, UnbiasednessCase};

use crate::armswitch::{ActiveSet, ArmSwitch};
use crate::environments::{NoiseModel, Scenario, ScenarioParams};
use crate::error::Result;
use crate::regret::simulate;
use crate::rng::{replication_streams, stream, uniform_index, unit_f64};
use crate::statistics::{EstimatorTables, ScanMode};
use crate::types::{ArmId, ProblemDims};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExactnessReport {
    pub histories: usize,
    pub comparisons: u64,
    pub mismatches: u64,
}

/// Compare prefix-table interval differences with direct summation on
/// random histories. Rewards lie on a `2^-10` grid so the direct `f64`
/// sums are themselves exact, and equality is required bit for bit.
pub fn prefix_sum_exactness(
    histories: usize,
    max_len: usize,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<ExactnessReport> {
    let mut comparisons = 0u64;
    let mut mismatches = 0u64;
    for _ in 0..histories {
        let k = 2 + uniform_index(rng, 7);
        let len = 1 + uniform_index(rng, max_len);
        let mut tables = EstimatorTables::new(k, len);
        let mut hist = Vec::with_capacity(len);
        for _ in 0..len {
            let arm = uniform_index(rng, k);
            let aux = (unit_f64(rng) < 0.5).then_some(arm);
            let reward = uniform_index(rng, 1025) as f64 / 1024.0;
            let probs = vec![1.0 / k as f64; k];
            tables.record(ArmId::from_index(arm), aux.map(ArmId::from_index), reward, &probs)?;
            hist.push((arm, aux, reward));
        }
        for _ in 0..20 {
            let s = 1 + uniform_index(rng, len);
            let e = s + uniform_index(rng, len - s + 1);
            let ap = uniform_index(rng, k);
            let a = uniform_index(rng, k);
            let direct = |tilde: bool| -> f64 {
                hist[s - 1..e]
                    .iter()
                    .map(|&(arm, aux, r)| {
                        let who = if tilde { aux } else { Some(arm) };
                        if who == Some(ap) && ap != a {
                            r
                        } else if who == Some(a) && ap != a {
                            -r
                        } else {
                            0.0
                        }
                    })
                    .sum()
            };
            let (apid, aid) = (ArmId::from_index(ap), ArmId::from_index(a));
            comparisons += 2;
            mismatches += u64::from(tables.delta_hat(apid, aid, s, e)? != direct(false));
            mismatches += u64::from(tables.delta_tilde_hat(apid, aid, s, e)? != direct(true));
        }
    }
    Ok(ExactnessReport {
        histories,
        comparisons,
        mismatches,
    })
}

/// Event diagnostics over `runs` FIXED-noise runs of ArmSwitch on a
/// three-armed single-swap problem at `delta = 0.05`.
pub fn event_runs(runs: usize, horizon: usize, seed: u64) -> Result<Vec<EventDiagnostics>> {
    let params = ScenarioParams {
        arms: 3,
        horizon,
        gap: 0.4,
        noise: NoiseModel::Fixed,
        ..Default::default()
    };
    let env = Scenario::SingleSwap.build(&params)?;
    let dims = ProblemDims::new(3, horizon, 0.05)?;
    (0..runs as u64)
        .into_par_iter()
        .map(|r| {
            let mut policy = ArmSwitch::new(dims, ScanMode::Full);
            let (mut env_rng, mut pol_rng) = replication_streams(seed, r);
            let trace = simulate(&mut policy, &env, &mut env_rng, &mut pol_rng, true)?;
            event_diagnostics(&trace, &env, &dims)
        })
        .collect()
}

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub observed: String,
    pub required: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub quick: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<4}  {:<width$}  {}  (required: {})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.observed,
                c.required
            );
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Smaller sample sizes, for smoke runs.
    pub quick: bool,
}

fn row(name: &str, passed: bool, observed: String, required: String) -> CheckResult {
    CheckResult {
        name: name.into(),
        passed,
        observed,
        required,
    }
}

/// Run every check. Each check draws from its own stream of `seed`, so the
/// report depends only on the configuration.
pub fn run_suite(cfg: VerifyConfig) -> Result<VerifyReport> {
    let scale = |full: usize, quick: usize| if cfg.quick { quick } else { full };
    let mut checks = Vec::new();

    let lemma_n = scale(100_000, 10_000);
    let r = sumsq_sweep(lemma_n, &mut stream(cfg.seed, 101));
    checks.push(row(
        "sum-sqrt lemma",
        r.violations == 0,
        format!(
            "{} violations in {} instances, min margin {:.3e}",
            r.violations, r.instances, r.min_margin
        ),
        "0 violations".into(),
    ));
    let r = exp_recursion_sweep(lemma_n, &mut stream(cfg.seed, 102));
    checks.push(row(
        "exp-recursion lemma",
        r.violations == 0,
        format!(
            "{} violations in {} instances, min margin {:.3e}",
            r.violations, r.instances, r.min_margin
        ),
        "0 violations".into(),
    ));

    let trials = scale(10_000, 2_000);
    for (i, (n, delta)) in [(1_000usize, 0.05), (10_000, 0.01)].into_iter().enumerate() {
        let n = if cfg.quick { n / 10 } else { n };
        let r = freedman_coverage(
            trials,
            n,
            1.0,
            delta,
            MartingaleModel::RegimeSwitching,
            &mut stream(cfg.seed, 110 + i as u64),
        )?;
        checks.push(row(
            &format!("freedman coverage n={n} B=1 delta={delta}"),
            r.passes(),
            format!("coverage {:.4} over {} trials", r.coverage, r.trials),
            format!(">= {:.4}", r.required),
        ));
    }
    let r = freedman_coverage(
        1_000,
        1_000,
        1.0,
        0.05,
        MartingaleModel::Zero,
        &mut stream(cfg.seed, 119),
    )?;
    checks.push(row(
        "freedman coverage, zero martingale",
        r.coverage == 1.0,
        format!("coverage {:.4}", r.coverage),
        "= 1".into(),
    ));

    let r = prefix_sum_exactness(1_000, 200, &mut stream(cfg.seed, 120))?;
    checks.push(row(
        "prefix sums equal direct sums",
        r.mismatches == 0,
        format!("{} mismatches in {} comparisons", r.mismatches, r.comparisons),
        "0 mismatches".into(),
    ));

    let draws = scale(100_000, 20_000) as u64;
    let mut worst_z = 0.0f64;
    for (i, case) in default_cases().iter().enumerate() {
        let layout = ActiveSet::from_layout(&case.good, &case.explored)?;
        let res = estimator_unbiasedness(&layout, &case.means, draws, &mut stream(cfg.seed, 130 + i as u64))?;
        for arm in res {
            worst_z = worst_z.max(arm.plain.z.abs()).max(arm.auxiliary.z.abs());
        }
    }
    checks.push(row(
        "estimator unbiasedness",
        worst_z <= 4.0,
        format!("max |z| {worst_z:.3} over {} layouts", default_cases().len()),
        "|z| <= 4".into(),
    ));

    let runs = scale(100, 20);
    let diags = event_runs(runs, 1_000, cfg.seed ^ 0x5eed)?;
    let held = diags.iter().filter(|d| d.all_hold()).count();
    let need = runs as f64 * (1.0 - 4.0 * 0.05) - 10.0 * runs as f64 / 100.0;
    checks.push(row(
        "concentration events (delta=0.05)",
        held as f64 >= need,
        format!("all four held in {held}/{runs} runs"),
        format!(">= {need:.0}"),
    ));

    let max_len = scale(100_000, 2_000);
    let r = wide_radius_grid(32, max_len)?;
    checks.push(row(
        "wide radius at most twice the radius",
        r.violations == 0,
        format!(
            "{} violations in {} points, max ratio {:.4}",
            r.violations, r.checked, r.max_ratio
        ),
        "0 violations".into(),
    ));

    Ok(VerifyReport {
        seed: cfg.seed,
        quick: cfg.quick,
        checks,
    })
}
