//! Replicated runs, CSV series and JSON summaries.
//!
//! Output layout under the configured directory:
//!
//! * `<policy>.csv` with columns `rep,n,cum_regret,episode,good_size`. Rows
//!   are kept every `stride` steps plus the final step; `episode` and
//!   `good_size` are blank for policies without episodes.
//! * `summary.json`, described by [`RunSummary`].

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::config::{EnvSource, ExperimentConfig, PolicyKind, PolicySpec};
use super::HarnessError;
use crate::armswitch::ArmSwitch;
use crate::baselines::{default_window, Exp3s, Exp3sParams, Oracle, SlidingWindowUcb, Ucb1, Uniform};
use crate::environments::EnvironmentSpec;
use crate::policy::Policy;
use crate::regret::simulate;
use crate::rng::replication_streams;
use crate::statistics::{ScanMode, ThresholdTable};
use crate::types::ProblemDims;

pub const SUMMARY_SCHEMA: &str = "armswitch-summary/1";

/// Load or build the environment a config points at.
pub fn load_environment(source: &EnvSource) -> Result<EnvironmentSpec, HarnessError> {
    Ok(match source {
        EnvSource::Scenario { scenario, params } => scenario.build(params)?,
        EnvSource::File { path } => {
            let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            EnvironmentSpec::parse_spec_file(&text)?
        }
        EnvSource::Schedule { path, noise } => {
            let text = fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            EnvironmentSpec::from_schedule_csv(&text, *noise)?.with_name(name)
        }
    })
}

/// A policy spec resolved against one environment; cheap to instantiate.
#[derive(Clone)]
enum Prepared {
    ArmSwitch(Arc<ThresholdTable>, ScanMode),
    Ucb1,
    Exp3s(Exp3sParams),
    SwUcb(usize),
    Oracle(Arc<EnvironmentSpec>),
    Uniform,
}

impl Prepared {
    fn new(spec: &PolicySpec, env: &Arc<EnvironmentSpec>, cfg: &ExperimentConfig) -> Result<Self, HarnessError> {
        let (k, n) = (env.arms(), env.horizon());
        let exp3s = |budget: usize| -> Result<Exp3sParams, HarnessError> {
            let mut p = Exp3sParams::tuned(k, n, budget);
            if let Some(g) = spec.param("gamma")? {
                p.gamma = g;
            }
            if let Some(a) = spec.param("alpha")? {
                p.alpha = a;
            }
            p.validate()?;
            Ok(p)
        };
        Ok(match spec.kind {
            PolicyKind::ArmSwitch => {
                let delta = spec.param::<f64>("delta")?.or(cfg.delta).unwrap_or(1.0 / n as f64);
                let scan = spec.param::<ScanMode>("scan")?.unwrap_or(cfg.scan);
                let dims = ProblemDims::new(k, n, delta)?;
                Self::ArmSwitch(Arc::new(ThresholdTable::new(dims)), scan)
            }
            PolicyKind::Ucb1 => Self::Ucb1,
            PolicyKind::Exp3s => Self::Exp3s(exp3s(spec.param("budget")?.unwrap_or(env.switches()))?),
            PolicyKind::Exp3sSwitches => Self::Exp3s(exp3s(env.switches())?),
            PolicyKind::Exp3sChanges => Self::Exp3s(exp3s(env.changes())?),
            PolicyKind::SwUcb => {
                let window = spec.param("window")?.unwrap_or_else(|| default_window(n));
                SlidingWindowUcb::new(k, n, window)?;
                Self::SwUcb(window)
            }
            PolicyKind::Oracle => Self::Oracle(env.clone()),
            PolicyKind::Uniform => Self::Uniform,
        })
    }

    fn instantiate(&self, k: usize, n: usize) -> Box<dyn Policy> {
        match self {
            Self::ArmSwitch(t, scan) => Box::new(ArmSwitch::with_thresholds(t.clone(), *scan)),
            Self::Ucb1 => Box::new(Ucb1::new(k, n).expect("validated dims")),
            Self::Exp3s(p) => Box::new(Exp3s::new(k, n, *p).expect("validated params")),
            Self::SwUcb(w) => Box::new(SlidingWindowUcb::new(k, n, *w).expect("validated window")),
            Self::Oracle(env) => Box::new(Oracle::new(env.clone())),
            Self::Uniform => Box::new(Uniform::new(k, n).expect("validated dims")),
        }
    }
}

/// One replication of one policy.
#[derive(Debug, Clone)]
pub struct ReplicationResult {
    pub final_regret: f64,
    pub episodes: Option<usize>,
    /// `(n, cumulative regret, episode, |GOOD|)` at the kept steps.
    pub series: Vec<(usize, f64, Option<usize>, Option<usize>)>,
}

fn run_replication(
    prepared: &Prepared,
    env: &EnvironmentSpec,
    seed: u64,
    rep: u64,
    stride: usize,
) -> Result<ReplicationResult, HarnessError> {
    let mut policy = prepared.instantiate(env.arms(), env.horizon());
    let (mut env_rng, mut pol_rng) = replication_streams(seed, rep);
    let trace = simulate(policy.as_mut(), env, &mut env_rng, &mut pol_rng, false)?;
    let n = trace.len();
    let mut cum = 0.0;
    let mut series = Vec::with_capacity(n / stride + 1);
    for (i, step) in trace.steps.iter().enumerate() {
        cum += step.regret;
        let t = i + 1;
        if t % stride == 0 || t == n {
            series.push((t, cum, step.episode, step.good_size));
        }
    }
    Ok(ReplicationResult {
        final_regret: cum,
        episodes: policy.episode(),
        series,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantiles {
    pub p05: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
    pub p95: f64,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicySummary {
    pub label: String,
    pub policy: PolicyKind,
    pub mean_regret: f64,
    /// Sample standard deviation (zero for a single replication).
    pub std_regret: f64,
    pub quantiles: Quantiles,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_episodes: Option<f64>,
    pub final_regrets: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub episodes: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_seconds: Option<f64>,
}

impl PolicySummary {
    fn from_results(spec: &PolicySpec, results: &[ReplicationResult], seconds: Option<f64>) -> Self {
        let regrets: Vec<f64> = results.iter().map(|r| r.final_regret).collect();
        let n = regrets.len() as f64;
        let mean = regrets.iter().sum::<f64>() / n;
        let var = if regrets.len() > 1 {
            regrets.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let mut sorted = regrets.clone();
        sorted.sort_by(f64::total_cmp);
        let episodes: Option<Vec<usize>> = results.iter().map(|r| r.episodes).collect();
        Self {
            label: spec.label.clone(),
            policy: spec.kind,
            mean_regret: mean,
            std_regret: var.sqrt(),
            quantiles: Quantiles {
                p05: quantile(&sorted, 0.05),
                p25: quantile(&sorted, 0.25),
                p50: quantile(&sorted, 0.5),
                p75: quantile(&sorted, 0.75),
                p95: quantile(&sorted, 0.95),
            },
            mean_episodes: episodes.as_ref().map(|e| e.iter().sum::<usize>() as f64 / n),
            final_regrets: regrets,
            episodes,
            wall_clock_seconds: seconds,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnvironmentInfo {
    pub name: String,
    pub arms: usize,
    pub horizon: usize,
    pub switches: usize,
    pub changes: usize,
    pub noise: String,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub schema: String,
    pub config: ExperimentConfig,
    pub environment: EnvironmentInfo,
    pub policies: Vec<PolicySummary>,
}

impl RunSummary {
    pub fn policy(&self, label: &str) -> Option<&PolicySummary> {
        self.policies.iter().find(|p| p.label == label)
    }
}

/// Every replication of every policy, without touching the filesystem.
pub fn simulate_experiment(cfg: &ExperimentConfig) -> Result<(RunSummary, Vec<Vec<ReplicationResult>>), HarnessError> {
    cfg.validate()?;
    let env = Arc::new(load_environment(&cfg.env)?);
    let mut summaries = Vec::with_capacity(cfg.policies.len());
    let mut all = Vec::with_capacity(cfg.policies.len());
    for spec in &cfg.policies {
        let prepared = Prepared::new(spec, &env, cfg)?;
        let started = Instant::now();
        let reps = 0..cfg.replications as u64;
        let results: Vec<ReplicationResult> = if cfg.parallel {
            reps.into_par_iter()
                .map(|r| run_replication(&prepared, &env, cfg.seed, r, cfg.stride))
                .collect::<Result<_, _>>()?
        } else {
            reps.map(|r| run_replication(&prepared, &env, cfg.seed, r, cfg.stride))
                .collect::<Result<_, _>>()?
        };
        let seconds = cfg.timing.then(|| started.elapsed().as_secs_f64());
        summaries.push(PolicySummary::from_results(spec, &results, seconds));
        all.push(results);
    }
    let summary = RunSummary {
        schema: SUMMARY_SCHEMA.into(),
        config: cfg.clone(),
        environment: EnvironmentInfo {
            name: env.name().to_string(),
            arms: env.arms(),
            horizon: env.horizon(),
            switches: env.switches(),
            changes: env.changes(),
            noise: env.noise().to_string(),
        },
        policies: summaries,
    };
    Ok((summary, all))
}

fn series_csv(results: &[ReplicationResult]) -> String {
    let mut out = String::from("rep,n,cum_regret,episode,good_size\n");
    let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
    for (rep, r) in results.iter().enumerate() {
        for &(n, cum, ep, good) in &r.series {
            let _ = writeln!(out, "{rep},{n},{cum},{},{}", opt(ep), opt(good));
        }
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<(), HarnessError> {
    fs::write(path, contents).map_err(|e| HarnessError::io(path, e))
}

/// Run the experiment and write the CSV series and `summary.json`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunSummary, HarnessError> {
    let (summary, all) = simulate_experiment(cfg)?;
    let dir = &cfg.output_dir;
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
    for (spec, results) in cfg.policies.iter().zip(&all) {
        write(&dir.join(format!("{}.csv", spec.file_stem())), &series_csv(results))?;
    }
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    write(&dir.join("summary.json"), &(json + "\n"))?;
    Ok(summary)
}
