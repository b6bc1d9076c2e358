//! Command-line front end: `run`, `sweep`, `verify` and `list-envs`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage error,
//! 3 configuration error, 4 I/O error, 5 simulation error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use super::config::{parse_policy_list, EnvSource, ExperimentConfig};
use super::experiment::run_experiment;
use super::sweep::{sweep, SweepAxis};
use super::HarnessError;
use crate::environments::{NoiseModel, Scenario};
use crate::statistics::ScanMode;
use crate::verification::{run_suite, VerifyConfig};

#[derive(Debug, Parser)]
#[command(name = "armswitch", version, about = "ArmSwitch bandit experiments and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every configured policy on one environment.
    Run(RunArgs),
    /// Repeat `run` along the horizon or the number of switches.
    Sweep(SweepArgs),
    /// Run the verification checks and print a pass/fail table.
    Verify(VerifyArgs),
    /// List the named scenarios.
    ListEnvs,
}

/// Flags shared by `run` and `sweep`; each overrides the config file.
#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Flat key=value config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Scenario name, environment file, or per-step CSV schedule (*.csv).
    #[arg(long)]
    pub env: Option<String>,
    /// Number of arms K.
    #[arg(long)]
    pub arms: Option<usize>,
    /// Horizon N.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Gap between the best arm (0.9) and the others.
    #[arg(long)]
    pub gap: Option<f64>,
    /// Optimal-arm switches S for PERIODIC_S.
    #[arg(long)]
    pub switches: Option<usize>,
    /// Mean changes M for MANY_M_FEW_S.
    #[arg(long)]
    pub changes: Option<usize>,
    /// Reward noise: bernoulli or fixed.
    #[arg(long)]
    pub noise: Option<NoiseModel>,
    /// Policy spec `name[:key=value,...]`; repeat or comma-separate.
    #[arg(long = "policy")]
    pub policies: Vec<String>,
    /// Replications per policy.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Base seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// ArmSwitch confidence parameter (default 1/N).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Interval scan for ArmSwitch eliminations: full or geometric.
    #[arg(long)]
    pub scan: Option<ScanMode>,
    /// Keep every k-th step in the CSV series.
    #[arg(long)]
    pub stride: Option<usize>,
    /// Output directory (default: $ARMSWITCH_OUTPUT_DIR or ./armswitch-out).
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Run replications on one thread. Outputs are identical either way.
    #[arg(long)]
    pub sequential: bool,
    /// Record wall-clock seconds in the summary (makes it non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub common: ExperimentArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: ExperimentArgs,
    /// Axis to sweep: horizon or switches.
    #[arg(long)]
    pub axis: SweepAxis,
    /// Comma-separated axis values.
    #[arg(long, value_delimiter = ',', required = true)]
    pub values: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Smaller sample sizes.
    #[arg(long)]
    pub quick: bool,
    /// Base seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report as JSON into this directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

impl ExperimentArgs {
    /// Config file (if any) with flag overrides applied.
    pub fn resolve(&self) -> Result<ExperimentConfig, HarnessError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(env) = &self.env {
            cfg.env = match env.parse::<Scenario>() {
                Ok(scenario) => {
                    let params = match &cfg.env {
                        EnvSource::Scenario { params, .. } => *params,
                        _ => Default::default(),
                    };
                    EnvSource::Scenario { scenario, params }
                }
                Err(_) => {
                    let path = PathBuf::from(env);
                    if !path.exists() {
                        return Err(HarnessError::Config(format!(
                            "'{env}' is neither a scenario name nor an existing file"
                        )));
                    }
                    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
                        EnvSource::Schedule {
                            path,
                            noise: self.noise.unwrap_or_default(),
                        }
                    } else {
                        EnvSource::File { path }
                    }
                }
            };
        }
        let scenario_flags = self.arms.is_some()
            || self.horizon.is_some()
            || self.gap.is_some()
            || self.switches.is_some()
            || self.changes.is_some();
        match &mut cfg.env {
            EnvSource::Scenario { params, .. } => {
                if let Some(v) = self.arms {
                    params.arms = v;
                }
                if let Some(v) = self.horizon {
                    params.horizon = v;
                }
                if let Some(v) = self.gap {
                    params.gap = v;
                }
                if let Some(v) = self.switches {
                    params.switches = v;
                }
                if let Some(v) = self.changes {
                    params.changes = v;
                }
                if let Some(v) = self.noise {
                    params.noise = v;
                }
            }
            EnvSource::Schedule { noise, .. } => {
                if let Some(v) = self.noise {
                    *noise = v;
                }
            }
            EnvSource::File { .. } => {}
        }
        if scenario_flags && !matches!(cfg.env, EnvSource::Scenario { .. }) {
            return Err(HarnessError::Config(
                "--arms/--horizon/--gap/--switches/--changes need a named scenario".into(),
            ));
        }
        if !self.policies.is_empty() {
            cfg.policies = parse_policy_list(&self.policies.join(","))?;
        }
        if let Some(v) = self.reps {
            cfg.replications = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if self.delta.is_some() {
            cfg.delta = self.delta;
        }
        if let Some(v) = self.scan {
            cfg.scan = v;
        }
        if let Some(v) = self.stride {
            cfg.stride = v;
        }
        if let Some(v) = &self.output {
            cfg.output_dir = v.clone();
        }
        if self.sequential {
            cfg.parallel = false;
        }
        if self.timing {
            cfg.timing = true;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn list_envs(out: &mut impl Write) -> std::io::Result<()> {
    for s in Scenario::ALL {
        writeln!(out, "{:<14} {}", s.name(), s.describe())?;
    }
    Ok(())
}

fn execute(cli: Cli, out: &mut impl Write) -> Result<i32, HarnessError> {
    let stdout_err = |e: std::io::Error| HarnessError::io(std::path::Path::new("<stdout>"), e);
    match cli.command {
        Command::ListEnvs => {
            list_envs(out).map_err(stdout_err)?;
            Ok(0)
        }
        Command::Run(args) => {
            let cfg = args.common.resolve()?;
            let summary = run_experiment(&cfg)?;
            for p in &summary.policies {
                let ep = p
                    .mean_episodes
                    .map(|e| format!("  episodes {e:.2}"))
                    .unwrap_or_default();
                writeln!(
                    out,
                    "{:<24} mean regret {:>12.3}  std {:>10.3}{ep}",
                    p.label, p.mean_regret, p.std_regret
                )
                .map_err(stdout_err)?;
            }
            writeln!(out, "wrote {}", cfg.output_dir.display()).map_err(stdout_err)?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let cfg = args.common.resolve()?;
            let (table, _) = sweep(&cfg, args.axis, &args.values)?;
            out.write_all(table.to_csv().as_bytes()).map_err(stdout_err)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let report = run_suite(VerifyConfig {
                seed: args.seed,
                quick: args.quick,
            })?;
            out.write_all(report.table().as_bytes()).map_err(stdout_err)?;
            if let Some(dir) = args.output {
                std::fs::create_dir_all(&dir).map_err(|e| HarnessError::io(&dir, e))?;
                let path = dir.join("verify.json");
                let json = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
                std::fs::write(&path, json).map_err(|e| HarnessError::io(&path, e))?;
            }
            Ok(if report.all_passed() { 0 } else { 1 })
        }
    }
}

/// Parse `args` (program name first), run, and return the exit code.
/// Diagnostics go to stderr as a single line.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(cli, &mut lock) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("armswitch: {e}");
            e.exit_code()
        }
    }
}
