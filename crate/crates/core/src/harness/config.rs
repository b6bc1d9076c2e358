//! Experiment configuration and its flat `key = value` file format.
//!
//! ```text
//! # comments start with '#'
//! env.scenario = PERIODIC_S      # or env.file = path, env.schedule = path.csv
//! env.arms = 3
//! env.horizon = 5000
//! env.gap = 0.4
//! env.switches = 2
//! env.changes = 50
//! env.noise = bernoulli          # or fixed
//! harness.policies = armswitch, ucb1, exp3s-S, sw-ucb
//! harness.reps = 50
//! harness.seed = 7
//! harness.delta = 0.0002         # ArmSwitch confidence, default 1/N
//! harness.scan = full            # or geometric
//! harness.stride = 10
//! harness.output = out/
//! harness.parallel = true
//! harness.timing = false
//! policy.sw-ucb.window = 300
//! policy.armswitch.scan = geometric
//! ```
//!
//! Policies are written `name[:key=value,...]`. Known names are
//! `armswitch`, `ucb1`, `exp3s`, `exp3s-S`, `exp3s-M`, `sw-ucb`, `oracle`
//! and `uniform`. `exp3s-S` and `exp3s-M` are EXP3.S tuned with the
//! environment's number of optimal-arm switches `S` and of mean changes `M`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::HarnessError;
use crate::environments::{NoiseModel, Scenario, ScenarioParams};
use crate::statistics::ScanMode;

/// Environment variable naming the default output directory.
pub const OUTPUT_DIR_VAR: &str = "ARMSWITCH_OUTPUT_DIR";

/// Policies run when none are given.
pub const DEFAULT_POLICIES: &str = "armswitch,ucb1,exp3s-S,exp3s-M,sw-ucb,oracle";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvSource {
    Scenario {
        scenario: Scenario,
        params: ScenarioParams,
    },
    /// Sectioned environment file.
    File {
        path: PathBuf,
    },
    /// Per-step CSV of means.
    Schedule {
        path: PathBuf,
        noise: NoiseModel,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    ArmSwitch,
    Ucb1,
    Exp3s,
    /// EXP3.S with the budget set to the environment's `S`.
    Exp3sSwitches,
    /// EXP3.S with the budget set to the environment's `M`.
    Exp3sChanges,
    SwUcb,
    Oracle,
    Uniform,
}

impl PolicyKind {
    fn parse(name: &str) -> Option<Self> {
        Some(match name.to_ascii_lowercase().as_str() {
            "armswitch" => Self::ArmSwitch,
            "ucb1" => Self::Ucb1,
            "exp3s" => Self::Exp3s,
            "exp3s-s" => Self::Exp3sSwitches,
            "exp3s-m" => Self::Exp3sChanges,
            "sw-ucb" | "swucb" => Self::SwUcb,
            "oracle" => Self::Oracle,
            "uniform" => Self::Uniform,
            _ => return None,
        })
    }

    pub fn canonical(self) -> &'static str {
        match self {
            Self::ArmSwitch => "armswitch",
            Self::Ucb1 => "ucb1",
            Self::Exp3s => "exp3s",
            Self::Exp3sSwitches => "exp3s-S",
            Self::Exp3sChanges => "exp3s-M",
            Self::SwUcb => "sw-ucb",
            Self::Oracle => "oracle",
            Self::Uniform => "uniform",
        }
    }

    fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            Self::ArmSwitch => &["delta", "scan"],
            Self::Exp3s => &["budget", "gamma", "alpha"],
            Self::Exp3sSwitches | Self::Exp3sChanges => &["gamma", "alpha"],
            Self::SwUcb => &["window"],
            Self::Ucb1 | Self::Oracle | Self::Uniform => &[],
        }
    }
}

/// One policy entry: kind, display label and its parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicySpec {
    pub kind: PolicyKind,
    pub label: String,
    pub params: BTreeMap<String, String>,
}

impl PolicySpec {
    /// Parse `name[:key=value,...]`.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let text = text.trim();
        let (name, rest) = match text.split_once(':') {
            Some((n, r)) => (n.trim(), Some(r)),
            None => (text, None),
        };
        let kind = PolicyKind::parse(name).ok_or_else(|| HarnessError::Config(format!("unknown policy '{name}'")))?;
        let mut spec = Self {
            kind,
            label: kind.canonical().to_string(),
            params: BTreeMap::new(),
        };
        if let Some(rest) = rest {
            for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
                let (k, v) = pair
                    .split_once('=')
                    .ok_or_else(|| HarnessError::Config(format!("policy parameter '{pair}' is not key=value")))?;
                spec.set(k.trim(), v.trim())?;
            }
            spec.label = format!(
                "{}:{}",
                kind.canonical(),
                spec.params
                    .iter()
                    .map(|(k, v)| format!("{k}={v}"))
                    .collect::<Vec<_>>()
                    .join(",")
            );
        }
        Ok(spec)
    }

    fn set(&mut self, key: &str, value: &str) -> Result<(), HarnessError> {
        let key = key.to_ascii_lowercase();
        if !self.kind.allowed_keys().contains(&key.as_str()) {
            return Err(HarnessError::Config(format!(
                "policy {} has no parameter '{key}'",
                self.kind.canonical()
            )));
        }
        self.params.insert(key, value.to_string());
        Ok(())
    }

    pub fn param<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, HarnessError> {
        self.params
            .get(key)
            .map(|v| {
                v.parse()
                    .map_err(|_| HarnessError::Config(format!("policy {}: bad value '{v}' for {key}", self.label)))
            })
            .transpose()
    }

    /// Label usable as a file stem.
    pub fn file_stem(&self) -> String {
        self.label
            .chars()
            .map(|c| {
                if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                    c
                } else {
                    '_'
                }
            })
            .collect()
    }
}

/// Everything that determines an experiment's outputs, plus where to put them.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub env: EnvSource,
    pub policies: Vec<PolicySpec>,
    pub replications: usize,
    pub seed: u64,
    /// ArmSwitch confidence parameter; `None` means `1/N`.
    pub delta: Option<f64>,
    pub scan: ScanMode,
    /// Keep every `stride`-th step in the CSV series (the last step always).
    pub stride: usize,
    #[serde(skip)]
    pub output_dir: PathBuf,
    /// Run replications on the thread pool. Outputs do not depend on it.
    #[serde(skip)]
    pub parallel: bool,
    /// Add wall-clock seconds to the summary. Off by default so that
    /// summaries are reproducible byte for byte.
    #[serde(skip)]
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            env: EnvSource::Scenario {
                scenario: Scenario::Stationary,
                params: ScenarioParams::default(),
            },
            policies: parse_policy_list(DEFAULT_POLICIES).expect("default policy list parses"),
            replications: 10,
            seed: 0,
            delta: None,
            scan: ScanMode::Full,
            stride: 10,
            output_dir: default_output_dir(),
            parallel: true,
            timing: false,
        }
    }
}

/// `$ARMSWITCH_OUTPUT_DIR`, or `armswitch-out` in the working directory.
pub fn default_output_dir() -> PathBuf {
    std::env::var_os(OUTPUT_DIR_VAR)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("armswitch-out"))
}

/// Comma-separated policy specs. Commas inside a parameter list are allowed
/// because a new entry starts only at a known policy name.
pub fn parse_policy_list(text: &str) -> Result<Vec<PolicySpec>, HarnessError> {
    let mut entries: Vec<String> = Vec::new();
    for piece in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let head = piece.split(':').next().unwrap_or("");
        let starts_entry = PolicyKind::parse(head).is_some() && !piece[..head.len()].contains('=');
        match entries.last_mut() {
            Some(last) if !starts_entry => {
                last.push(',');
                last.push_str(piece);
            }
            _ => entries.push(piece.to_string()),
        }
    }
    let specs = entries
        .iter()
        .map(|e| PolicySpec::parse(e))
        .collect::<Result<Vec<_>, _>>()?;
    check_unique(&specs)?;
    Ok(specs)
}

fn check_unique(specs: &[PolicySpec]) -> Result<(), HarnessError> {
    for (i, s) in specs.iter().enumerate() {
        if specs[..i].iter().any(|o| o.label == s.label) {
            return Err(HarnessError::Config(format!("policy '{}' listed twice", s.label)));
        }
    }
    Ok(())
}

fn parse_value<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T, HarnessError> {
    value
        .parse()
        .map_err(|_| HarnessError::Config(format!("line {line}: bad value '{value}' for {key}")))
}

fn parse_bool(line: usize, key: &str, value: &str) -> Result<bool, HarnessError> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(HarnessError::Config(format!(
            "line {line}: bad value '{value}' for {key}"
        ))),
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    /// Parse the flat format; relative file paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, HarnessError> {
        let mut cfg = Self::default();
        let mut params = ScenarioParams::default();
        let mut scenario = Scenario::Stationary;
        let mut file: Option<PathBuf> = None;
        let mut schedule: Option<PathBuf> = None;
        let mut policy_keys: Vec<(usize, String, String, String)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| HarnessError::Config(format!("line {line}: expected key = value")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "env.scenario" => {
                    scenario = value
                        .parse()
                        .map_err(|e| HarnessError::Config(format!("line {line}: {e}")))?
                }
                "env.file" => file = Some(base.join(value)),
                "env.schedule" => schedule = Some(base.join(value)),
                "env.arms" => params.arms = parse_value(line, key, value)?,
                "env.horizon" => params.horizon = parse_value(line, key, value)?,
                "env.gap" => params.gap = parse_value(line, key, value)?,
                "env.switches" => params.switches = parse_value(line, key, value)?,
                "env.changes" => params.changes = parse_value(line, key, value)?,
                "env.noise" => {
                    params.noise = value
                        .parse()
                        .map_err(|e| HarnessError::Config(format!("line {line}: {e}")))?
                }
                "harness.policies" => {
                    cfg.policies =
                        parse_policy_list(value).map_err(|e| HarnessError::Config(format!("line {line}: {e}")))?
                }
                "harness.reps" => cfg.replications = parse_value(line, key, value)?,
                "harness.seed" => cfg.seed = parse_value(line, key, value)?,
                "harness.delta" => cfg.delta = Some(parse_value(line, key, value)?),
                "harness.scan" => cfg.scan = parse_value(line, key, value)?,
                "harness.stride" => cfg.stride = parse_value(line, key, value)?,
                "harness.output" => cfg.output_dir = base.join(value),
                "harness.parallel" => cfg.parallel = parse_bool(line, key, value)?,
                "harness.timing" => cfg.timing = parse_bool(line, key, value)?,
                _ => match key.strip_prefix("policy.").and_then(|r| r.rsplit_once('.')) {
                    Some((label, param)) => {
                        policy_keys.push((line, label.to_string(), param.to_string(), value.to_string()))
                    }
                    None => return Err(HarnessError::Config(format!("line {line}: unknown key '{key}'"))),
                },
            }
        }
        cfg.env = match (file, schedule) {
            (Some(_), Some(_)) => {
                return Err(HarnessError::Config(
                    "env.file and env.schedule are mutually exclusive".into(),
                ))
            }
            (Some(path), None) => EnvSource::File { path },
            (None, Some(path)) => EnvSource::Schedule {
                path,
                noise: params.noise,
            },
            (None, None) => EnvSource::Scenario { scenario, params },
        };
        for (line, label, param, value) in policy_keys {
            let spec = cfg
                .policies
                .iter_mut()
                .find(|s| s.label.eq_ignore_ascii_case(&label) || s.kind.canonical().eq_ignore_ascii_case(&label))
                .ok_or_else(|| HarnessError::Config(format!("line {line}: no policy '{label}' in harness.policies")))?;
            spec.set(&param, &value)
                .map_err(|e| HarnessError::Config(format!("line {line}: {e}")))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.replications == 0 {
            return Err(HarnessError::Config("replications must be at least 1".into()));
        }
        if self.stride == 0 {
            return Err(HarnessError::Config("stride must be at least 1".into()));
        }
        if self.policies.is_empty() {
            return Err(HarnessError::Config("no policies configured".into()));
        }
        if let Some(d) = self.delta {
            if !(d > 0.0 && d < 1.0) {
                return Err(HarnessError::Config(format!("delta must lie in (0, 1), got {d}")));
            }
        }
        check_unique(&self.policies)
    }
}
