//! Repeated experiments along one axis: the horizon `N` or the number of
//! switches `S`.
//!
//! Each point runs [`run_experiment`] into `<output>/<axis>-<value>/`, and
//! `sweep.csv` collects `axis,value,policy,mean_regret,std_regret,mean_episodes`.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::config::{EnvSource, ExperimentConfig};
use super::experiment::{run_experiment, RunSummary};
use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Horizon,
    Switches,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::Horizon => "horizon",
            Self::Switches => "switches",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, HarnessError> {
        match s.to_ascii_lowercase().as_str() {
            "horizon" | "n" => Ok(Self::Horizon),
            "switches" | "s" => Ok(Self::Switches),
            _ => Err(HarnessError::Config(format!(
                "unknown sweep axis '{s}' (expected horizon or switches)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: usize,
    pub policy: String,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub mean_episodes: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub axis: SweepAxis,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("axis,value,policy,mean_regret,std_regret,mean_episodes\n");
        for r in &self.rows {
            let ep = r.mean_episodes.map(|e| e.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.axis.name(),
                r.value,
                r.policy,
                r.mean_regret,
                r.std_regret,
                ep
            );
        }
        out
    }

    /// Mean regret of `policy` at `value`.
    pub fn mean(&self, value: usize, policy: &str) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.value == value && r.policy == policy)
            .map(|r| r.mean_regret)
    }
}

/// The config for one sweep point.
pub fn point_config(base: &ExperimentConfig, axis: SweepAxis, value: usize) -> Result<ExperimentConfig, HarnessError> {
    let mut cfg = base.clone();
    let EnvSource::Scenario { params, .. } = &mut cfg.env else {
        return Err(HarnessError::Config(
            "sweeps need a named scenario, not an environment file".into(),
        ));
    };
    match axis {
        SweepAxis::Horizon => params.horizon = value,
        SweepAxis::Switches => params.switches = value,
    }
    cfg.output_dir = base.output_dir.join(format!("{}-{value}", axis.name()));
    Ok(cfg)
}

/// Run every point and write the combined `sweep.csv`.
pub fn sweep(
    base: &ExperimentConfig,
    axis: SweepAxis,
    values: &[usize],
) -> Result<(SweepTable, Vec<RunSummary>), HarnessError> {
    if values.is_empty() {
        return Err(HarnessError::Config("sweep needs at least one value".into()));
    }
    let mut rows = Vec::new();
    let mut summaries = Vec::with_capacity(values.len());
    for &value in values {
        let summary = run_experiment(&point_config(base, axis, value)?)?;
        for p in &summary.policies {
            rows.push(SweepRow {
                value,
                policy: p.label.clone(),
                mean_regret: p.mean_regret,
                std_regret: p.std_regret,
                mean_episodes: p.mean_episodes,
            });
        }
        summaries.push(summary);
    }
    let table = SweepTable { axis, rows };
    std::fs::create_dir_all(&base.output_dir).map_err(|e| HarnessError::io(&base.output_dir, e))?;
    let path = base.output_dir.join("sweep.csv");
    std::fs::write(&path, table.to_csv()).map_err(|e| HarnessError::io(&path, e))?;
    Ok((table, summaries))
}
