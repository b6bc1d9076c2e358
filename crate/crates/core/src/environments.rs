//! Oblivious reward environments with piecewise-constant mean schedules.
//!
//! An [`EnvironmentSpec`] fixes the whole mean schedule `g_n(a)` before any
//! interaction. Two counts describe how hard it is:
//!
//! * `S`, the number of steps at which the identity of the optimal arm
//!   changes (lowest index wins ties), and
//! * `M`, the number of steps at which any mean changes.
//!
//! `S <= M` always. The named scenarios let the two vary independently; in
//! particular [`Scenario::ManyMFewS`] changes the suboptimal arms' means many
//! times while the optimal arm never changes.
//!
//! # Spec file grammar
//!
//! ```text
//! # comments run to end of line; blank lines are ignored
//! [environment]
//! arms = 2
//! horizon = 1000
//! noise = bernoulli          # or: fixed
//! name = two-phase           # optional
//! [segments]
//! 500 0.9 0.5                # length, then one mean per arm
//! 500 0.5 0.9
//! ```
//!
//! Segment lengths must sum to the horizon and every mean must lie in
//! `[0, 1]`. Numbers are read with Rust's correctly rounded decimal parser.
//!
//! A general per-step schedule can be loaded from CSV with
//! [`EnvironmentSpec::from_schedule_csv`]: one row per step, one column per
//! arm, optional header row.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::unit_f64;
use crate::types::ArmId;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseModel {
    /// Reward is 1 with probability `g_n(a)`, else 0.
    #[default]
    Bernoulli,
    /// Reward equals `g_n(a)` exactly.
    Fixed,
}

impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bernoulli" => Ok(Self::Bernoulli),
            "fixed" => Ok(Self::Fixed),
            other => Err(Error::Parameter(format!("unknown noise model '{other}'"))),
        }
    }
}

impl std::fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Bernoulli => "bernoulli",
            Self::Fixed => "fixed",
        })
    }
}

/// A run of consecutive steps sharing one mean vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub length: usize,
    pub means: Vec<f64>,
}

impl Segment {
    pub fn new(length: usize, means: Vec<f64>) -> Self {
        Self { length, means }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvironmentSpec {
    name: String,
    arms: usize,
    horizon: usize,
    noise: NoiseModel,
    segments: Vec<Segment>,
    // 1-based first step of each segment
    starts: Vec<usize>,
    optimal: Vec<usize>,
    switches: usize,
    changes: usize,
}

/// Lowest-index argmax.
pub fn argmax_lowest(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl EnvironmentSpec {
    /// Build a spec from consecutive segments. Adjacent segments with equal
    /// means are merged, so `M` counts genuine changes only.
    pub fn make_piecewise(arms: usize, horizon: usize, segments: Vec<Segment>, noise: NoiseModel) -> Result<Self> {
        if arms < 2 {
            return Err(Error::InvalidDims(format!("need at least 2 arms, got {arms}")));
        }
        if horizon < 2 {
            return Err(Error::InvalidDims(format!("horizon must be at least 2, got {horizon}")));
        }
        let total: usize = segments.iter().map(|s| s.length).sum();
        if total != horizon {
            return Err(Error::Dimension(format!(
                "segment lengths sum to {total}, horizon is {horizon}"
            )));
        }
        let mut merged: Vec<Segment> = Vec::with_capacity(segments.len());
        for (i, seg) in segments.into_iter().enumerate() {
            if seg.means.len() != arms {
                return Err(Error::Dimension(format!(
                    "segment {i} has {} means, expected {arms}",
                    seg.means.len()
                )));
            }
            if let Some(&m) = seg.means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                return Err(Error::Range(format!("segment {i} mean {m} outside [0, 1]")));
            }
            if seg.length == 0 {
                continue;
            }
            match merged.last_mut() {
                Some(prev) if prev.means == seg.means => prev.length += seg.length,
                _ => merged.push(seg),
            }
        }
        let mut starts = Vec::with_capacity(merged.len());
        let mut next = 1;
        for seg in &merged {
            starts.push(next);
            next += seg.length;
        }
        let optimal: Vec<usize> = merged.iter().map(|s| argmax_lowest(&s.means)).collect();
        let switches = optimal.windows(2).filter(|w| w[0] != w[1]).count();
        let changes = merged.len() - 1;
        Ok(Self {
            name: "custom".into(),
            arms,
            horizon,
            noise,
            segments: merged,
            starts,
            optimal,
            switches,
            changes,
        })
    }

    /// General per-step schedule: `rows[n - 1]` holds the means at step `n`.
    pub fn from_schedule(rows: Vec<Vec<f64>>, noise: NoiseModel) -> Result<Self> {
        let arms = rows.first().map_or(0, Vec::len);
        let horizon = rows.len();
        let segments = rows.into_iter().map(|means| Segment::new(1, means)).collect();
        Self::make_piecewise(arms, horizon, segments, noise)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arms(&self) -> usize {
        self.arms
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn noise(&self) -> NoiseModel {
        self.noise
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `S`: optimal-arm identity changes.
    pub fn switches(&self) -> usize {
        self.switches
    }

    /// `M`: distribution changes.
    pub fn changes(&self) -> usize {
        self.changes
    }

    /// Steps at which a new mean vector takes effect.
    pub fn change_points(&self) -> &[usize] {
        &self.starts[1..]
    }

    fn segment_index(&self, n: usize) -> usize {
        debug_assert!((1..=self.horizon).contains(&n), "step {n} outside horizon");
        self.starts.partition_point(|&s| s <= n) - 1
    }

    /// Mean vector `g_n` for a step `n` in `1..=N`.
    pub fn means_at(&self, n: usize) -> &[f64] {
        &self.segments[self.segment_index(n)].means
    }

    pub fn mean(&self, n: usize, arm: ArmId) -> f64 {
        self.means_at(n)[arm.index()]
    }

    pub fn optimal_arm(&self, n: usize) -> ArmId {
        ArmId::from_index(self.optimal[self.segment_index(n)])
    }

    pub fn optimal_mean(&self, n: usize) -> f64 {
        let i = self.segment_index(n);
        self.segments[i].means[self.optimal[i]]
    }

    /// `max_a g_n(a) - g_n(arm)`.
    pub fn instantaneous_regret(&self, n: usize, arm: ArmId) -> f64 {
        let i = self.segment_index(n);
        let means = &self.segments[i].means;
        means[self.optimal[i]] - means[arm.index()]
    }

    /// Recount `S` step by step from the schedule.
    pub fn optimal_switch_count(&self) -> usize {
        let mut count = 0;
        let mut prev = argmax_lowest(self.means_at(1));
        for n in 2..=self.horizon {
            let cur = argmax_lowest(self.means_at(n));
            if cur != prev {
                count += 1;
            }
            prev = cur;
        }
        count
    }

    /// Draw a reward for `arm` at step `n`. Bernoulli rewards consume one
    /// uniform draw; fixed rewards consume none.
    pub fn sample_reward(&self, n: usize, arm: ArmId, rng: &mut (impl RngCore + ?Sized)) -> f64 {
        let mean = self.mean(n, arm);
        match self.noise {
            NoiseModel::Bernoulli => {
                if unit_f64(rng) < mean {
                    1.0
                } else {
                    0.0
                }
            }
            NoiseModel::Fixed => mean,
        }
    }

    /// Parse the sectioned spec-file format described in the module docs.
    pub fn parse_spec_file(text: &str) -> Result<Self> {
        let mut section = "";
        let mut arms = None;
        let mut horizon = None;
        let mut noise = NoiseModel::Bernoulli;
        let mut name = None;
        let mut segments = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line.starts_with('[') {
                section = match line {
                    "[environment]" => "environment",
                    "[segments]" => "segments",
                    other => return Err(err(format!("unknown section {other}"))),
                };
                continue;
            }
            match section {
                "environment" => {
                    let (key, value) = line
                        .split_once('=')
                        .ok_or_else(|| err(format!("expected key = value, got '{line}'")))?;
                    let value = value.trim();
                    match key.trim() {
                        "arms" => arms = Some(value.parse::<usize>().map_err(|e| err(format!("arms: {e}")))?),
                        "horizon" => horizon = Some(value.parse::<usize>().map_err(|e| err(format!("horizon: {e}")))?),
                        "noise" => noise = value.parse().map_err(|e: Error| err(e.to_string()))?,
                        "name" => name = Some(value.to_string()),
                        other => return Err(err(format!("unknown key '{other}'"))),
                    }
                }
                "segments" => {
                    let mut fields = line.split_whitespace();
                    let length = fields
                        .next()
                        .unwrap_or("")
                        .parse::<usize>()
                        .map_err(|e| err(format!("segment length: {e}")))?;
                    let means = fields
                        .map(|f| f.parse::<f64>().map_err(|e| err(format!("mean '{f}': {e}"))))
                        .collect::<Result<Vec<_>>>()?;
                    segments.push(Segment::new(length, means));
                }
                _ => return Err(err("content before any section header".into())),
            }
        }
        let arms = arms.ok_or(Error::Parse {
            line: 0,
            message: "missing 'arms'".into(),
        })?;
        let horizon = horizon.ok_or(Error::Parse {
            line: 0,
            message: "missing 'horizon'".into(),
        })?;
        let spec = Self::make_piecewise(arms, horizon, segments, noise)?;
        Ok(match name {
            Some(n) => spec.with_name(n),
            None => spec,
        })
    }

    /// Render in the spec-file format; `parse_spec_file` reads it back.
    pub fn to_spec_file(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "[environment]");
        let _ = writeln!(out, "arms = {}", self.arms);
        let _ = writeln!(out, "horizon = {}", self.horizon);
        let _ = writeln!(out, "noise = {}", self.noise);
        let _ = writeln!(out, "name = {}", self.name);
        let _ = writeln!(out, "[segments]");
        for seg in &self.segments {
            let _ = write!(out, "{}", seg.length);
            for m in &seg.means {
                let _ = write!(out, " {m:?}");
            }
            out.push('\n');
        }
        out
    }

    /// Per-step CSV schedule: one row of `K` means per step.
    pub fn from_schedule_csv(text: &str, noise: NoiseModel) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> = line.split(',').map(|f| f.trim().parse::<f64>()).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if rows.is_empty() && i == 0 => continue, // header
                Err(e) => {
                    return Err(Error::Parse {
                        line: i + 1,
                        message: e.to_string(),
                    })
                }
            }
        }
        if let Some(bad) = rows.iter().position(|r| r.len() != rows[0].len()) {
            return Err(Error::Dimension(format!(
                "schedule row {} has a different arm count",
                bad + 1
            )));
        }
        Self::from_schedule(rows, noise)
    }
}

/// The built-in named scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// Arm 0 optimal throughout.
    #[serde(rename = "STATIONARY")]
    Stationary,
    /// Arms 0 and 1 swap roles at `N/2`.
    #[serde(rename = "SINGLE_SWAP")]
    SingleSwap,
    /// Arm 0 fixed at 0.9 while every other arm alternates 0.1 / 0.3, `M` times.
    #[serde(rename = "MANY_M_FEW_S")]
    ManyMFewS,
    /// `S + 1` equal segments; in segment `j` arm `j mod K` is optimal.
    #[serde(rename = "PERIODIC_S")]
    PeriodicS,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::Stationary,
        Scenario::SingleSwap,
        Scenario::ManyMFewS,
        Scenario::PeriodicS,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Stationary => "STATIONARY",
            Self::SingleSwap => "SINGLE_SWAP",
            Self::ManyMFewS => "MANY_M_FEW_S",
            Self::PeriodicS => "PERIODIC_S",
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            Self::Stationary => "arm 0 at 0.9, others at 0.9-gap, no changes (S=0, M=0)",
            Self::SingleSwap => "arms 0 and 1 swap at N/2 (S=1, M=1)",
            Self::ManyMFewS => "arm 0 fixed at 0.9, others alternate 0.1/0.3 (S=0, M=changes)",
            Self::PeriodicS => "S+1 equal segments, optimum rotates j mod K (S=switches)",
        }
    }

    pub fn build(self, params: &ScenarioParams) -> Result<EnvironmentSpec> {
        let ScenarioParams {
            arms,
            horizon,
            gap,
            switches,
            changes,
            noise,
        } = *params;
        if arms < 2 {
            return Err(Error::InvalidDims(format!("need at least 2 arms, got {arms}")));
        }
        let best = 0.9;
        if matches!(self, Self::Stationary | Self::SingleSwap | Self::PeriodicS) && !(gap > 0.0 && gap <= best) {
            return Err(Error::Parameter(format!("gap must lie in (0, {best}], got {gap}")));
        }
        let other = best - gap;
        let with_best = |opt: usize| -> Vec<f64> { (0..arms).map(|a| if a == opt { best } else { other }).collect() };
        let equal_split = |pieces: usize| -> Result<Vec<usize>> {
            if horizon < pieces {
                return Err(Error::Parameter(format!(
                    "horizon {horizon} too short for {pieces} segments"
                )));
            }
            Ok((0..pieces)
                .map(|j| (j + 1) * horizon / pieces - j * horizon / pieces)
                .collect())
        };
        let segments = match self {
            Self::Stationary => vec![Segment::new(horizon, with_best(0))],
            Self::SingleSwap => {
                let first = horizon / 2;
                vec![
                    Segment::new(first, with_best(0)),
                    Segment::new(horizon - first, with_best(1)),
                ]
            }
            Self::ManyMFewS => equal_split(changes + 1)?
                .into_iter()
                .enumerate()
                .map(|(j, len)| {
                    let low = if j % 2 == 0 { 0.1 } else { 0.3 };
                    let means = (0..arms).map(|a| if a == 0 { best } else { low }).collect();
                    Segment::new(len, means)
                })
                .collect(),
            Self::PeriodicS => equal_split(switches + 1)?
                .into_iter()
                .enumerate()
                .map(|(j, len)| Segment::new(len, with_best(j % arms)))
                .collect(),
        };
        Ok(EnvironmentSpec::make_piecewise(arms, horizon, segments, noise)?.with_name(self.name()))
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|sc| sc.name() == norm)
            .ok_or_else(|| Error::Parameter(format!("unknown scenario '{s}'")))
    }
}

/// Knobs shared by the named scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    pub arms: usize,
    pub horizon: usize,
    /// Gap between the optimal arm (0.9) and the others.
    pub gap: f64,
    /// `S` for `PERIODIC_S`.
    pub switches: usize,
    /// `M` for `MANY_M_FEW_S`.
    pub changes: usize,
    pub noise: NoiseModel,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        Self {
            arms: 2,
            horizon: 10_000,
            gap: 0.4,
            switches: 3,
            changes: 50,
            noise: NoiseModel::Bernoulli,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn two(len: usize, a: f64, b: f64) -> Segment {
        Segment::new(len, vec![a, b])
    }

    #[test]
    fn stationary_has_no_changes() {
        let env = EnvironmentSpec::make_piecewise(2, 100, vec![two(100, 0.9, 0.5)], NoiseModel::Bernoulli).unwrap();
        assert_eq!((env.switches(), env.changes()), (0, 0));
        assert!(env.change_points().is_empty());
    }

    #[test]
    fn single_swap_counts() {
        let env = EnvironmentSpec::make_piecewise(
            2,
            100,
            vec![two(50, 0.9, 0.5), two(50, 0.5, 0.9)],
            NoiseModel::Bernoulli,
        )
        .unwrap();
        assert_eq!((env.switches(), env.changes()), (1, 1));
        assert_eq!(env.change_points(), &[51]);
        assert_eq!(env.optimal_arm(50).index(), 0);
        assert_eq!(env.optimal_arm(51).index(), 1);
    }

    #[test]
    fn suboptimal_oscillation_leaves_s_at_zero() {
        let segs = (0..51)
            .map(|j| two(10, 0.9, if j % 2 == 0 { 0.1 } else { 0.3 }))
            .collect();
        let env = EnvironmentSpec::make_piecewise(2, 510, segs, NoiseModel::Bernoulli).unwrap();
        assert_eq!((env.switches(), env.changes()), (0, 50));
    }

    #[test]
    fn alternating_optimum_every_step() {
        let env = EnvironmentSpec::from_schedule(
            vec![vec![0.9, 0.1], vec![0.1, 0.9], vec![0.9, 0.1], vec![0.1, 0.9]],
            NoiseModel::Fixed,
        )
        .unwrap();
        assert_eq!(env.optimal_switch_count(), 3);
        assert_eq!(env.switches(), 3);
    }

    #[test]
    fn exact_tie_prefers_lowest_index() {
        let env = EnvironmentSpec::make_piecewise(2, 10, vec![two(10, 0.5, 0.5)], NoiseModel::Fixed).unwrap();
        assert_eq!(env.optimal_switch_count(), 0);
        assert!((1..=10).all(|n| env.optimal_arm(n).index() == 0));
    }

    #[test]
    fn construction_errors() {
        let nt = NoiseModel::Fixed;
        assert!(matches!(
            EnvironmentSpec::make_piecewise(2, 100, vec![two(60, 0.9, 0.5)], nt),
            Err(Error::Dimension(_))
        ));
        assert!(matches!(
            EnvironmentSpec::make_piecewise(2, 10, vec![two(10, 1.2, 0.5)], nt),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            EnvironmentSpec::make_piecewise(2, 10, vec![Segment::new(10, vec![0.5])], nt),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn reward_extremes() {
        let env = EnvironmentSpec::make_piecewise(2, 10, vec![two(10, 0.0, 1.0)], NoiseModel::Bernoulli).unwrap();
        let mut rng = stream(3, 0);
        for _ in 0..1000 {
            assert_eq!(env.sample_reward(1, ArmId::from_index(0), &mut rng), 0.0);
            assert_eq!(env.sample_reward(1, ArmId::from_index(1), &mut rng), 1.0);
        }
    }

    #[test]
    fn bernoulli_mean_matches() {
        let env = EnvironmentSpec::make_piecewise(2, 10, vec![two(10, 0.3, 0.5)], NoiseModel::Bernoulli).unwrap();
        let mut rng = stream(11, 0);
        let draws = 100_000;
        let mean: f64 = (0..draws)
            .map(|_| env.sample_reward(3, ArmId::from_index(0), &mut rng))
            .sum::<f64>()
            / draws as f64;
        let se = (0.21f64 / draws as f64).sqrt();
        assert!((mean - 0.3).abs() <= 4.0 * se, "mean {mean}");
    }

    #[test]
    fn fixed_noise_returns_mean() {
        let env = EnvironmentSpec::make_piecewise(2, 10, vec![two(10, 0.37, 0.5)], NoiseModel::Fixed).unwrap();
        let mut rng = stream(1, 0);
        assert_eq!(env.sample_reward(4, ArmId::from_index(0), &mut rng), 0.37);
    }

    #[test]
    fn scenarios_have_advertised_counts() {
        let p = ScenarioParams {
            horizon: 5000,
            arms: 3,
            switches: 2,
            ..Default::default()
        };
        let env = Scenario::PeriodicS.build(&p).unwrap();
        assert_eq!((env.switches(), env.changes()), (2, 2));
        let env = Scenario::ManyMFewS
            .build(&ScenarioParams {
                horizon: 10_000,
                ..Default::default()
            })
            .unwrap();
        assert_eq!((env.switches(), env.changes()), (0, 50));
        let env = Scenario::SingleSwap.build(&ScenarioParams::default()).unwrap();
        assert_eq!(env.change_points(), &[5001]);
        let env = Scenario::Stationary.build(&ScenarioParams::default()).unwrap();
        assert_eq!(env.means_at(1), &[0.9, 0.9 - 0.4]);
    }

    #[test]
    fn spec_file_round_trip() {
        let text = "\
# two phases
[environment]
arms = 2
horizon = 100
noise = fixed
name = demo
[segments]
40 0.9 0.5   # first
60 0.5 0.9
";
        let env = EnvironmentSpec::parse_spec_file(text).unwrap();
        assert_eq!(env.name(), "demo");
        assert_eq!(env.noise(), NoiseModel::Fixed);
        assert_eq!(env.switches(), 1);
        let again = EnvironmentSpec::parse_spec_file(&env.to_spec_file()).unwrap();
        assert_eq!(again, env);
    }

    #[test]
    fn spec_file_errors_carry_lines() {
        let err = EnvironmentSpec::parse_spec_file("[environment]\narms = x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = EnvironmentSpec::parse_spec_file("[oops]\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn schedule_csv_with_header() {
        let env = EnvironmentSpec::from_schedule_csv("a,b\n0.9,0.1\n0.9,0.1\n0.1,0.9\n", NoiseModel::Fixed).unwrap();
        assert_eq!(env.horizon(), 3);
        assert_eq!((env.switches(), env.changes()), (1, 1));
    }
}
