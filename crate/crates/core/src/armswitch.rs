//! The ArmSwitch policy: episodes, randomized exploration obligations and
//! pairwise elimination.
//!
//! Each episode starts with every arm GOOD. GOOD arms share the mass that
//! active BAD arms leave behind; BAD arms are replayed at rate `1/K` for a
//! while whenever an exploration obligation is scheduled for them. After
//! every step all pairs of active arms are tested with [`is_better`]; arms
//! that lose move to BAD, and when no GOOD arm is left a new episode begins.
//!
//! Obligations are stored as integers in units of `1/K`. Every prescribed
//! value is `K * 4^j` units and every decrement is one unit, so the
//! "positive obligation" and "obligation exhausted" tests are exact.
//!
//! Eliminations within one step are computed against a snapshot of the
//! state taken before the pass and applied together, so the outcome does not
//! depend on the order in which pairs are visited.

use std::fmt::Write as _;
use std::sync::Arc;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::policy::{check_horizon, check_outcome, Policy, Selection};
use crate::rng::{uniform_index, unit_f64};
use crate::statistics::{is_better, EstimatorTables, PairMarkers, ScanMode, ThresholdTable};
use crate::types::{ArmId, ProblemDims, StepOutcome};

/// Exploration rates `2^-1, 2^-2, ..., 2^-J` with `J = ceil(log2 N)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EpsilonGrid {
    depth: u32,
}

impl EpsilonGrid {
    pub fn new(horizon: usize) -> Self {
        // ceil(log2 N) for N >= 2
        let depth = usize::BITS - (horizon.max(2) - 1).leading_zeros();
        Self { depth }
    }

    /// Number of grid points `J`.
    pub fn len(&self) -> usize {
        self.depth as usize
    }

    pub fn is_empty(&self) -> bool {
        self.depth == 0
    }

    /// Grid values, largest first.
    pub fn values(&self) -> Vec<f64> {
        (1..=self.depth).map(|j| 0.5f64.powi(j as i32)).collect()
    }

    /// Obligation `1/eps^2` for `eps = 2^-j`, in units of `1/K`.
    pub fn obligation_units(&self, j: u32, arms: usize) -> u128 {
        (arms as u128) << (2 * j)
    }
}

/// The active set and sampling distribution of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSet {
    active: Vec<bool>,
    good: Vec<bool>,
    probabilities: Vec<f64>,
    bad_active: usize,
    good_count: usize,
}

impl ActiveSet {
    fn build(good: &[bool], obligations: &[u128]) -> Self {
        let k = good.len();
        let active: Vec<bool> = good.iter().zip(obligations).map(|(&g, &u)| g || u >= 1).collect();
        let good_count = good.iter().filter(|&&g| g).count();
        let bad_active = active.iter().zip(good).filter(|(&a, &g)| a && !g).count();
        assert!(good_count >= 1, "GOOD set is empty at selection time");
        assert!(bad_active <= k - good_count);
        let kf = k as f64;
        let good_mass = (k - bad_active) as f64 / (kf * good_count as f64);
        let probabilities = (0..k)
            .map(|a| {
                if good[a] {
                    good_mass
                } else if active[a] {
                    1.0 / kf
                } else {
                    0.0
                }
            })
            .collect();
        Self {
            active,
            good: good.to_vec(),
            probabilities,
            bad_active,
            good_count,
        }
    }

    /// Frozen layout: `good[a]` marks GOOD arms, `explored[a]` marks BAD arms
    /// with a live obligation.
    pub fn from_layout(good: &[bool], explored: &[bool]) -> Result<Self> {
        if good.len() != explored.len() || good.len() < 2 {
            return Err(Error::Dimension(format!(
                "layout needs two equal-length masks over at least 2 arms, got {} and {}",
                good.len(),
                explored.len()
            )));
        }
        if !good.iter().any(|&g| g) {
            return Err(Error::Parameter("layout has no GOOD arm".into()));
        }
        let units: Vec<u128> = explored.iter().map(|&e| e as u128).collect();
        Ok(Self::build(good, &units))
    }

    pub fn arms(&self) -> usize {
        self.active.len()
    }

    pub fn is_active(&self, arm: ArmId) -> bool {
        self.active[arm.index()]
    }

    pub fn is_good(&self, arm: ArmId) -> bool {
        self.good[arm.index()]
    }

    /// Members of the active set, ascending.
    pub fn members(&self) -> Vec<ArmId> {
        (0..self.arms())
            .filter(|&a| self.active[a])
            .map(ArmId::from_index)
            .collect()
    }

    pub fn good_members(&self) -> Vec<ArmId> {
        (0..self.arms())
            .filter(|&a| self.good[a])
            .map(ArmId::from_index)
            .collect()
    }

    /// `m`, the number of active BAD arms.
    pub fn bad_active(&self) -> usize {
        self.bad_active
    }

    pub fn good_count(&self) -> usize {
        self.good_count
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `P_n(a)` as an exact fraction `(numerator, denominator)`.
    pub fn rational_probability(&self, arm: ArmId) -> (u64, u64) {
        let k = self.arms() as u64;
        let a = arm.index();
        if self.good[a] {
            (k - self.bad_active as u64, k * self.good_count as u64)
        } else if self.active[a] {
            (1, k)
        } else {
            (0, 1)
        }
    }
}

/// Two-step draw: with probability `|A|/K` pick uniformly from the active
/// set and reveal it as the auxiliary arm; otherwise pick uniformly from
/// GOOD with no auxiliary arm.
pub fn sample_with_aux(active: &ActiveSet, rng: &mut (impl RngCore + ?Sized)) -> (ArmId, Option<ArmId>) {
    let members = active.members();
    let first_branch = members.len() as f64 / active.arms() as f64;
    if unit_f64(rng) < first_branch {
        let arm = members[uniform_index(rng, members.len())];
        (arm, Some(arm))
    } else {
        let good = active.good_members();
        (good[uniform_index(rng, good.len())], None)
    }
}

#[derive(Debug, Clone)]
struct Pending {
    active: ActiveSet,
    arm: ArmId,
    aux: Option<ArmId>,
}

/// Full ArmSwitch state for one run.
#[derive(Debug, Clone)]
pub struct ArmSwitch {
    dims: ProblemDims,
    scan: ScanMode,
    grid: EpsilonGrid,
    thresholds: Arc<ThresholdTable>,
    tables: EstimatorTables,
    steps: usize,
    episode: usize,
    episode_start: usize,
    good: Vec<bool>,
    good_since: Vec<Option<usize>>,
    obligations: Vec<u128>,
    active_since: Vec<usize>,
    pending: Option<Pending>,
    clamp_count: u64,
    eliminations: u64,
}

impl ArmSwitch {
    pub fn new(dims: ProblemDims, scan: ScanMode) -> Self {
        Self::with_thresholds(Arc::new(ThresholdTable::new(dims)), scan)
    }

    /// Build on a shared threshold table, avoiding its recomputation when
    /// many replications run on the same problem.
    pub fn with_thresholds(thresholds: Arc<ThresholdTable>, scan: ScanMode) -> Self {
        let dims = *thresholds.dims();
        let k = dims.arms();
        let mut s = Self {
            dims,
            scan,
            grid: EpsilonGrid::new(dims.horizon()),
            thresholds,
            tables: EstimatorTables::new(k, dims.horizon()),
            steps: 0,
            episode: 0,
            episode_start: 0,
            good: vec![true; k],
            good_since: vec![None; k],
            obligations: vec![0; k],
            active_since: vec![0; k],
            pending: None,
            clamp_count: 0,
            eliminations: 0,
        };
        s.new_episode();
        s
    }

    /// Start at step 0 from an arbitrary layout instead of a fresh episode:
    /// `good[a]` marks GOOD arms, `obligations_units[a]` gives BAD arms'
    /// remaining obligations in units of `1/K`. Useful for fuzzing and for
    /// examining exploration without waiting for eliminations.
    pub fn with_layout(dims: ProblemDims, scan: ScanMode, good: &[bool], obligations_units: &[u128]) -> Result<Self> {
        let k = dims.arms();
        if good.len() != k || obligations_units.len() != k {
            return Err(Error::Dimension(format!("layout masks must have {k} entries")));
        }
        if !good.iter().any(|&g| g) {
            return Err(Error::Parameter("layout has no GOOD arm".into()));
        }
        if let Some(a) = (0..k).find(|&a| good[a] && obligations_units[a] != 0) {
            return Err(Error::Parameter(format!("GOOD arm {a} cannot carry an obligation")));
        }
        let mut s = Self::new(dims, scan);
        for a in 0..k {
            if !good[a] {
                s.good[a] = false;
                s.good_since[a] = None;
                s.obligations[a] = obligations_units[a];
            }
        }
        Ok(s)
    }

    pub fn dims(&self) -> &ProblemDims {
        &self.dims
    }

    pub fn scan_mode(&self) -> ScanMode {
        self.scan
    }

    pub fn grid(&self) -> &EpsilonGrid {
        &self.grid
    }

    pub fn tables(&self) -> &EstimatorTables {
        &self.tables
    }

    /// Global step count `n` (steps completed).
    pub fn step_index(&self) -> usize {
        self.steps
    }

    pub fn episode_index(&self) -> usize {
        self.episode
    }

    pub fn episode_start(&self) -> usize {
        self.episode_start
    }

    pub fn good_set(&self) -> Vec<ArmId> {
        (0..self.good.len())
            .filter(|&a| self.good[a])
            .map(ArmId::from_index)
            .collect()
    }

    pub fn obligations_units(&self) -> &[u128] {
        &self.obligations
    }

    pub fn active_since(&self) -> &[usize] {
        &self.active_since
    }

    /// How often an exploration probability exceeded 1 and was clamped.
    pub fn clamp_count(&self) -> u64 {
        self.clamp_count
    }

    /// Arms found dominated over the run. A BAD arm caught again while
    /// exploring counts too (its obligation is cleared).
    pub fn eliminations(&self) -> u64 {
        self.eliminations
    }

    /// Exploration probability `eps * sqrt(s / (K N))` in the current episode, unclamped.
    pub fn exploration_probability(&self, eps: f64) -> f64 {
        eps * (self.episode as f64 / (self.dims.arms() as f64 * self.dims.horizon() as f64)).sqrt()
    }

    /// Begin a new episode at step `n + 1`. Estimator tables are kept: every
    /// later query starts at or after the new activation markers.
    pub fn new_episode(&mut self) {
        self.episode += 1;
        self.episode_start = self.steps + 1;
        self.good.fill(true);
        self.good_since.fill(Some(self.episode_start));
        self.obligations.fill(0);
        self.active_since.fill(self.episode_start);
    }

    /// Draw this step's exploration obligations for BAD arms.
    pub fn schedule_exploration(&mut self, rng: &mut (impl RngCore + ?Sized)) {
        let n = self.steps + 1;
        let k = self.dims.arms();
        let base = (self.episode as f64 / (k as f64 * self.dims.horizon() as f64)).sqrt();
        for a in 0..k {
            if self.good[a] {
                continue;
            }
            let was_exhausted = self.obligations[a] == 0;
            for j in 1..=self.grid.depth {
                let mut p = 0.5f64.powi(j as i32) * base;
                if p > 1.0 {
                    self.clamp_count += 1;
                    p = 1.0;
                }
                if unit_f64(rng) < p {
                    self.prescribe(a, j, was_exhausted, n);
                }
            }
        }
    }

    /// Apply one triggered obligation `1/eps^2` with `eps = 2^-j` to BAD arm
    /// `a`. The activation marker moves only if the arm had no obligation at
    /// the top of the step.
    fn prescribe(&mut self, a: usize, j: u32, was_exhausted: bool, n: usize) {
        debug_assert!(!self.good[a]);
        if was_exhausted {
            self.active_since[a] = n;
        }
        let units = self.grid.obligation_units(j, self.dims.arms());
        self.obligations[a] = self.obligations[a].max(units);
    }

    /// Active set and sampling distribution for the step about to be played.
    pub fn build_active_set(&self) -> ActiveSet {
        ActiveSet::build(&self.good, &self.obligations)
    }

    /// One unit off every active BAD arm's obligation.
    pub fn decrement_obligations(&mut self, active: &ActiveSet) -> Result<()> {
        for a in 0..self.dims.arms() {
            if active.active[a] && !active.good[a] {
                if self.obligations[a] == 0 {
                    return Err(Error::Contract(format!("obligation of arm {a} would go negative")));
                }
                self.obligations[a] -= 1;
            }
        }
        Ok(())
    }

    /// Test all ordered pairs in the active set at the current step and
    /// apply the resulting eliminations. Returns the eliminated arms.
    pub fn elimination_pass(&mut self, active: &ActiveSet) -> Result<Vec<ArmId>> {
        let n = self.steps;
        let members = active.members();
        let mut lost = Vec::new();
        for &a in &members {
            for &ap in &members {
                if ap == a {
                    continue;
                }
                let markers = PairMarkers {
                    active_since_a: self.active_since[a.index()],
                    active_since_a_prime: self.active_since[ap.index()],
                    good_since_a: self.good_since[a.index()],
                    good_since_a_prime: self.good_since[ap.index()],
                };
                if is_better(&self.tables, &self.thresholds, ap, a, n, &markers, self.scan)? {
                    lost.push(a);
                    break;
                }
            }
        }
        for &a in &lost {
            let i = a.index();
            self.good[i] = false;
            self.good_since[i] = None;
            self.obligations[i] = 0;
        }
        self.eliminations += lost.len() as u64;
        if !self.good.iter().any(|&g| g) {
            self.new_episode();
        }
        Ok(lost)
    }

    /// One full step against a reward function `arm -> reward`.
    pub fn step(
        &mut self,
        mut reward_fn: impl FnMut(ArmId) -> f64,
        rng: &mut (impl RngCore + ?Sized),
    ) -> Result<StepOutcome> {
        let sel = self.select_inner(rng)?;
        let outcome = StepOutcome {
            arm: sel.arm,
            reward: reward_fn(sel.arm),
            aux: sel.aux,
        };
        self.update_inner(&outcome)?;
        Ok(outcome)
    }

    fn select_inner(&mut self, rng: &mut (impl RngCore + ?Sized)) -> Result<Selection> {
        check_horizon(self.steps, self.dims.horizon())?;
        if self.pending.is_some() {
            return Err(Error::Contract("select called twice without update".into()));
        }
        self.schedule_exploration(rng);
        let active = self.build_active_set();
        let (arm, aux) = sample_with_aux(&active, rng);
        let distribution = active.probabilities.clone();
        self.pending = Some(Pending { active, arm, aux });
        Ok(Selection { distribution, arm, aux })
    }

    fn update_inner(&mut self, outcome: &StepOutcome) -> Result<()> {
        check_outcome(outcome, self.pending.as_ref().map(|p| p.arm))?;
        let pending = self.pending.take().expect("checked above");
        if outcome.aux != pending.aux {
            self.pending = Some(pending);
            return Err(Error::Contract("outcome aux differs from the selected aux".into()));
        }
        self.tables
            .record(outcome.arm, outcome.aux, outcome.reward, &pending.active.probabilities)?;
        self.steps += 1;
        self.decrement_obligations(&pending.active)?;
        self.elimination_pass(&pending.active)?;
        Ok(())
    }

    /// Plain-text state dump for debugging.
    pub fn dump(&self) -> String {
        let join = |v: Vec<String>| if v.is_empty() { "-".to_string() } else { v.join(",") };
        let mut out = String::new();
        let _ = writeln!(
            out,
            "step={} episode={} episode_start={}",
            self.steps, self.episode, self.episode_start
        );
        let _ = writeln!(
            out,
            "good={}",
            join(self.good_set().iter().map(|a| a.to_string()).collect())
        );
        let _ = writeln!(
            out,
            "obligations_units={}",
            self.obligations
                .iter()
                .map(|u| u.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
        let _ = writeln!(
            out,
            "active_since={}",
            self.active_since
                .iter()
                .map(|u| u.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        );
        out
    }

    #[cfg(test)]
    fn force_bad(&mut self, arm: usize, units: u128) {
        self.good[arm] = false;
        self.good_since[arm] = None;
        self.obligations[arm] = units;
    }
}

impl Policy for ArmSwitch {
    fn name(&self) -> &str {
        "armswitch"
    }

    fn arms(&self) -> usize {
        self.dims.arms()
    }

    fn horizon(&self) -> usize {
        self.dims.horizon()
    }

    fn steps_taken(&self) -> usize {
        self.steps
    }

    fn select(&mut self, rng: &mut dyn RngCore) -> Result<Selection> {
        self.select_inner(rng)
    }

    fn update(&mut self, outcome: &StepOutcome) -> Result<()> {
        self.update_inner(outcome)
    }

    fn episode(&self) -> Option<usize> {
        Some(self.episode)
    }

    fn good_size(&self) -> Option<usize> {
        Some(self.good.iter().filter(|&&g| g).count())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    fn dims(k: usize, n: usize) -> ProblemDims {
        ProblemDims::with_default_delta(k, n).unwrap()
    }

    fn arm(i: usize) -> ArmId {
        ArmId::from_index(i)
    }

    #[test]
    fn grid_shape() {
        let g = EpsilonGrid::new(1024);
        assert_eq!(g.len(), 10);
        assert_eq!(EpsilonGrid::new(1025).len(), 11);
        assert_eq!(EpsilonGrid::new(2).len(), 1);
        let v = g.values();
        assert!(v.windows(2).all(|w| w[0] > w[1]));
        assert!(*v.last().unwrap() >= 1.0 / (2.0 * 1024.0));
        assert_eq!(g.obligation_units(1, 3), 12);
        assert_eq!(g.obligation_units(3, 5), 320);
    }

    #[test]
    fn initial_state() {
        let p = ArmSwitch::new(dims(3, 100), ScanMode::Full);
        assert_eq!(p.episode_index(), 1);
        assert_eq!(p.episode_start(), 1);
        assert_eq!(p.good_set(), vec![arm(0), arm(1), arm(2)]);
        assert_eq!(p.active_since(), &[1, 1, 1]);
    }

    #[test]
    fn restart_moves_markers() {
        let mut p = ArmSwitch::new(dims(3, 1000), ScanMode::Full);
        p.steps = 500;
        p.force_bad(1, 7);
        p.new_episode();
        assert_eq!(p.episode_start(), 501);
        assert_eq!(p.active_since(), &[501, 501, 501]);
        assert_eq!(p.obligations_units(), &[0, 0, 0]);
        assert_eq!(p.episode_index(), 2);
    }

    #[test]
    fn fresh_distribution_is_uniform() {
        let mut p = ArmSwitch::new(dims(3, 100), ScanMode::Full);
        let sel = p.select(&mut stream(1, 1)).unwrap();
        assert_eq!(sel.distribution, vec![1.0 / 3.0; 3]);
        assert_eq!(sel.aux, Some(sel.arm));
    }

    #[test]
    fn exploration_probability_closed_form() {
        let p = ArmSwitch::new(dims(4, 1024), ScanMode::Full);
        assert_eq!(p.exploration_probability(0.5), 1.0 / 128.0);
    }

    #[test]
    fn good_arms_are_never_scheduled() {
        let mut p = ArmSwitch::new(dims(4, 1024), ScanMode::Full);
        p.episode = 1 << 40;
        let mut rng = stream(3, 0);
        p.schedule_exploration(&mut rng);
        assert_eq!(p.obligations_units(), &[0, 0, 0, 0]);
        // no draws consumed either
        let mut fresh = stream(3, 0);
        assert_eq!(rng.next_u64(), fresh.next_u64());
    }

    #[test]
    fn shorter_obligation_does_not_override() {
        let k = 4;
        let mut p = ArmSwitch::new(dims(k, 1024), ScanMode::Full);
        p.steps = 10;
        p.force_bad(2, 16 * k as u128);
        p.active_since[2] = 5;
        p.prescribe(2, 1, false, 11);
        assert_eq!(p.obligations_units()[2], 64);
        assert_eq!(p.active_since()[2], 5);
    }

    #[test]
    fn exhausted_arm_gets_new_marker() {
        let mut p = ArmSwitch::new(dims(4, 1024), ScanMode::Full);
        p.steps = 10;
        p.force_bad(2, 0);
        p.prescribe(2, 2, true, 11);
        p.prescribe(2, 1, true, 11);
        assert_eq!(p.obligations_units()[2], 64);
        assert_eq!(p.active_since()[2], 11);
    }

    #[test]
    fn clamping_is_counted() {
        let mut p = ArmSwitch::new(dims(2, 4), ScanMode::Full);
        p.force_bad(1, 0);
        p.episode = 1000;
        p.schedule_exploration(&mut stream(1, 0));
        assert!(p.clamp_count() > 0);
        assert_eq!(p.obligations_units()[1], 2 * 16);
    }

    #[test]
    fn active_set_examples() {
        let mut p = ArmSwitch::new(dims(4, 100), ScanMode::Full);
        p.force_bad(2, 3);
        p.force_bad(3, 0);
        let s = p.build_active_set();
        assert_eq!(s.probabilities(), &[3.0 / 8.0, 3.0 / 8.0, 0.25, 0.0]);
        assert_eq!(s.bad_active(), 1);
        assert_eq!(s.rational_probability(arm(0)), (3, 8));

        let mut p = ArmSwitch::new(dims(4, 100), ScanMode::Full);
        p.force_bad(2, 0);
        p.force_bad(3, 0);
        assert_eq!(p.build_active_set().probabilities(), &[0.5, 0.5, 0.0, 0.0]);

        let mut p = ArmSwitch::new(dims(3, 100), ScanMode::Full);
        p.force_bad(1, 1);
        p.force_bad(2, 9);
        let s = p.build_active_set();
        assert_eq!(s.probabilities(), &[1.0 / 3.0; 3]);
        assert_eq!(s.rational_probability(arm(0)), (1, 3));
    }

    #[test]
    fn full_active_set_always_reveals_aux() {
        let p = ArmSwitch::new(dims(5, 100), ScanMode::Full);
        let s = p.build_active_set();
        let mut rng = stream(5, 1);
        for _ in 0..1000 {
            let (a, aux) = sample_with_aux(&s, &mut rng);
            assert_eq!(aux, Some(a));
        }
    }

    #[test]
    fn aux_marginal_is_one_over_k() {
        let mut p = ArmSwitch::new(dims(4, 100), ScanMode::Full);
        p.force_bad(2, 5);
        p.force_bad(3, 0);
        let s = p.build_active_set();
        let mut rng = stream(11, 3);
        let draws = 100_000;
        let mut aux2 = 0usize;
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            let (a, aux) = sample_with_aux(&s, &mut rng);
            counts[a.index()] += 1;
            if aux == Some(arm(2)) {
                aux2 += 1;
            }
        }
        let sd = (0.25 * 0.75 / draws as f64).sqrt();
        assert!((aux2 as f64 / draws as f64 - 0.25).abs() < 4.0 * sd);
        for (a, &c) in counts.iter().enumerate() {
            let p = s.probabilities()[a];
            let sd = (p * (1.0 - p) / draws as f64).sqrt().max(1e-12);
            assert!((c as f64 / draws as f64 - p).abs() <= 4.0 * sd, "arm {a}");
        }
    }

    #[test]
    fn decrements() {
        let mut p = ArmSwitch::new(dims(3, 100), ScanMode::Full);
        p.force_bad(1, 1);
        p.force_bad(2, 64);
        let s = p.build_active_set();
        p.decrement_obligations(&s).unwrap();
        assert_eq!(p.obligations_units(), &[0, 0, 63]);
        let s = p.build_active_set();
        assert!(!s.is_active(arm(1)));
    }

    #[test]
    fn no_firing_pair_keeps_state() {
        let mut p = ArmSwitch::new(dims(2, 100), ScanMode::Full);
        let mut rng = stream(2, 1);
        p.step(|_| 0.5, &mut rng).unwrap();
        let s = p.build_active_set();
        assert!(p.elimination_pass(&s).unwrap().is_empty());
        assert_eq!(p.good_set().len(), 2);
    }

    // Threshold at K=2, N=4096, delta=1/N over the whole horizon is 2907.95.
    #[test]
    fn dominated_arm_is_eliminated() {
        let n = 4096;
        let mut p = ArmSwitch::new(dims(2, n), ScanMode::Full);
        for _ in 0..n {
            p.tables.record(arm(0), Some(arm(0)), 1.0, &[0.5, 0.5]).unwrap();
        }
        p.steps = n;
        let s = p.build_active_set();
        let lost = p.elimination_pass(&s).unwrap();
        assert_eq!(lost, vec![arm(1)]);
        assert_eq!(p.good_set(), vec![arm(0)]);
        assert_eq!(p.obligations_units()[1], 0);
        assert_eq!(p.episode_index(), 1);
    }

    // K=2, N=32768: both thresholds over the full horizon are 9099.47.
    // Arm 0's auxiliary sum (10923) beats arm 1, while arm 1's plain
    // estimate beats arm 0 by 10922.
    #[test]
    fn mutual_elimination_restarts() {
        let n = 32768;
        let mut p = ArmSwitch::new(dims(2, n), ScanMode::Full);
        for i in 0..n {
            if i < 21845 {
                p.tables.record(arm(1), None, 1.0, &[0.5, 0.5]).unwrap();
            } else {
                p.tables.record(arm(0), Some(arm(0)), 1.0, &[0.5, 0.5]).unwrap();
            }
        }
        p.steps = n;
        let s = p.build_active_set();
        let lost = p.elimination_pass(&s).unwrap();
        assert_eq!(lost.len(), 2);
        assert_eq!(p.episode_index(), 2);
        assert_eq!(p.episode_start(), n + 1);
        assert_eq!(p.good_set().len(), 2);
    }

    #[test]
    fn runs_to_horizon_and_stops() {
        for seed in 0..5 {
            let k = 2 + seed as usize;
            let n = 300;
            let mut p = ArmSwitch::new(dims(k, n), ScanMode::Full);
            let mut rng = stream(seed, 1);
            let mut env = stream(seed, 0);
            for _ in 0..n {
                p.step(|a| (unit_f64(&mut env) < 0.1 * a.index() as f64) as u8 as f64, &mut rng)
                    .unwrap();
            }
            assert!(p.select(&mut rng).is_err());
        }
    }

    #[test]
    fn update_contract() {
        let mut p = ArmSwitch::new(dims(2, 10), ScanMode::Full);
        let out = StepOutcome {
            arm: arm(0),
            reward: 0.5,
            aux: None,
        };
        assert!(p.update(&out).is_err());
        let sel = p.select(&mut stream(1, 0)).unwrap();
        assert!(p.select(&mut stream(1, 0)).is_err());
        let bad = StepOutcome {
            arm: sel.arm,
            reward: 1.5,
            aux: sel.aux,
        };
        assert!(p.update(&bad).is_err());
        let ok = StepOutcome {
            arm: sel.arm,
            reward: 1.0,
            aux: sel.aux,
        };
        p.update(&ok).unwrap();
        assert_eq!(p.steps_taken(), 1);
    }

    #[test]
    fn dump_format() {
        let mut p = ArmSwitch::new(dims(3, 10), ScanMode::Full);
        p.force_bad(2, 4);
        assert_eq!(
            p.dump(),
            "step=0 episode=1 episode_start=1\ngood=0,1\nobligations_units=0 0 4\nactive_since=1 1 1\n"
        );
    }
}
