//! Monte Carlo check that both per-step reward estimators are unbiased.
//!
//! For a frozen active-set layout the plain estimate `I{A=a} r` has mean
//! `P(a) g(a)` and the auxiliary estimate `I{Ã=a} r` has mean `g(a)/K` for
//! every active arm (zero otherwise).

use rand::RngCore;
use serde::Serialize;

use crate::armswitch::{sample_with_aux, ActiveSet};
use crate::error::{Error, Result};
use crate::rng::bernoulli;
use crate::types::ArmId;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorCheck {
    pub empirical: f64,
    pub analytic: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmUnbiasedness {
    pub arm: usize,
    pub plain: EstimatorCheck,
    pub auxiliary: EstimatorCheck,
}

// Each per-draw variable is Bernoulli(mean), so the standard error is analytic.
fn check(hits: u64, draws: u64, mean: f64) -> EstimatorCheck {
    let empirical = hits as f64 / draws as f64;
    let se = (mean * (1.0 - mean) / draws as f64).sqrt();
    let z = if se > 0.0 {
        (empirical - mean) / se
    } else if empirical == mean {
        0.0
    } else {
        f64::INFINITY
    };
    EstimatorCheck {
        empirical,
        analytic: mean,
        z,
    }
}

/// Draw `draws` steps from `layout` with Bernoulli rewards of mean `means`.
pub fn estimator_unbiasedness(
    layout: &ActiveSet,
    means: &[f64],
    draws: u64,
    rng: &mut (impl RngCore + ?Sized),
) -> Result<Vec<ArmUnbiasedness>> {
    let k = layout.arms();
    if means.len() != k {
        return Err(Error::Dimension(format!("{} means for {k} arms", means.len())));
    }
    if let Some(&g) = means.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(Error::Range(format!("mean {g} outside [0, 1]")));
    }
    if draws == 0 {
        return Err(Error::Parameter("need at least one draw".into()));
    }
    let mut plain = vec![0u64; k];
    let mut aux = vec![0u64; k];
    for _ in 0..draws {
        let (arm, a_tilde) = sample_with_aux(layout, rng);
        if bernoulli(rng, means[arm.index()]) {
            plain[arm.index()] += 1;
            if let Some(t) = a_tilde {
                aux[t.index()] += 1;
            }
        }
    }
    Ok((0..k)
        .map(|a| {
            let id = ArmId::from_index(a);
            let aux_mean = if layout.is_active(id) { means[a] / k as f64 } else { 0.0 };
            ArmUnbiasedness {
                arm: a,
                plain: check(plain[a], draws, layout.probabilities()[a] * means[a]),
                auxiliary: check(aux[a], draws, aux_mean),
            }
        })
        .collect())
}

/// A named layout with reward means.
#[derive(Debug, Clone)]
pub struct UnbiasednessCase {
    pub name: &'static str,
    pub good: Vec<bool>,
    pub explored: Vec<bool>,
    pub means: Vec<f64>,
}

/// Layouts exercised by the verification suite.
pub fn default_cases() -> Vec<UnbiasednessCase> {
    let (t, f) = (true, false);
    vec![
        UnbiasednessCase {
            name: "all-good-k2",
            good: vec![t, t],
            explored: vec![f, f],
            means: vec![0.9, 0.5],
        },
        UnbiasednessCase {
            name: "k4-one-explored",
            good: vec![t, t, f, f],
            explored: vec![f, f, t, f],
            means: vec![1.0, 0.6, 0.3, 0.8],
        },
        UnbiasednessCase {
            name: "k3-single-good",
            good: vec![t, f, f],
            explored: vec![f, t, t],
            means: vec![0.2, 0.7, 0.5],
        },
        UnbiasednessCase {
            name: "k5-mixed",
            good: vec![t, t, t, f, f],
            explored: vec![f, f, f, t, f],
            means: vec![0.4, 0.5, 0.6, 0.9, 0.1],
        },
    ]
}
