//! The estimator tables, the confidence radius and the elimination test on
//! a hand-made history.

use armswitch::prelude::*;
use armswitch::statistics::{
    confidence_radius, is_better, ConfidenceQuery, EstimatorTables, PairMarkers, ThresholdTable,
};

fn main() -> Result<()> {
    let dims = ProblemDims::new(2, 1 << 16, 0.05)?;
    let (a0, a1) = (dims.arm(0)?, dims.arm(1)?);
    let q = ConfidenceQuery::new(1, 100, dims)?;
    println!("radius over 100 steps: {:.4}", confidence_radius(&q));

    // Arm 0 always pays 1, arm 1 never does, both drawn with probability 1/2
    // and the auxiliary draw always succeeding.
    let n = 40_000;
    let mut tables = EstimatorTables::new(2, n);
    for t in 0..n {
        let arm = if t % 2 == 0 { a0 } else { a1 };
        let reward = if arm == a0 { 1.0 } else { 0.0 };
        tables.record(arm, Some(arm), reward, &[0.5, 0.5])?;
    }
    let thresholds = ThresholdTable::new(dims);
    let markers = PairMarkers {
        active_since_a: 1,
        active_since_a_prime: 1,
        good_since_a: Some(1),
        good_since_a_prime: Some(1),
    };
    for end in [1_000, 10_000, 20_000, 40_000] {
        let d_hat = tables.delta_hat(a0, a1, 1, end)?;
        let d_tilde = tables.delta_tilde_hat(a0, a1, 1, end)?;
        let fires = is_better(&tables, &thresholds, a0, a1, end, &markers, ScanMode::Full)?;
        println!(
            "n={end:>6}  delta_hat {d_hat:>8.1}  delta_tilde {d_tilde:>8.1}  threshold {:>8.1}  arm 0 beats arm 1: {fires}",
            thresholds.tilde_threshold(end)
        );
    }
    Ok(())
}
