//! Exploration of eliminated arms: the active set, the sampling
//! distribution and the two-step auxiliary draw, starting from a layout
//! where one arm is already BAD.

use armswitch::armswitch::{sample_with_aux, ActiveSet, ArmSwitch};
use armswitch::prelude::*;
use armswitch::rng::stream;

fn main() -> Result<()> {
    let layout = ActiveSet::from_layout(&[true, true, false, false], &[false, false, true, false])?;
    println!("K=4, GOOD={{0,1}}, active BAD={{2}}: P = {:?}", layout.probabilities());
    let mut rng = stream(2, 0);
    let draws = 100_000;
    let mut aux_hits = [0u32; 4];
    for _ in 0..draws {
        if let (_, Some(t)) = sample_with_aux(&layout, &mut rng) {
            aux_hits[t.index()] += 1;
        }
    }
    let marginal: Vec<f64> = aux_hits.iter().map(|&h| f64::from(h) / draws as f64).collect();
    println!("empirical P(aux = a): {marginal:.4?} (1/K = 0.25 on active arms)");

    // Arm 2 is BAD with 8 units (2 steps' worth at K=4) of obligation left.
    let dims = ProblemDims::with_default_delta(4, 256)?;
    let mut policy = ArmSwitch::with_layout(dims, ScanMode::Full, &[true, true, false, false], &[0, 0, 8, 0])?;
    for _ in 0..10 {
        policy.step(|a| if a.index() == 0 { 0.9 } else { 0.4 }, &mut rng)?;
    }
    print!("{}", policy.dump());
    println!(
        "exploration probability at eps=1/2: {:.5}",
        policy.exploration_probability(0.5)
    );
    Ok(())
}
