//! Concentration events on recorded ArmSwitch runs, and the wide-radius
//! comparison on a grid.

use armswitch::verification::{event_runs, wide_radius_grid};

fn main() -> armswitch::Result<()> {
    let diags = event_runs(100, 1_000, 0)?;
    let held = diags.iter().filter(|d| d.all_hold()).count();
    let mut worst = [0.0f64; 4];
    for d in &diags {
        for (w, r) in worst.iter_mut().zip(d.worst_ratio) {
            *w = w.max(r);
        }
    }
    println!("all four events held in {held}/100 runs; worst deviation/bound per event {worst:.3?}");
    println!("first run: {:?}", diags[0]);

    let grid = wide_radius_grid(16, 20_000)?;
    println!(
        "wide radius <= 2x radius: {} violations in {} points, max ratio {:.4}",
        grid.violations, grid.checked, grid.max_ratio
    );
    Ok(())
}
