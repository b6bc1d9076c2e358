//! Randomized checks of the two summation inequalities and the martingale
//! concentration bound.

use armswitch::rng::stream;
use armswitch::verification::{
    check_exp_recursion_lemma, check_sumsq_lemma, exp_recursion_sweep, freedman_coverage, sumsq_sweep, MartingaleModel,
};

fn main() -> armswitch::Result<()> {
    let c = check_sumsq_lemma(&[4.0, 4.0])?;
    println!("sum-sqrt on (4, 4): lhs {:.4} <= rhs {:.4}: {}", c.lhs1, c.rhs, c.holds);
    let c = check_exp_recursion_lemma(1.0, &[1.0])?;
    println!("exp recursion, alpha=1, y=(1): {:.4} <= {:.4}", c.lhs, c.bound);

    let r = sumsq_sweep(100_000, &mut stream(1, 0));
    println!(
        "sum-sqrt sweep: {} violations / {}, min margin {:.3e}",
        r.violations, r.instances, r.min_margin
    );
    let r = exp_recursion_sweep(100_000, &mut stream(1, 1));
    println!(
        "exp-recursion sweep: {} violations / {}, min margin {:.3e}",
        r.violations, r.instances, r.min_margin
    );

    for (n, delta) in [(1_000, 0.05), (10_000, 0.01), (1_000, 0.5)] {
        let r = freedman_coverage(
            10_000,
            n,
            1.0,
            delta,
            MartingaleModel::RegimeSwitching,
            &mut stream(1, 2),
        )?;
        println!(
            "coverage n={n} delta={delta}: {:.4} (required {:.4})",
            r.coverage, r.required
        );
    }
    Ok(())
}
