//! Every policy on every named scenario, averaged over a few seeds.

use std::sync::Arc;

use armswitch::baselines::default_window;
use armswitch::prelude::*;

type Maker = Box<dyn Fn() -> Result<Box<dyn Policy>>>;

fn main() -> Result<()> {
    let n = 10_000;
    let reps = 10;
    println!(
        "{:<13} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10}",
        "scenario", "armswitch", "ucb1", "exp3s", "sw-ucb", "uniform", "oracle"
    );
    for scenario in Scenario::ALL {
        let env = Arc::new(scenario.build(&ScenarioParams {
            arms: 2,
            horizon: n,
            ..Default::default()
        })?);
        let dims = ProblemDims::with_default_delta(2, n)?;
        let budget = env.switches();
        let makers: Vec<Maker> = vec![
            Box::new(move || Ok(Box::new(ArmSwitch::new(dims, ScanMode::Full)))),
            Box::new(move || Ok(Box::new(Ucb1::new(2, n)?))),
            Box::new(move || Ok(Box::new(Exp3s::new(2, n, Exp3sParams::tuned(2, n, budget))?))),
            Box::new(move || Ok(Box::new(SlidingWindowUcb::new(2, n, default_window(n))?))),
            Box::new(move || Ok(Box::new(Uniform::new(2, n)?))),
            {
                let env = Arc::clone(&env);
                Box::new(move || Ok(Box::new(Oracle::new(Arc::clone(&env)))))
            },
        ];
        let mut row = format!("{:<13}", env.name());
        for make in &makers {
            let mut total = 0.0;
            for r in 0..reps {
                let mut policy = make()?;
                let (mut e, mut p) = replication_streams(5, r);
                total += dynamic_regret(&simulate(policy.as_mut(), &env, &mut e, &mut p, false)?, &env)?;
            }
            row.push_str(&format!(" {:>10.1}", total / reps as f64));
        }
        println!("{row}");
    }
    Ok(())
}
