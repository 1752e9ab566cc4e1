//! On Trap the optimum is the complement of the attractor. A full
//! hypermutation reaches it in one step; standard bit mutation almost never
//! does.

use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let n = 20;
    let trap = Benchmark::trap(n)?;
    let budget = 1_000_000;
    for seed in 0..5 {
        let fast = run_one_plus_one_fast_ia(
            &trap,
            GammaPreset::InvLnN,
            ConstructiveMode::Gt,
            budget,
            &mut RandomSource::from_seed(seed),
        )?;
        let ea = run_one_plus_one_ea(&trap, budget, &mut RandomSource::from_seed(seed))?;
        println!(
            "seed {seed}: fast-ia {} after {} evals | ea {} after {} evals",
            if fast.success { "solved" } else { "failed" },
            fast.evaluations,
            if ea.success { "solved" } else { "failed" },
            ea.evaluations
        );
    }
    Ok(())
}
