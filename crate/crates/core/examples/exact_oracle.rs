//! Exact expected runtime of the (1+1) Fast-IA from the level chain, next
//! to a Monte Carlo estimate.

use immuno_opt::oracle::{exact_fast_ia_expected_evals, exact_schedule_sum, LevelChain};
use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let n = 10;
    let jump = Benchmark::jump(n, 2)?;
    let gamma = 1.0;
    let mode = ConstructiveMode::Geq;

    let chain = LevelChain::fast_ia(&jump, gamma, mode)?;
    let remaining = chain.expected_remaining_evals()?;
    for (level, t) in remaining.iter().enumerate() {
        println!("level {level:>2}: {t:>10.3} expected evaluations to the optimum");
    }
    let exact = exact_fast_ia_expected_evals(&jump, gamma, mode)?;

    let trials = 20_000;
    let total: u64 = (0..trials)
        .map(|t| {
            let mut rng = RandomSource::for_trial(5, t);
            run_one_plus_one_fast_ia(&jump, GammaPreset::Const(gamma), mode, u64::MAX, &mut rng)
                .map(|r| r.evaluations)
        })
        .sum::<immuno_opt::Result<u64>>()?;
    println!("exact {exact:.3}, simulated {:.3} over {trials} runs", total as f64 / trials as f64);
    println!("schedule sum at n = {n}: {:.4}", exact_schedule_sum(n, gamma)?);
    Ok(())
}
