//! (1+1) Fast-IA against the (1+1) IA with static hypermutation and the
//! (1+1) EA on OneMax.

use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let budget = 50_000_000;
    println!("{:>5} {:>12} {:>12} {:>12}", "n", "fast-ia", "ia-hyp", "ea");
    for n in [32, 64, 128] {
        let onemax = Benchmark::one_max(n)?;
        let mut rng = RandomSource::from_seed(n as u64);
        let fast = run_one_plus_one_fast_ia(&onemax, GammaPreset::InvLnN, ConstructiveMode::Geq, budget, &mut rng)?;
        let hyp = run_one_plus_one_ia_hyp(&onemax, ConstructiveMode::Geq, budget, &mut rng)?;
        let ea = run_one_plus_one_ea(&onemax, budget, &mut rng)?;
        println!("{n:>5} {:>12} {:>12} {:>12}", fast.evaluations, hyp.evaluations, ea.evaluations);
    }
    Ok(())
}
