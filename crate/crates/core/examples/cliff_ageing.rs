//! Fast Opt-IA on Cliff: hybrid ageing removes the trapped b-cell and lets a
//! worse post-cliff solution take over.

use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let n = 48;
    let cliff = Benchmark::cliff(n, n / 4)?;
    let nf = n as f64;
    for operator in [OperatorKind::PhypeBm, OperatorKind::PhypeFcm] {
        let config = OptIaConfig {
            mu: 1,
            dup: 1,
            tau: (2.0 * nf * nf.ln()).round() as u64,
            operator,
            gamma: GammaPreset::InvNLog2Sq,
            mode: ConstructiveMode::Gt,
        };
        let mut solved = 0;
        let mut regressions = 0;
        for seed in 0..10 {
            let r = run_fast_opt_ia(&cliff, config, 500_000, &mut RandomSource::from_seed(seed))?;
            solved += r.success as usize;
            regressions += r.best_regressions;
        }
        println!("{operator}: solved {solved}/10, generations with a worse best: {regressions}");
    }
    Ok(())
}
