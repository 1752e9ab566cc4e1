//! A sweep over n with the trial runner, a scaling fit and CSV export.

use immuno_opt::lab::{fit_scaling, run_trials, AlgoKind, ExperimentConfig, ScalingModel};
use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let config = ExperimentConfig {
        algo: AlgoKind::FastIa,
        benchmark: BenchmarkKind::LeadingOnes,
        n: vec![32, 64, 128],
        gamma: vec![GammaPreset::InvLnN],
        trials: 20,
        seed: 2,
        ..Default::default()
    };
    let table = run_trials(&config)?;
    for s in table.summaries() {
        println!(
            "n = {:>4}: {}/{} solved, median {:?}",
            s.n, s.successes, s.trials, s.median_evaluations
        );
    }
    let fit = fit_scaling(&table, ScalingModel::POWER)?;
    println!("median ~ {:.3} * n^{:.3}", fit.constant, fit.exponent);

    let path = std::env::temp_dir().join("leadingones_sweep.csv");
    table.save(&path)?;
    println!("rows written to {}", path.display());
    Ok(())
}
