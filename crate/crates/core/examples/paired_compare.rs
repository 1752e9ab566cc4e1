//! Paired-seed comparison of two configurations.

use immuno_opt::lab::{compare, AlgoKind, ExperimentConfig};
use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let baseline = ExperimentConfig {
        algo: AlgoKind::Rls,
        benchmark: BenchmarkKind::OneMax,
        n: vec![64, 128],
        gamma: vec![],
        trials: 25,
        seed: 8,
        ..Default::default()
    };
    let candidate = ExperimentConfig {
        algo: AlgoKind::FastIa,
        gamma: vec![GammaPreset::InvLnN, GammaPreset::QuarterInvLnN],
        ..baseline.clone()
    };
    let c = compare(&baseline, &candidate)?;
    for p in &c.points {
        println!(
            "n = {:>4}, gamma = {:.4}: rls median {}, fast-ia median {}, paired ratio {:.3}",
            p.n,
            p.candidate_gamma.unwrap_or(f64::NAN),
            p.baseline_median,
            p.candidate_median,
            p.median_ratio
        );
    }
    Ok(())
}
