//! Seeded trial batches on a bounded worker pool.
//!
//! Trial `i` of every grid point runs with the seed `trial_seed(master, i)`,
//! so two configurations sharing a master seed see the same random initial
//! conditions trial by trial. Results are merged by position, never by
//! completion order.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algorithms::{
    run_fast_opt_ia, run_one_plus_one_ea_with_rate, run_one_plus_one_fast_ia, run_one_plus_one_ia_hyp, run_rls_k,
    RunResult,
};
use crate::error::{Error, Result};
use crate::lab::config::{AlgoKind, ExperimentConfig, Point};
use crate::lab::table::{median, TrialRecord, TrialTable};
use crate::rng::RandomSource;

/// Environment variable overriding the worker count.
pub const THREADS_ENV: &str = "IMMUNO_OPT_THREADS";

/// Workers used by [`run_trials`]: `IMMUNO_OPT_THREADS` when set to a
/// positive integer, otherwise the number of available cores.
pub fn worker_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs every trial of every grid point.
pub fn run_trials(config: &ExperimentConfig) -> Result<TrialTable> {
    run_trials_with_workers(config, worker_count())
}

pub fn run_trials_with_workers(config: &ExperimentConfig, workers: usize) -> Result<TrialTable> {
    let points = config.points()?;
    let jobs: Vec<(usize, u64)> = (0..points.len())
        .flat_map(|p| (0..config.trials as u64).map(move |t| (p, t)))
        .collect();
    let run = |&(p, t): &(usize, u64)| run_single(config, &points[p], t).map(|r| record(config, &points[p], t, &r));
    let rows = if workers <= 1 {
        jobs.iter().map(run).collect::<Result<Vec<_>>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Io(format!("cannot start worker pool: {e}")))?;
        pool.install(|| jobs.par_iter().map(run).collect::<Result<Vec<_>>>())?
    };
    Ok(TrialTable::new(Some(config.hash()), rows))
}

/// Runs trial `trial` of one grid point.
pub fn run_single(config: &ExperimentConfig, point: &Point, trial: u64) -> Result<RunResult> {
    let mut rng = RandomSource::for_trial(config.seed, trial);
    let b = &point.benchmark;
    match config.algo {
        AlgoKind::FastIa => run_one_plus_one_fast_ia(
            b,
            point.gamma_preset.expect("resolved"),
            config.mode,
            point.budget,
            &mut rng,
        ),
        AlgoKind::IaHyp => run_one_plus_one_ia_hyp(b, config.mode, point.budget, &mut rng),
        AlgoKind::Ea => run_one_plus_one_ea_with_rate(b, point.rate.expect("resolved"), point.budget, &mut rng),
        AlgoKind::Rls => run_rls_k(b, config.k, point.budget, &mut rng),
        AlgoKind::OptIa => run_fast_opt_ia(b, point.opt_ia_config(config), point.budget, &mut rng),
    }
}

fn record(config: &ExperimentConfig, point: &Point, trial: u64, r: &RunResult) -> TrialRecord {
    let opt_ia = config.algo == AlgoKind::OptIa;
    TrialRecord {
        trial,
        algo: config.algo,
        operator: config.operator_name(),
        benchmark: config.benchmark,
        n: point.n(),
        d: point.benchmark.gap(),
        gamma: point.gamma,
        mu: opt_ia.then_some(config.mu),
        dup: opt_ia.then_some(config.dup),
        tau: point.tau,
        mode: config.uses_mode().then_some(config.mode),
        seed: r.seed,
        budget: r.budget,
        evaluations: r.evaluations,
        generations: r.generations,
        success: r.success,
        best_fitness: r.best_fitness.value(),
    }
}

/// Paired outcome at one grid point of a comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparePoint {
    pub n: usize,
    pub baseline_gamma: Option<f64>,
    pub candidate_gamma: Option<f64>,
    pub pairs: usize,
    pub baseline_successes: usize,
    pub candidate_successes: usize,
    pub baseline_median: f64,
    pub candidate_median: f64,
    /// Median over trials of `baseline evaluations / candidate evaluations`.
    pub median_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub baseline: String,
    pub candidate: String,
    pub seed: u64,
    pub points: Vec<ComparePoint>,
}

/// Runs both configurations with the baseline's master seed and pairs
/// trials by index. Both must use the same sizes and trial count; a side
/// without a gamma grid is paired with every gamma of the other side.
pub fn compare(baseline: &ExperimentConfig, candidate: &ExperimentConfig) -> Result<Comparison> {
    if baseline.trials != candidate.trials {
        return Err(Error::param("trials", "both sides of a comparison need the same trial count"));
    }
    let mut sizes_a = baseline.n.clone();
    let mut sizes_b = candidate.n.clone();
    sizes_a.sort_unstable();
    sizes_a.dedup();
    sizes_b.sort_unstable();
    sizes_b.dedup();
    if sizes_a != sizes_b {
        return Err(Error::param("n", "both sides of a comparison need the same sizes"));
    }
    let candidate = ExperimentConfig {
        seed: baseline.seed,
        ..candidate.clone()
    };
    let ta = run_trials(baseline)?;
    let tb = run_trials(&candidate)?;
    let trials = baseline.trials;
    let mut points = Vec::new();
    for &n in &sizes_a {
        let ga: Vec<&[TrialRecord]> = groups(&ta, n, trials);
        let gb: Vec<&[TrialRecord]> = groups(&tb, n, trials);
        let pairs: Vec<(&[TrialRecord], &[TrialRecord])> = match (ga.len(), gb.len()) {
            (x, y) if x == y => ga.into_iter().zip(gb).collect(),
            (1, _) => gb.into_iter().map(|b| (ga[0], b)).collect(),
            (_, 1) => ga.into_iter().map(|a| (a, gb[0])).collect(),
            _ => return Err(Error::param("gamma", "gamma grids of the two sides do not line up")),
        };
        for (a, b) in pairs {
            let ratios: Vec<f64> = a
                .iter()
                .zip(b)
                .map(|(x, y)| x.evaluations as f64 / y.evaluations as f64)
                .collect();
            let evals = |rows: &[TrialRecord]| -> Vec<f64> { rows.iter().map(|r| r.evaluations as f64).collect() };
            points.push(ComparePoint {
                n,
                baseline_gamma: a[0].gamma,
                candidate_gamma: b[0].gamma,
                pairs: ratios.len(),
                baseline_successes: a.iter().filter(|r| r.success).count(),
                candidate_successes: b.iter().filter(|r| r.success).count(),
                baseline_median: median(&evals(a)).expect("trials >= 1"),
                candidate_median: median(&evals(b)).expect("trials >= 1"),
                median_ratio: median(&ratios).expect("trials >= 1"),
            });
        }
    }
    Ok(Comparison {
        baseline: baseline.algo.to_string(),
        candidate: candidate.algo.to_string(),
        seed: baseline.seed,
        points,
    })
}

/// Consecutive blocks of `trials` rows with size `n`.
fn groups(table: &TrialTable, n: usize, trials: usize) -> Vec<&[TrialRecord]> {
    let start = table.rows.iter().position(|r| r.n == n).unwrap_or(0);
    let end = table.rows.iter().rposition(|r| r.n == n).map_or(0, |e| e + 1);
    table.rows[start..end].chunks(trials).collect()
}
