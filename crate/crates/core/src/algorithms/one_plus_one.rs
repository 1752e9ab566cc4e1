//! Single-individual elitist loops: (1+1) Fast-IA, (1+1) IA with static
//! hypermutation, (1+1) EA and RLS_k.

use crate::algorithms::{check_budget, Mutator, OperatorKind, RunEvaluator, RunResult};
use crate::benchmarks::Benchmark;
use crate::bitstring::Bitstring;
use crate::error::Result;
use crate::eval::Evaluate;
use crate::fitness::Fitness;
use crate::operators::{rls_k_in_place, sbm_in_place, ConstructiveMode, GammaPreset};
use crate::rng::RandomSource;

/// Result of producing one offspring.
enum Produced {
    Offspring { fitness: Fitness, evals: u64 },
    /// The evaluator ended the run after `evals` calls of this generation.
    Halted { evals: u64 },
}

impl Produced {
    fn single(f: Option<Fitness>) -> Self {
        match f {
            Some(fitness) => Produced::Offspring { fitness, evals: 1 },
            None => Produced::Halted { evals: 0 },
        }
    }
}

/// Elitist loop: keep the offspring whenever it is at least as good.
fn elitist_loop<F>(benchmark: &Benchmark, budget: u64, rng: &mut RandomSource, mut produce: F) -> Result<RunResult>
where
    F: FnMut(&Bitstring, Fitness, &mut Bitstring, &mut RunEvaluator<'_>, &mut RandomSource) -> Produced,
{
    check_budget(budget, 1)?;
    let seed = rng.seed();
    let mut ev = RunEvaluator::new(benchmark, budget);
    let mut x = Bitstring::random(benchmark.n(), rng)?;
    let mut fx = ev.evaluate(&x).expect("budget >= 1");
    let mut y = x.clone();
    let mut generations = 0;
    let mut operator_evaluations = 0;
    while !ev.is_done() {
        generations += 1;
        match produce(&x, fx, &mut y, &mut ev, rng) {
            Produced::Halted { evals } => {
                operator_evaluations += evals;
                break;
            }
            Produced::Offspring { fitness, evals } => {
                operator_evaluations += evals;
                if fitness >= fx {
                    std::mem::swap(&mut x, &mut y);
                    fx = fitness;
                }
            }
        }
    }
    Ok(RunResult {
        evaluations: ev.count(),
        generations,
        success: ev.found_optimum(),
        best_fitness: ev.best().expect("initial evaluation"),
        budget,
        seed,
        init_evaluations: 1,
        operator_evaluations,
        best_regressions: 0,
    })
}

fn hypermutation_loop(
    benchmark: &Benchmark,
    mut mutator: Mutator,
    budget: u64,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    elitist_loop(benchmark, budget, rng, |x, fx, y, ev, rng| {
        let out = mutator.apply(x, fx, ev, rng);
        let evals = out.evals_used as u64;
        if out.halted {
            return Produced::Halted { evals };
        }
        y.copy_from(&out.offspring);
        Produced::Offspring {
            fitness: out.offspring_fitness,
            evals,
        }
    })
}

/// (1+1) Fast-IA: parabolic hypermutation with first-constructive stopping,
/// where `mode` decides what stops the hypermutation. Acceptance is always
/// `f(y) >= f(x)`.
pub fn run_one_plus_one_fast_ia(
    benchmark: &Benchmark,
    gamma: GammaPreset,
    mode: ConstructiveMode,
    budget: u64,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    let mutator = Mutator::new(OperatorKind::PhypeFcm, benchmark.n(), gamma, mode)?;
    hypermutation_loop(benchmark, mutator, budget, rng)
}

/// (1+1) IA with the static hypermutation (`M = n`, evaluation after every
/// flip, first-constructive stopping).
pub fn run_one_plus_one_ia_hyp(
    benchmark: &Benchmark,
    mode: ConstructiveMode,
    budget: u64,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    let mutator = Mutator::new(OperatorKind::StaticFcm, benchmark.n(), GammaPreset::Const(1.0), mode)?;
    hypermutation_loop(benchmark, mutator, budget, rng)
}

/// (1+1) EA with standard bit mutation at rate `1/n`.
pub fn run_one_plus_one_ea(benchmark: &Benchmark, budget: u64, rng: &mut RandomSource) -> Result<RunResult> {
    run_one_plus_one_ea_with_rate(benchmark, 1.0 / benchmark.n() as f64, budget, rng)
}

/// (1+1) EA with an explicit mutation rate.
pub fn run_one_plus_one_ea_with_rate(
    benchmark: &Benchmark,
    rate: f64,
    budget: u64,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    // validate once so the loop can unwrap
    sbm_in_place(&mut Bitstring::zeros(1)?, rate, rng)?;
    elitist_loop(benchmark, budget, rng, |x, _fx, y, ev, rng| {
        y.copy_from(x);
        sbm_in_place(y, rate, rng).expect("rate validated");
        Produced::single(ev.evaluate(y))
    })
}

/// RLS_k: flips exactly `k` uniformly chosen bits per generation.
pub fn run_rls_k(benchmark: &Benchmark, k: usize, budget: u64, rng: &mut RandomSource) -> Result<RunResult> {
    rls_k_in_place(&mut Bitstring::zeros(benchmark.n())?, k, rng)?;
    elitist_loop(benchmark, budget, rng, |x, _fx, y, ev, rng| {
        y.copy_from(x);
        rls_k_in_place(y, k, rng).expect("k validated");
        Produced::single(ev.evaluate(y))
    })
}
