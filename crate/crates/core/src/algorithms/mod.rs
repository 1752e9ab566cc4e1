//! Complete optimization loops.
//!
//! Every run counts objective calls through a [`RunEvaluator`], which
//! enforces the evaluation budget at each single call and ends the run the
//! moment a global optimum is evaluated. The reported runtime is therefore
//! the number of evaluations up to and including the first evaluation of an
//! optimum.

mod one_plus_one;
mod opt_ia;

use serde::{Deserialize, Serialize};

use crate::benchmarks::Benchmark;
use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::eval::{counted_eval, EvalCounter, Evaluate};
use crate::fitness::Fitness;
use crate::operators::{
    ConstructiveMode, FastHypermutation, GammaPreset, MutationOutcome, MutationPotential, StaticHypermutation,
};
use crate::rng::RandomSource;

pub use one_plus_one::{run_one_plus_one_ea, run_one_plus_one_ea_with_rate, run_one_plus_one_fast_ia, run_one_plus_one_ia_hyp, run_rls_k};
pub use opt_ia::{hybrid_ageing_step, run_fast_opt_ia, truncation_selection, Individual, OptIa, OptIaConfig};

/// Outcome of one optimization run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub evaluations: u64,
    pub generations: u64,
    pub success: bool,
    pub best_fitness: Fitness,
    pub budget: u64,
    pub seed: u64,
    /// Evaluations of uniformly random points (initialization and refills).
    pub init_evaluations: u64,
    /// Evaluations reported by mutation operators.
    pub operator_evaluations: u64,
    /// Generations after which the best fitness in the population was lower
    /// than after the previous one.
    pub best_regressions: u64,
}

/// Budgeted, optimum-aware evaluation channel owned by one run.
#[derive(Debug)]
pub struct RunEvaluator<'a> {
    benchmark: &'a Benchmark,
    counter: EvalCounter,
    budget: u64,
    optimum: Fitness,
    found: bool,
    best: Option<Fitness>,
}

impl<'a> RunEvaluator<'a> {
    pub fn new(benchmark: &'a Benchmark, budget: u64) -> Self {
        Self {
            benchmark,
            counter: EvalCounter::new(),
            budget,
            optimum: benchmark.optimal_fitness(),
            found: false,
            best: None,
        }
    }

    pub fn count(&self) -> u64 {
        self.counter.count()
    }

    pub fn found_optimum(&self) -> bool {
        self.found
    }

    pub fn exhausted(&self) -> bool {
        self.counter.count() >= self.budget
    }

    /// Whether the run should stop.
    pub fn is_done(&self) -> bool {
        self.found || self.exhausted()
    }

    pub fn best(&self) -> Option<Fitness> {
        self.best
    }
}

impl Evaluate for RunEvaluator<'_> {
    #[inline]
    fn evaluate(&mut self, x: &Bitstring) -> Option<Fitness> {
        if self.is_done() {
            return None;
        }
        let f = counted_eval(self.benchmark, x, &mut self.counter);
        self.best = self.best.max(Some(f));
        if f == self.optimum && self.benchmark.is_global_optimum(x) {
            self.found = true;
        }
        Some(f)
    }
}

/// Which hypermutation a population-based run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    PhypeFcm,
    PhypeBm,
    StaticFcm,
}

impl OperatorKind {
    pub const ALL: [OperatorKind; 3] = [OperatorKind::PhypeFcm, OperatorKind::PhypeBm, OperatorKind::StaticFcm];

    pub fn name(self) -> &'static str {
        match self {
            OperatorKind::PhypeFcm => "phype_fcm",
            OperatorKind::PhypeBm => "phype_bm",
            OperatorKind::StaticFcm => "static_fcm",
        }
    }
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OperatorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        OperatorKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::UnknownName {
                kind: "operator",
                value: s.to_string(),
                options: OperatorKind::ALL.map(|k| k.name()).join(", "),
            })
    }
}

/// A configured hypermutation with its scratch space.
#[derive(Clone, Debug)]
pub(crate) enum Mutator {
    Fcm(FastHypermutation, ConstructiveMode),
    Bm(FastHypermutation),
    Static(StaticHypermutation, ConstructiveMode),
}

impl Mutator {
    pub(crate) fn new(kind: OperatorKind, n: usize, gamma: GammaPreset, mode: ConstructiveMode) -> Result<Self> {
        Ok(match kind {
            OperatorKind::PhypeFcm => Mutator::Fcm(FastHypermutation::new(gamma.schedule(n)?), mode),
            OperatorKind::PhypeBm => Mutator::Bm(FastHypermutation::new(gamma.schedule(n)?)),
            OperatorKind::StaticFcm => {
                Mutator::Static(StaticHypermutation::new(n, MutationPotential::default())?, mode)
            }
        })
    }

    #[inline]
    pub(crate) fn apply(
        &mut self,
        parent: &Bitstring,
        parent_fitness: Fitness,
        eval: &mut RunEvaluator<'_>,
        rng: &mut RandomSource,
    ) -> MutationOutcome {
        match self {
            Mutator::Fcm(op, mode) => op.first_constructive(parent, parent_fitness, eval, *mode, rng),
            Mutator::Bm(op) => op.best_of(parent, parent_fitness, eval, rng),
            Mutator::Static(op, mode) => op.first_constructive(parent, parent_fitness, eval, *mode, rng),
        }
    }
}

fn check_budget(budget: u64, at_least: u64) -> Result<()> {
    if budget < at_least {
        return Err(Error::param("budget", format!("need budget >= {at_least}, got {budget}")));
    }
    Ok(())
}
