//! Immune-inspired randomized search heuristics on pseudo-Boolean functions.
//!
//! The crate provides:
//!
//! * [`operators`]: hypermutations whose intermediate strings are evaluated
//!   with a parabolic probability schedule, in a first-constructive
//!   ([`FastHypermutation::first_constructive`]) and a best-of
//!   ([`FastHypermutation::best_of`]) flavour, next to the classical static
//!   hypermutation, standard bit mutation and k-bit local search mutation;
//! * [`algorithms`]: the (1+1) Fast-IA, the (1+1) IA with static
//!   hypermutation, the (1+1) EA, RLS_k and Fast Opt-IA with cloning and
//!   hybrid ageing;
//! * [`benchmarks`]: OneMax, LeadingOnes, Trap, Jump, Cliff and HiddenPath;
//! * [`oracle`]: exact expected runtimes on unitation functions, exact
//!   schedule sums and uniformity tests used to validate the simulations;
//! * [`lab`]: seeded, parallel trial batches, scaling-law fits and CSV/JSON
//!   export, driven by the `immuno-opt` command line tool.
//!
//! ```
//! use immuno_opt::prelude::*;
//!
//! let onemax = Benchmark::one_max(64).unwrap();
//! let mut rng = RandomSource::from_seed(7);
//! let run = run_one_plus_one_fast_ia(&onemax, GammaPreset::InvLnN, ConstructiveMode::Geq, 1_000_000, &mut rng)
//!     .unwrap();
//! assert!(run.success);
//! ```

pub mod algorithms;
pub mod benchmarks;
pub mod bitstring;
pub mod error;
pub mod eval;
pub mod fitness;
pub mod lab;
pub mod operators;
pub mod oracle;
pub mod rng;

pub use error::{Error, Result};
pub use operators::FastHypermutation;

pub mod prelude {
    pub use crate::algorithms::{
        run_fast_opt_ia, run_one_plus_one_ea, run_one_plus_one_fast_ia, run_one_plus_one_ia_hyp, run_rls_k,
        OperatorKind, OptIaConfig, RunResult,
    };
    pub use crate::benchmarks::{Benchmark, BenchmarkKind};
    pub use crate::bitstring::{hamming_distance, random_bitstring, Bitstring};
    pub use crate::eval::{counted_eval, Counted, EvalCounter, Evaluate, Objective};
    pub use crate::fitness::Fitness;
    pub use crate::operators::{
        phype_bm, phype_fcm, static_hmp_fcm, ConstructiveMode, FastHypermutation, GammaPreset, MutationOutcome,
        MutationPotential, ParabolicSchedule,
    };
    pub use crate::rng::RandomSource;
}
