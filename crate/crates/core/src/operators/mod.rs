//! Mutation operators.

pub mod classic;
pub mod hypermutation;
pub mod schedule;

pub use classic::{rls_k_in_place, rls_k_mutation, sbm, sbm_in_place};
pub use hypermutation::{
    phype_bm, phype_fcm, static_hmp_fcm, ConstructiveMode, FastHypermutation, FlipOrder, MutationOutcome,
    MutationPotential, StaticHypermutation,
};
pub use schedule::{GammaPreset, ParabolicSchedule};
