//! Seeded random streams.
//!
//! Every trial owns one [`RandomSource`]. Per-trial seeds are derived from a
//! master seed and the trial index with the SplitMix64 finalizer, whose
//! avalanche behaviour makes neighbouring indices produce unrelated seeds.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

/// A deterministic pseudo-random stream (xoshiro256++) tagged with its seed.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    inner: Xoshiro256PlusPlus,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        Self {
            seed,
            inner: Xoshiro256PlusPlus::seed_from_u64(seed),
        }
    }

    /// Stream for trial `index` of an experiment seeded with `master`.
    pub fn for_trial(master: u64, index: u64) -> Self {
        Self::from_seed(trial_seed(master, index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }
}

impl RngCore for RandomSource {
    #[inline]
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    #[inline]
    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// SplitMix64 output function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under master seed `master`; a pure function of both.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    mix64(master ^ mix64(index))
}
