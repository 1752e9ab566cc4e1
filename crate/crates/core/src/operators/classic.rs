//! Standard bit mutation and k-bit random local search mutation.

use rand::seq::index;
use rand::Rng;

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};

/// Flips each bit of `parent` independently with probability `rate`.
pub fn sbm<R: Rng + ?Sized>(parent: &Bitstring, rate: f64, rng: &mut R) -> Result<Bitstring> {
    let mut child = parent.clone();
    sbm_in_place(&mut child, rate, rng)?;
    Ok(child)
}

/// In-place standard bit mutation. Flipped positions are found by geometric
/// skipping, so the cost is proportional to the number of flips.
pub fn sbm_in_place<R: Rng + ?Sized>(x: &mut Bitstring, rate: f64, rng: &mut R) -> Result<()> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::param("rate", format!("need 0 <= rate <= 1, got {rate}")));
    }
    if rate == 0.0 {
        return Ok(());
    }
    if rate == 1.0 {
        x.complement_in_place();
        return Ok(());
    }
    let n = x.len();
    let log_miss = (-rate).ln_1p();
    let mut pos = 0usize;
    loop {
        let u: f64 = 1.0 - rng.random::<f64>();
        let skip = (u.ln() / log_miss).floor();
        if skip >= (n - pos) as f64 {
            return Ok(());
        }
        pos += skip as usize;
        x.flip(pos);
        pos += 1;
        if pos >= n {
            return Ok(());
        }
    }
}

/// Flips a uniformly random set of exactly `k` positions.
pub fn rls_k_mutation<R: Rng + ?Sized>(parent: &Bitstring, k: usize, rng: &mut R) -> Result<Bitstring> {
    let mut child = parent.clone();
    rls_k_in_place(&mut child, k, rng)?;
    Ok(child)
}

pub fn rls_k_in_place<R: Rng + ?Sized>(x: &mut Bitstring, k: usize, rng: &mut R) -> Result<()> {
    let n = x.len();
    if k == 0 || k > n {
        return Err(Error::param("k", format!("need 1 <= k <= n={n}, got {k}")));
    }
    for pos in index::sample(rng, n, k) {
        x.flip(pos);
    }
    Ok(())
}
