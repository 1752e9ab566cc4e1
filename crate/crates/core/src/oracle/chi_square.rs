//! Pearson goodness-of-fit tests against the uniform distribution.

use std::collections::HashMap;

use rand::Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::operators::FlipOrder;

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

impl ChiSquareTest {
    /// Whether uniformity is not rejected at level `alpha`.
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Pearson test of `counts` against equal expected counts.
pub fn pearson_uniform(counts: &[u64]) -> ChiSquareTest {
    let k = counts.len();
    let total: u64 = counts.iter().sum();
    if k <= 1 || total == 0 {
        return ChiSquareTest {
            statistic: 0.0,
            degrees_of_freedom: 0,
            p_value: 1.0,
        };
    }
    let expected = total as f64 / k as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((k - 1) as f64).expect("positive degrees of freedom");
    ChiSquareTest {
        statistic,
        degrees_of_freedom: k - 1,
        p_value: dist.sf(statistic),
    }
}

/// Outcome of binning the first `k` flip positions of many hypermutations.
#[derive(Clone, Debug, PartialEq)]
pub struct PrefixSubsetTest {
    pub n: usize,
    pub k: usize,
    pub bins: usize,
    pub samples: usize,
    pub test: ChiSquareTest,
}

impl PrefixSubsetTest {
    pub fn passes(&self) -> bool {
        self.test.passes(0.01)
    }
}

/// Draws `samples` flip orders the way the fast hypermutation does and
/// tests the set of the first `k` flipped positions for uniformity over all
/// `C(n, k)` subsets.
///
/// For `2k <= n` the prefix is drawn from the front; otherwise the operator
/// draws the last `n - k` steps from the back and the prefix is their
/// complement, so this is what gets sampled here as well.
pub fn prefix_subset_chi_square<R: Rng + ?Sized>(
    n: usize,
    k: usize,
    samples: usize,
    rng: &mut R,
) -> Result<PrefixSubsetTest> {
    let mut order = FlipOrder::new(n);
    prefix_subset_chi_square_with(n, k, samples, |prefix: &mut Vec<usize>| {
        order.reset();
        prefix.clear();
        if 2 * k <= n {
            prefix.extend((0..k).map(|_| order.next_front(rng)));
        } else {
            let mut in_back = vec![false; n];
            for _ in 0..n - k {
                in_back[order.next_back(rng)] = true;
            }
            prefix.extend((0..n).filter(|&p| !in_back[p]));
        }
    })
}

/// Same test with a caller-supplied sampler that writes the `k` prefix
/// positions into the buffer.
pub fn prefix_subset_chi_square_with<S>(n: usize, k: usize, samples: usize, mut sampler: S) -> Result<PrefixSubsetTest>
where
    S: FnMut(&mut Vec<usize>),
{
    if n == 0 || n > 24 {
        return Err(Error::param("n", format!("need 1 <= n <= 24, got {n}")));
    }
    if k == 0 || k > n {
        return Err(Error::param("k", format!("need 1 <= k <= n, got {k}")));
    }
    let index = subset_index(n, k);
    let mut counts = vec![0u64; index.len()];
    let mut prefix = Vec::with_capacity(n);
    for _ in 0..samples {
        sampler(&mut prefix);
        let mut mask = 0u32;
        for &p in &prefix {
            if p >= n || mask >> p & 1 == 1 {
                return Err(Error::param("sampler", "returned a repeated or out-of-range position"));
            }
            mask |= 1 << p;
        }
        let bin = index
            .get(&mask)
            .ok_or_else(|| Error::param("sampler", format!("expected {k} positions, got {}", prefix.len())))?;
        counts[*bin] += 1;
    }
    Ok(PrefixSubsetTest {
        n,
        k,
        bins: counts.len(),
        samples,
        test: pearson_uniform(&counts),
    })
}

fn subset_index(n: usize, k: usize) -> HashMap<u32, usize> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect()
}
