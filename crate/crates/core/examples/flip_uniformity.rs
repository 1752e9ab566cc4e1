//! Chi-square check that the first k flipped positions form a uniform
//! k-subset.

use immuno_opt::oracle::prefix_subset_chi_square;
use immuno_opt::prelude::*;

fn main() -> immuno_opt::Result<()> {
    let mut rng = RandomSource::from_seed(3);
    for (n, k) in [(6, 2), (8, 3), (8, 6)] {
        let t = prefix_subset_chi_square(n, k, 50_000, &mut rng)?;
        println!(
            "n = {n}, k = {k}: {} subsets, chi2 = {:.2}, p = {:.3} -> {}",
            t.bins,
            t.test.statistic,
            t.test.p_value,
            if t.passes() { "uniform" } else { "not uniform" }
        );
    }
    Ok(())
}
