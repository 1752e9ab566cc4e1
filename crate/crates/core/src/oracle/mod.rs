//! Ground truth the simulations are checked against: exact schedule sums,
//! exact expected runtimes of the (1+1) hypermutation loops on unitation
//! functions, exact RLS_1 expectations and Pearson uniformity tests.
//!
//! On a unitation function a hypermutation only matters through the number
//! of ones of each intermediate string. With `a` ones in the parent and `j`
//! ones already flipped after `i - 1` steps, the `i`-th flip hits a one with
//! probability `(a - j) / (n - i + 1)`. Tracking (level, last evaluated
//! level) step by step therefore gives the exact law of one generation, and
//! the whole run is an absorbing chain over the `n + 1` levels.

pub mod chi_square;

use crate::benchmarks::Benchmark;
use crate::error::{Error, Result};
use crate::operators::ConstructiveMode;

pub use chi_square::{
    pearson_uniform, prefix_subset_chi_square, prefix_subset_chi_square_with, ChiSquareTest, PrefixSubsetTest,
};

/// Largest `n` the level-chain oracle accepts.
pub const MAX_ORACLE_N: usize = 14;

/// `sum_{i=1}^{n} p(i)` of the parabolic schedule, summed term by term.
pub fn exact_schedule_sum(n: usize, gamma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", "must be at least 1"));
    }
    if !(gamma > 0.0 && gamma <= 2.0) {
        return Err(Error::param("gamma", format!("need 0 < gamma <= 2, got {gamma}")));
    }
    Ok(schedule_probabilities(n, gamma).iter().sum())
}

/// The analytic upper bound `2/e + 2 gamma (ln(n/2) - 1) + gamma` on the
/// schedule sum.
pub fn schedule_sum_bound(n: usize, gamma: f64) -> f64 {
    2.0 / std::f64::consts::E + 2.0 * gamma * ((n as f64 / 2.0).ln() - 1.0) + gamma
}

fn schedule_probabilities(n: usize, gamma: f64) -> Vec<f64> {
    let inv_e = (-1.0f64).exp();
    (1..=n)
        .map(|i| {
            if i == 1 || i == n {
                inv_e
            } else if 2 * i <= n {
                (gamma / i as f64).min(1.0)
            } else {
                (gamma / (n - i) as f64).min(1.0)
            }
        })
        .collect()
}

/// Per-generation behaviour of a (1+1) hypermutation loop on a unitation
/// function, indexed by the number of ones of the current solution.
#[derive(Clone, Debug)]
pub struct LevelChain {
    n: usize,
    optimum: usize,
    /// `transitions[a][b]`: probability that a generation started at level
    /// `a` ends at level `b`.
    transitions: Vec<Vec<f64>>,
    /// Expected evaluations of one generation started at level `a`.
    expected_evals: Vec<f64>,
}

impl LevelChain {
    /// Chain of the (1+1) Fast-IA with the parabolic schedule.
    pub fn fast_ia(benchmark: &Benchmark, gamma: f64, mode: ConstructiveMode) -> Result<Self> {
        exact_schedule_sum(benchmark.n(), gamma)?;
        Self::with_probabilities(benchmark, &schedule_probabilities(benchmark.n(), gamma), mode)
    }

    /// Chain of the (1+1) IA with static hypermutation (every one of the `n`
    /// steps evaluated).
    pub fn static_hypermutation(benchmark: &Benchmark, mode: ConstructiveMode) -> Result<Self> {
        Self::with_probabilities(benchmark, &vec![1.0; benchmark.n()], mode)
    }

    /// Chain for an arbitrary evaluation probability per step.
    pub fn with_probabilities(benchmark: &Benchmark, probs: &[f64], mode: ConstructiveMode) -> Result<Self> {
        let n = benchmark.n();
        if !benchmark.kind().is_unitation() {
            return Err(Error::OracleUnsupported(format!(
                "{} is not a function of the number of ones",
                benchmark.kind()
            )));
        }
        if n > MAX_ORACLE_N {
            return Err(Error::OracleUnsupported(format!("n = {n} exceeds {MAX_ORACLE_N}")));
        }
        if probs.len() != n {
            return Err(Error::LengthMismatch {
                left: probs.len(),
                right: n,
            });
        }
        let values: Vec<_> = (0..=n)
            .map(|l| benchmark.value_at_level(l).expect("unitation"))
            .collect();
        let optimum = (0..=n)
            .find(|&l| values[l] == benchmark.optimal_fitness())
            .expect("optimal level exists");

        let mut transitions = vec![vec![0.0; n + 1]; n + 1];
        let mut expected_evals = vec![0.0; n + 1];
        for a in 0..=n {
            if a == optimum {
                transitions[a][a] = 1.0;
                continue;
            }
            let (row, evals) = one_generation(n, a, probs, &values, mode);
            transitions[a] = row;
            expected_evals[a] = evals;
        }
        Ok(Self {
            n,
            optimum,
            transitions,
            expected_evals,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Level of the global optimum (absorbing).
    pub fn optimum_level(&self) -> usize {
        self.optimum
    }

    pub fn transition(&self, from: usize, to: usize) -> f64 {
        self.transitions[from][to]
    }

    pub fn expected_evals_per_generation(&self, level: usize) -> f64 {
        self.expected_evals[level]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        self.transitions.iter().map(|r| r.iter().sum()).collect()
    }

    /// Expected evaluations until the optimum is evaluated, from each level.
    pub fn expected_remaining_evals(&self) -> Result<Vec<f64>> {
        let states: Vec<usize> = (0..=self.n).filter(|&l| l != self.optimum).collect();
        let m = states.len();
        let mut a = vec![vec![0.0; m]; m];
        let mut b = vec![0.0; m];
        for (r, &from) in states.iter().enumerate() {
            for (c, &to) in states.iter().enumerate() {
                a[r][c] = f64::from(u8::from(r == c)) - self.transitions[from][to];
            }
            b[r] = self.expected_evals[from];
        }
        let t = solve_linear(a, b)?;
        let mut out = vec![0.0; self.n + 1];
        for (k, &level) in states.iter().enumerate() {
            out[level] = t[k];
        }
        Ok(out)
    }

    /// Expected total evaluations of a run: one for the uniformly random
    /// initial string plus the expected remaining evaluations from its level.
    pub fn expected_total_evals(&self) -> Result<f64> {
        let t = self.expected_remaining_evals()?;
        let weights = binomial_half(self.n);
        Ok(1.0 + weights.iter().zip(&t).map(|(w, x)| w * x).sum::<f64>())
    }
}

/// Distribution of the accepted level and expected evaluations of one
/// generation from level `a`.
fn one_generation(
    n: usize,
    a: usize,
    probs: &[f64],
    values: &[crate::fitness::Fitness],
    mode: ConstructiveMode,
) -> (Vec<f64>, f64) {
    let parent = values[a];
    // mass[level][last + 1], last = -1 meaning nothing evaluated yet
    let mut mass = vec![vec![0.0; n + 2]; n + 1];
    let mut next = mass.clone();
    mass[a][0] = 1.0;
    let mut row = vec![0.0; n + 1];
    let mut evals = 0.0;
    for i in 1..=n {
        for r in next.iter_mut() {
            r.fill(0.0);
        }
        let remaining = (n - i + 1) as f64;
        let p = probs[i - 1];
        for level in 0..=n {
            // flipped ones among the first i - 1 flips
            let twice_j = a + i - 1;
            if twice_j < level || (twice_j - level) % 2 == 1 {
                continue;
            }
            let j = (twice_j - level) / 2;
            if j > a || j > i - 1 || i - 1 - j > n - a {
                continue;
            }
            let ones_left = (a - j) as f64;
            let down = ones_left / remaining;
            for last in 0..n + 2 {
                let m = mass[level][last];
                if m == 0.0 {
                    continue;
                }
                for (to, q) in [(level.wrapping_sub(1), down), (level + 1, 1.0 - down)] {
                    if q <= 0.0 {
                        continue;
                    }
                    let mq = m * q;
                    // evaluated at this step
                    if p > 0.0 {
                        evals += mq * p;
                        if mode.is_constructive(values[to], parent) {
                            row[to] += mq * p;
                        } else {
                            next[to][to + 1] += mq * p;
                        }
                    }
                    if p < 1.0 {
                        next[to][last] += mq * (1.0 - p);
                    }
                }
            }
        }
        std::mem::swap(&mut mass, &mut next);
    }
    // no constructive evaluation: the last evaluated string, if any, is the
    // offspring and is kept when at least as good as the parent
    for level_row in &mass {
        for (last, &m) in level_row.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            let kept = match last.checked_sub(1) {
                Some(l) if values[l] >= parent => l,
                _ => a,
            };
            row[kept] += m;
        }
    }
    (row, evals)
}

fn binomial_half(n: usize) -> Vec<f64> {
    let mut w = vec![0.0; n + 1];
    let scale = 0.5f64.powi(n as i32);
    let mut c = 1.0;
    for (k, wk) in w.iter_mut().enumerate() {
        *wk = c * scale;
        c = c * (n - k) as f64 / (k + 1) as f64;
    }
    w
}

/// Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Result<Vec<f64>> {
    let m = b.len();
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::OracleUnsupported("optimum unreachable from some level".into()));
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in col + 1..m {
            let factor = a[r][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..m {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; m];
    for r in (0..m).rev() {
        let s: f64 = (r + 1..m).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Ok(x)
}

/// Exact expected evaluations of the (1+1) Fast-IA (initial evaluation
/// included) on OneMax, Trap, Jump or Cliff with `n <= 14`.
pub fn exact_fast_ia_expected_evals(benchmark: &Benchmark, gamma: f64, mode: ConstructiveMode) -> Result<f64> {
    LevelChain::fast_ia(benchmark, gamma, mode)?.expected_total_evals()
}

/// Exact expected evaluations of the (1+1) IA with static hypermutation.
pub fn exact_ia_hyp_expected_evals(benchmark: &Benchmark, mode: ConstructiveMode) -> Result<f64> {
    LevelChain::static_hypermutation(benchmark, mode)?.expected_total_evals()
}

/// `H_m = sum_{i=1}^{m} 1/i`.
pub fn harmonic(m: usize) -> f64 {
    (1..=m).map(|i| 1.0 / i as f64).sum()
}

/// Exact expected evaluations of RLS_1 on OneMax from a uniformly random
/// start: `1 + sum_a C(n, a) 2^-n n H_(n-a)`.
pub fn rls1_onemax_expected_evals(n: usize) -> f64 {
    let w = binomial_half(n);
    let mut h = vec![0.0; n + 1];
    for m in 1..=n {
        h[m] = h[m - 1] + 1.0 / m as f64;
    }
    1.0 + (0..=n).map(|a| w[a] * n as f64 * h[n - a]).sum::<f64>()
}

/// Exact expected evaluations of RLS_1 on LeadingOnes from a uniformly
/// random start: every level below `n` is visited with probability 1/2 and
/// left after `n` expected steps, so `1 + n^2 / 2`.
pub fn rls1_leading_ones_expected_evals(n: usize) -> f64 {
    1.0 + (n * n) as f64 / 2.0
}
