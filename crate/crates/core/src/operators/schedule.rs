//! The parabolic evaluation schedule.
//!
//! After the `i`-th bit flip of a hypermutation the current string is
//! evaluated with probability
//!
//! ```text
//! p(1) = p(n) = 1/e
//! p(i) = min(1, gamma / i)        for 1 < i <= n/2
//! p(i) = min(1, gamma / (n - i))  for n/2 < i < n
//! ```
//!
//! so that evaluations concentrate next to the parent and next to its
//! complement, where a specific point at Hamming distance `i` is hit with
//! probability `1 / C(n, i)`.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INV_E: f64 = 1.0 / std::f64::consts::E;

/// Below this bound a block is sampled by geometric skipping.
const SKIP_THRESHOLD: f64 = 0.25;

/// A contiguous run of steps whose probabilities are within a factor of two.
#[derive(Clone, Debug)]
struct Block {
    first: usize,
    last: usize,
    bound: f64,
    /// `ln(1 - bound)`, cached for geometric skips.
    log_miss: f64,
}

#[derive(Clone, Debug)]
pub struct ParabolicSchedule {
    n: usize,
    gamma: f64,
    probs: Vec<f64>,
    blocks: Vec<Block>,
}

impl ParabolicSchedule {
    /// Schedule for strings of length `n >= 1` with `0 < gamma <= 2`.
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        if !(gamma > 0.0 && gamma <= 2.0) {
            return Err(Error::param("gamma", format!("need 0 < gamma <= 2, got {gamma}")));
        }
        let probs: Vec<f64> = (1..=n).map(|i| raw_probability(n, gamma, i)).collect();
        let blocks = build_blocks(&probs);
        Ok(Self {
            n,
            gamma,
            probs,
            blocks,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Evaluation probability after step `i`, `1 <= i <= n`.
    pub fn probability(&self, i: usize) -> Result<f64> {
        if i == 0 || i > self.n {
            return Err(Error::param("i", format!("step {i} outside 1..={}", self.n)));
        }
        Ok(self.probs[i - 1])
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probs
    }

    /// Expected number of evaluations in a hypermutation that runs all `n`
    /// steps.
    pub fn expected_evaluations(&self) -> f64 {
        self.probs.iter().sum()
    }

    /// Smallest step `> after` whose evaluation coin comes up heads, or
    /// `None` if no later step is evaluated.
    ///
    /// Each step is an independent Bernoulli(p(i)) trial. Blocks with small
    /// probabilities are thinned: candidate steps are drawn with the block's
    /// upper bound `q` by geometric skipping and kept with probability
    /// `p(i) / q`, which reproduces the per-step law exactly.
    pub fn next_evaluated<R: Rng + ?Sized>(&self, after: usize, rng: &mut R) -> Option<usize> {
        if after >= self.n {
            return None;
        }
        let start = self.blocks.partition_point(|b| b.last <= after);
        for block in &self.blocks[start..] {
            let from = block.first.max(after + 1);
            if block.bound >= SKIP_THRESHOLD {
                for i in from..=block.last {
                    let p = self.probs[i - 1];
                    if p >= 1.0 || rng.random::<f64>() < p {
                        return Some(i);
                    }
                }
                continue;
            }
            let mut i = from - 1;
            loop {
                // failures before the next candidate
                let u: f64 = 1.0 - rng.random::<f64>();
                let skip = (u.ln() / block.log_miss).floor();
                if skip >= (block.last - i) as f64 {
                    break;
                }
                i += skip as usize + 1;
                if rng.random::<f64>() * block.bound < self.probs[i - 1] {
                    return Some(i);
                }
            }
        }
        None
    }
}

fn raw_probability(n: usize, gamma: f64, i: usize) -> f64 {
    if i == 1 || i == n {
        INV_E
    } else if 2 * i <= n {
        (gamma / i as f64).min(1.0)
    } else {
        (gamma / (n - i) as f64).min(1.0)
    }
}

fn build_blocks(probs: &[f64]) -> Vec<Block> {
    let mut blocks = Vec::new();
    let mut first = 1;
    while first <= probs.len() {
        let (mut lo, mut hi) = (probs[first - 1], probs[first - 1]);
        let mut last = first;
        while last < probs.len() {
            let p = probs[last];
            let (nlo, nhi) = (lo.min(p), hi.max(p));
            if nhi > 2.0 * nlo {
                break;
            }
            lo = nlo;
            hi = nhi;
            last += 1;
        }
        blocks.push(Block {
            first,
            last,
            bound: hi,
            log_miss: (-hi).ln_1p(),
        });
        first = last + 1;
    }
    blocks
}

/// Named rules choosing `gamma` as a function of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum GammaPreset {
    /// A fixed value.
    Const(f64),
    /// `1 / ln n`
    InvLnN,
    /// `1 / (4 ln n)`
    QuarterInvLnN,
    /// `1 / (n ln^2 n)`
    InvNLog2Sq,
}

impl GammaPreset {
    pub const NAMES: &'static str = "const(<c>) or a number, inv_ln_n, quarter_inv_ln_n, inv_n_log2_sq";

    pub fn gamma(self, n: usize) -> Result<f64> {
        let ln = (n as f64).ln();
        let g = match self {
            GammaPreset::Const(c) => c,
            GammaPreset::InvLnN => 1.0 / ln,
            GammaPreset::QuarterInvLnN => 1.0 / (4.0 * ln),
            GammaPreset::InvNLog2Sq => 1.0 / (n as f64 * ln * ln),
        };
        if !(g > 0.0 && g <= 2.0) {
            return Err(Error::param(
                "gamma",
                format!("preset {self} gives gamma={g} at n={n}, outside (0, 2]"),
            ));
        }
        Ok(g)
    }

    pub fn schedule(self, n: usize) -> Result<ParabolicSchedule> {
        ParabolicSchedule::new(n, self.gamma(n)?)
    }
}

impl fmt::Display for GammaPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaPreset::Const(c) => write!(f, "const({c})"),
            GammaPreset::InvLnN => f.write_str("inv_ln_n"),
            GammaPreset::QuarterInvLnN => f.write_str("quarter_inv_ln_n"),
            GammaPreset::InvNLog2Sq => f.write_str("inv_n_log2_sq"),
        }
    }
}

impl FromStr for GammaPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let unknown = || Error::UnknownName {
            kind: "gamma preset",
            value: s.to_string(),
            options: GammaPreset::NAMES.to_string(),
        };
        match t {
            "inv_ln_n" => return Ok(GammaPreset::InvLnN),
            "quarter_inv_ln_n" => return Ok(GammaPreset::QuarterInvLnN),
            "inv_n_log2_sq" => return Ok(GammaPreset::InvNLog2Sq),
            _ => {}
        }
        let inner = t
            .strip_prefix("const(")
            .and_then(|r| r.strip_suffix(')'))
            .unwrap_or(t);
        inner.trim().parse::<f64>().map(GammaPreset::Const).map_err(|_| unknown())
    }
}
