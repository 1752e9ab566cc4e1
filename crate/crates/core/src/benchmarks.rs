//! Pseudo-Boolean benchmark functions.
//!
//! Trap and HiddenPath carry two choices that the usual textbook
//! definitions leave open:
//!
//! * `Trap(0^n) = n + 1`, every other point scores like OneMax.
//! * HiddenPath uses `log2 n` and a default offset `epsilon = 1/2`. Its cases
//!   are tried top to bottom and the first match wins. The short path
//!   `1^(n-k) 0^k`, `5 <= k <= log2(n) + 1`, ends at `k = floor(log2 n) + 1`,
//!   whose value `n - eps + eps*k/log2(n)` exceeds `n`. That end point is the
//!   unique global maximum. The points with `n - 1` zeros (value `n`) are the
//!   local optima at the top of the ZeroMax slope.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::eval::Objective;
use crate::fitness::Fitness;

pub const DEFAULT_HIDDEN_PATH_EPSILON: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkKind {
    OneMax,
    LeadingOnes,
    Trap,
    Jump,
    Cliff,
    HiddenPath,
}

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 6] = [
        BenchmarkKind::OneMax,
        BenchmarkKind::LeadingOnes,
        BenchmarkKind::Trap,
        BenchmarkKind::Jump,
        BenchmarkKind::Cliff,
        BenchmarkKind::HiddenPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::OneMax => "onemax",
            BenchmarkKind::LeadingOnes => "leadingones",
            BenchmarkKind::Trap => "trap",
            BenchmarkKind::Jump => "jump",
            BenchmarkKind::Cliff => "cliff",
            BenchmarkKind::HiddenPath => "hiddenpath",
        }
    }

    /// Whether the value depends only on the number of 1-bits.
    pub fn is_unitation(self) -> bool {
        matches!(
            self,
            BenchmarkKind::OneMax | BenchmarkKind::Trap | BenchmarkKind::Jump | BenchmarkKind::Cliff
        )
    }

    pub fn takes_gap(self) -> bool {
        matches!(self, BenchmarkKind::Jump | BenchmarkKind::Cliff)
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_lowercase();
        BenchmarkKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| Error::UnknownName {
                kind: "benchmark",
                value: s.to_string(),
                options: BenchmarkKind::ALL.map(|k| k.name()).join(", "),
            })
    }
}

/// A benchmark instance: kind, length and kind-specific parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Benchmark {
    kind: BenchmarkKind,
    n: usize,
    d: Option<usize>,
    epsilon: Option<f64>,
}

impl Benchmark {
    /// Validating constructor. `d` must be given exactly for Jump and Cliff,
    /// `epsilon` may only be given for HiddenPath (default 1/2).
    pub fn new(kind: BenchmarkKind, n: usize, d: Option<usize>, epsilon: Option<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("n", "must be at least 1"));
        }
        match (kind.takes_gap(), d) {
            (true, None) => return Err(Error::param("d", format!("{kind} requires a gap parameter d"))),
            (false, Some(_)) => return Err(Error::param("d", format!("{kind} takes no gap parameter"))),
            (true, Some(d)) if d < 1 || 2 * d >= n => {
                return Err(Error::param("d", format!("need 1 <= d < n/2, got d={d}, n={n}")))
            }
            _ => {}
        }
        let epsilon = match (kind, epsilon) {
            (BenchmarkKind::HiddenPath, eps) => {
                if n < 32 {
                    return Err(Error::param("n", format!("hiddenpath needs n >= 32, got {n}")));
                }
                let eps = eps.unwrap_or(DEFAULT_HIDDEN_PATH_EPSILON);
                if !(eps > 0.0 && eps < 1.0) {
                    return Err(Error::param("epsilon", format!("need 0 < epsilon < 1, got {eps}")));
                }
                Some(eps)
            }
            (_, Some(_)) => return Err(Error::param("epsilon", format!("{kind} takes no epsilon"))),
            (_, None) => None,
        };
        Ok(Self { kind, n, d, epsilon })
    }

    pub fn one_max(n: usize) -> Result<Self> {
        Self::new(BenchmarkKind::OneMax, n, None, None)
    }

    pub fn leading_ones(n: usize) -> Result<Self> {
        Self::new(BenchmarkKind::LeadingOnes, n, None, None)
    }

    pub fn trap(n: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Trap, n, None, None)
    }

    pub fn jump(n: usize, d: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Jump, n, Some(d), None)
    }

    pub fn cliff(n: usize, d: usize) -> Result<Self> {
        Self::new(BenchmarkKind::Cliff, n, Some(d), None)
    }

    pub fn hidden_path(n: usize, epsilon: f64) -> Result<Self> {
        Self::new(BenchmarkKind::HiddenPath, n, None, Some(epsilon))
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gap(&self) -> Option<usize> {
        self.d
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    /// Value of a unitation benchmark at a string with `ones` 1-bits.
    /// `None` for LeadingOnes and HiddenPath.
    pub fn value_at_level(&self, ones: usize) -> Option<Fitness> {
        let n = self.n;
        debug_assert!(ones <= n);
        let v = match self.kind {
            BenchmarkKind::OneMax => ones as f64,
            BenchmarkKind::Trap => {
                if ones == 0 {
                    (n + 1) as f64
                } else {
                    ones as f64
                }
            }
            BenchmarkKind::Jump => {
                let d = self.d.expect("validated");
                if ones <= n - d || ones == n {
                    (d + ones) as f64
                } else {
                    (n - ones) as f64
                }
            }
            BenchmarkKind::Cliff => {
                let d = self.d.expect("validated");
                if ones <= n - d {
                    ones as f64
                } else {
                    ones as f64 - d as f64 + 0.5
                }
            }
            BenchmarkKind::LeadingOnes | BenchmarkKind::HiddenPath => return None,
        };
        Some(Fitness(v))
    }

    /// The largest attainable value.
    pub fn optimal_fitness(&self) -> Fitness {
        let n = self.n;
        match self.kind {
            BenchmarkKind::OneMax | BenchmarkKind::LeadingOnes => Fitness(n as f64),
            BenchmarkKind::Trap | BenchmarkKind::Jump | BenchmarkKind::Cliff => {
                let level = if self.kind == BenchmarkKind::Trap { 0 } else { n };
                self.value_at_level(level).expect("unitation")
            }
            BenchmarkKind::HiddenPath => Fitness(self.short_path_value(hidden_path_end(n))),
        }
    }

    /// Whether `x` attains the unique maximal value.
    pub fn is_global_optimum(&self, x: &Bitstring) -> bool {
        debug_assert_eq!(x.len(), self.n);
        let n = self.n;
        match self.kind {
            BenchmarkKind::Trap => x.count_ones() == 0,
            BenchmarkKind::HiddenPath => {
                let k = hidden_path_end(n);
                x.count_zeros() == k && x.leading_ones() == n - k
            }
            _ => x.count_ones() == n,
        }
    }

    fn short_path_value(&self, k: usize) -> f64 {
        let eps = self.epsilon.expect("validated");
        let n = self.n as f64;
        n - eps + eps * k as f64 / n.log2()
    }

    fn hidden_path_value(&self, x: &Bitstring) -> f64 {
        let n = self.n;
        let eps = self.epsilon.expect("validated");
        let zeros = x.count_zeros();
        // x = 1^(n-k) 0^k  <=>  all zeros sit in the suffix
        let is_suffix_block = x.leading_ones() == n - zeros;
        if zeros == 5 && !is_suffix_block {
            let tail_zeros = (n - 5..n).filter(|&i| !x.get(i)).count();
            return n as f64 - eps + tail_zeros as f64 / n as f64;
        }
        if zeros < 5 || zeros == n {
            return 0.0;
        }
        if is_suffix_block && zeros as f64 <= (n as f64).log2() + 1.0 {
            return self.short_path_value(zeros);
        }
        if zeros == n - 1 {
            return n as f64;
        }
        zeros as f64
    }
}

/// Length `k` of the last short-path point `1^(n-k) 0^k`.
pub fn hidden_path_end(n: usize) -> usize {
    (n as f64).log2().floor() as usize + 1
}

impl Objective for Benchmark {
    fn n(&self) -> usize {
        self.n
    }

    fn value(&self, x: &Bitstring) -> Fitness {
        debug_assert_eq!(x.len(), self.n);
        match self.kind {
            BenchmarkKind::LeadingOnes => Fitness(x.leading_ones() as f64),
            BenchmarkKind::HiddenPath => Fitness(self.hidden_path_value(x)),
            _ => self.value_at_level(x.count_ones()).expect("unitation"),
        }
    }
}

/// Count of 1-bits.
pub fn one_max(x: &Bitstring) -> Fitness {
    Fitness(x.count_ones() as f64)
}

/// Length of the all-ones prefix.
pub fn leading_ones(x: &Bitstring) -> Fitness {
    Fitness(x.leading_ones() as f64)
}

pub fn trap(x: &Bitstring) -> Fitness {
    Benchmark::trap(x.len()).expect("n >= 1").value(x)
}

pub fn jump(x: &Bitstring, d: usize) -> Result<Fitness> {
    Ok(Benchmark::jump(x.len(), d)?.value(x))
}

pub fn cliff(x: &Bitstring, d: usize) -> Result<Fitness> {
    Ok(Benchmark::cliff(x.len(), d)?.value(x))
}

pub fn hidden_path(x: &Bitstring, epsilon: f64) -> Result<Fitness> {
    Ok(Benchmark::hidden_path(x.len(), epsilon)?.value(x))
}
