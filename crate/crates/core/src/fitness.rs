use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Objective value. Comparisons are exact; benchmark values are spaced far
/// enough apart that double precision represents them without collisions.
#[derive(Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Fitness(pub f64);

impl Fitness {
    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Eq for Fitness {}

impl PartialOrd for Fitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fitness {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl From<f64> for Fitness {
    fn from(v: f64) -> Self {
        Fitness(v)
    }
}

impl From<usize> for Fitness {
    fn from(v: usize) -> Self {
        Fitness(v as f64)
    }
}

impl fmt::Debug for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Fitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
