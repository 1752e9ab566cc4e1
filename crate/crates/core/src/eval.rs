//! Objective functions and evaluation accounting.
//!
//! The cost unit throughout the crate is one objective call on a candidate
//! point. Cached parent fitness values are passed around explicitly and never
//! recounted.

use crate::bitstring::Bitstring;
use crate::fitness::Fitness;

/// A pseudo-Boolean objective over bitstrings of a fixed length.
pub trait Objective {
    fn n(&self) -> usize;
    fn value(&self, x: &Bitstring) -> Fitness;
}

impl<O: Objective + ?Sized> Objective for &O {
    fn n(&self) -> usize {
        (**self).n()
    }
    fn value(&self, x: &Bitstring) -> Fitness {
        (**self).value(x)
    }
}

/// Number of objective calls made so far.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct EvalCounter {
    count: u64,
}

impl EvalCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    #[inline]
    fn bump(&mut self) {
        self.count += 1;
    }
}

/// Evaluates `x` and records the call in `counter`.
#[inline]
pub fn counted_eval<O: Objective + ?Sized>(f: &O, x: &Bitstring, counter: &mut EvalCounter) -> Fitness {
    debug_assert_eq!(x.len(), f.n());
    counter.bump();
    f.value(x)
}

/// The evaluation channel used by mutation operators.
///
/// `None` tells the operator to stop immediately: the run that owns the
/// channel has exhausted its budget or has already found what it was looking
/// for. A refused call is not counted.
pub trait Evaluate {
    fn evaluate(&mut self, x: &Bitstring) -> Option<Fitness>;
}

/// Unbounded counting evaluator.
#[derive(Debug)]
pub struct Counted<O> {
    objective: O,
    counter: EvalCounter,
}

impl<O: Objective> Counted<O> {
    pub fn new(objective: O) -> Self {
        Self {
            objective,
            counter: EvalCounter::new(),
        }
    }

    pub fn counter(&self) -> EvalCounter {
        self.counter
    }

    pub fn objective(&self) -> &O {
        &self.objective
    }
}

impl<O: Objective> Evaluate for Counted<O> {
    #[inline]
    fn evaluate(&mut self, x: &Bitstring) -> Option<Fitness> {
        Some(counted_eval(&self.objective, x, &mut self.counter))
    }
}
