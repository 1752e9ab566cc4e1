//! Hypermutations with mutation potential.
//!
//! A hypermutation flips distinct bits of the parent one at a time in a
//! uniformly random order. The fast variants evaluate the intermediate string
//! after step `i` only with the parabolic probability `p(i)`; the static
//! variant evaluates after every step.
//!
//! The fast variants never walk through unevaluated steps. The flip order is
//! a uniform permutation whose slots are filled lazily from both ends: the
//! string after step `i <= n/2` is the parent with the first `i` slots
//! flipped, and the string after step `i > n/2` is the complement of the
//! parent with the last `n - i` slots flipped back. Filling any slot with a
//! uniform draw from the still-unassigned positions yields a uniform
//! permutation whatever order the slots are filled in, so the induced law is
//! that of the step-by-step process.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::eval::Evaluate;
use crate::fitness::Fitness;
use crate::operators::schedule::ParabolicSchedule;

/// What counts as a constructive mutation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConstructiveMode {
    /// At least as good as the parent.
    Geq,
    /// Strictly better than the parent.
    #[default]
    Gt,
}

impl ConstructiveMode {
    #[inline]
    pub fn is_constructive(self, candidate: Fitness, parent: Fitness) -> bool {
        match self {
            ConstructiveMode::Geq => candidate >= parent,
            ConstructiveMode::Gt => candidate > parent,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConstructiveMode::Geq => "geq",
            ConstructiveMode::Gt => "gt",
        }
    }
}

impl std::str::FromStr for ConstructiveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "geq" | ">=" | "ge" => Ok(ConstructiveMode::Geq),
            "gt" | ">" => Ok(ConstructiveMode::Gt),
            _ => Err(Error::UnknownName {
                kind: "mode",
                value: s.to_string(),
                options: "geq, gt".to_string(),
            }),
        }
    }
}

/// Result of one hypermutation.
#[derive(Clone, Debug, PartialEq)]
pub struct MutationOutcome {
    pub offspring: Bitstring,
    /// Fitness of `offspring`; the parent's cached value when nothing was
    /// evaluated.
    pub offspring_fitness: Fitness,
    pub evals_used: usize,
    pub constructive_found: bool,
    /// Best fitness among the evaluated intermediate strings.
    pub best_eval_fitness: Option<Fitness>,
    /// Step at which a first-constructive-mutation operator stopped.
    pub stop_step: Option<usize>,
    /// The evaluator refused a call; the owning run is over and the rest of
    /// the outcome is meaningless.
    pub halted: bool,
}

impl MutationOutcome {
    fn unchanged(parent: &Bitstring, parent_fitness: Fitness) -> Self {
        Self {
            offspring: parent.clone(),
            offspring_fitness: parent_fitness,
            evals_used: 0,
            constructive_found: false,
            best_eval_fitness: None,
            stop_step: None,
            halted: false,
        }
    }

    fn halted(parent: &Bitstring, parent_fitness: Fitness, evals_used: usize) -> Self {
        Self {
            evals_used,
            halted: true,
            ..Self::unchanged(parent, parent_fitness)
        }
    }
}

/// A uniformly random order of the `n` positions, assigned slot by slot from
/// either end.
#[derive(Clone, Debug)]
pub struct FlipOrder {
    slots: Vec<usize>,
    front: usize,
    back: usize,
}

impl FlipOrder {
    pub fn new(n: usize) -> Self {
        Self {
            slots: (0..n).collect(),
            front: 0,
            back: n,
        }
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    /// Forgets all assignments. The slot array stays a permutation, which is
    /// all later uniform draws need.
    #[inline]
    pub fn reset(&mut self) {
        self.front = 0;
        self.back = self.slots.len();
    }

    /// Position flipped at the next front step (step `front + 1`).
    #[inline]
    pub fn next_front<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        assert!(self.front < self.back, "all slots assigned");
        let j = rng.random_range(self.front..self.back);
        self.slots.swap(self.front, j);
        self.front += 1;
        self.slots[self.front - 1]
    }

    /// Position flipped at the latest still-unassigned back step (step
    /// `back`).
    #[inline]
    pub fn next_back<R: Rng + ?Sized>(&mut self, rng: &mut R) -> usize {
        assert!(self.front < self.back, "all slots assigned");
        let j = rng.random_range(self.front..self.back);
        self.slots.swap(self.back - 1, j);
        self.back -= 1;
        self.slots[self.back]
    }

    /// Position flipped at step `step` (1-based), if assigned.
    pub fn position_at(&self, step: usize) -> Option<usize> {
        let k = step.checked_sub(1)?;
        (k < self.front || (k >= self.back && k < self.slots.len())).then(|| self.slots[k])
    }

    /// Positions of the first `front` steps, in order.
    pub fn front_slots(&self) -> &[usize] {
        &self.slots[..self.front]
    }
}

/// Materializes the intermediate strings of one hypermutation at increasing
/// steps.
struct Walk<'a> {
    parent: &'a Bitstring,
    order: &'a mut FlipOrder,
    work: &'a mut Bitstring,
    /// Last materialized step.
    step: usize,
    in_back: bool,
}

impl<'a> Walk<'a> {
    fn start(parent: &'a Bitstring, order: &'a mut FlipOrder, work: &'a mut Bitstring) -> Self {
        order.reset();
        work.copy_from(parent);
        Self {
            parent,
            order,
            work,
            step: 0,
            in_back: false,
        }
    }

    fn advance_to<R: Rng + ?Sized>(&mut self, step: usize, rng: &mut R) {
        let n = self.order.n();
        debug_assert!(step > self.step && step <= n);
        if 2 * step <= n {
            while self.order.front < step {
                let pos = self.order.next_front(rng);
                self.work.flip(pos);
            }
        } else if !self.in_back {
            self.work.copy_complement_from(self.parent);
            while self.order.back > step {
                let pos = self.order.next_back(rng);
                self.work.flip(pos);
            }
            self.in_back = true;
        } else {
            for k in self.step..step {
                self.work.flip(self.order.slots[k]);
            }
        }
        self.step = step;
    }
}

/// Fast hypermutation with the parabolic evaluation schedule. Holds scratch
/// buffers so repeated calls do not allocate beyond the returned offspring.
#[derive(Clone, Debug)]
pub struct FastHypermutation {
    schedule: ParabolicSchedule,
    order: FlipOrder,
    work: Bitstring,
    best: Bitstring,
}

impl FastHypermutation {
    pub fn new(schedule: ParabolicSchedule) -> Self {
        let n = schedule.n();
        Self {
            order: FlipOrder::new(n),
            work: Bitstring::zeros(n).expect("schedule length >= 1"),
            best: Bitstring::zeros(n).expect("schedule length >= 1"),
            schedule,
        }
    }

    pub fn schedule(&self) -> &ParabolicSchedule {
        &self.schedule
    }

    /// Stops at the first constructive evaluation. Otherwise returns the last
    /// evaluated string, or the parent when nothing was evaluated.
    pub fn first_constructive<E, R>(
        &mut self,
        parent: &Bitstring,
        parent_fitness: Fitness,
        eval: &mut E,
        mode: ConstructiveMode,
        rng: &mut R,
    ) -> MutationOutcome
    where
        E: Evaluate + ?Sized,
        R: Rng + ?Sized,
    {
        assert_eq!(parent.len(), self.schedule.n(), "parent length does not match schedule");
        let schedule = &self.schedule;
        let mut walk = Walk::start(parent, &mut self.order, &mut self.work);
        let mut evals = 0;
        let mut last = None;
        let mut best: Option<Fitness> = None;
        while let Some(step) = schedule.next_evaluated(walk.step, rng) {
            walk.advance_to(step, rng);
            let Some(f) = eval.evaluate(walk.work) else {
                return MutationOutcome::halted(parent, parent_fitness, evals);
            };
            evals += 1;
            last = Some(f);
            best = best.max(Some(f));
            if mode.is_constructive(f, parent_fitness) {
                return MutationOutcome {
                    offspring: walk.work.clone(),
                    offspring_fitness: f,
                    evals_used: evals,
                    constructive_found: true,
                    best_eval_fitness: best,
                    stop_step: Some(step),
                    halted: false,
                };
            }
        }
        match last {
            None => MutationOutcome::unchanged(parent, parent_fitness),
            Some(f) => MutationOutcome {
                offspring: walk.work.clone(),
                offspring_fitness: f,
                evals_used: evals,
                constructive_found: false,
                best_eval_fitness: best,
                stop_step: None,
                halted: false,
            },
        }
    }

    /// Runs all `n` steps and returns the best evaluated string (earliest
    /// among equals), even when it is worse than the parent. Returns the
    /// parent when nothing was evaluated.
    pub fn best_of<E, R>(
        &mut self,
        parent: &Bitstring,
        parent_fitness: Fitness,
        eval: &mut E,
        rng: &mut R,
    ) -> MutationOutcome
    where
        E: Evaluate + ?Sized,
        R: Rng + ?Sized,
    {
        assert_eq!(parent.len(), self.schedule.n(), "parent length does not match schedule");
        let schedule = &self.schedule;
        let best_buf = &mut self.best;
        let mut walk = Walk::start(parent, &mut self.order, &mut self.work);
        let mut evals = 0;
        let mut best: Option<Fitness> = None;
        while let Some(step) = schedule.next_evaluated(walk.step, rng) {
            walk.advance_to(step, rng);
            let Some(f) = eval.evaluate(walk.work) else {
                return MutationOutcome::halted(parent, parent_fitness, evals);
            };
            evals += 1;
            if best.is_none_or(|b| f > b) {
                best = Some(f);
                best_buf.copy_from(walk.work);
            }
        }
        match best {
            None => MutationOutcome::unchanged(parent, parent_fitness),
            Some(f) => MutationOutcome {
                offspring: best_buf.clone(),
                offspring_fitness: f,
                evals_used: evals,
                constructive_found: f > parent_fitness,
                best_eval_fitness: best,
                stop_step: None,
                halted: false,
            },
        }
    }
}

/// Number of distinct bits the static operator flips: `M = ceil(c n)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutationPotential {
    c: f64,
}

impl Default for MutationPotential {
    fn default() -> Self {
        Self { c: 1.0 }
    }
}

impl MutationPotential {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c <= 1.0) {
            return Err(Error::param("c", format!("need 0 < c <= 1, got {c}")));
        }
        Ok(Self { c })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn flips(&self, n: usize) -> usize {
        ((self.c * n as f64).ceil() as usize).clamp(1, n)
    }
}

/// Classical static hypermutation: evaluates after each of the `M` flips
/// and stops at the first constructive one.
#[derive(Clone, Debug)]
pub struct StaticHypermutation {
    flips: usize,
    order: FlipOrder,
    work: Bitstring,
}

impl StaticHypermutation {
    pub fn new(n: usize, potential: MutationPotential) -> Result<Self> {
        Ok(Self {
            flips: potential.flips(n),
            order: FlipOrder::new(n),
            work: Bitstring::zeros(n)?,
        })
    }

    pub fn flips(&self) -> usize {
        self.flips
    }

    pub fn first_constructive<E, R>(
        &mut self,
        parent: &Bitstring,
        parent_fitness: Fitness,
        eval: &mut E,
        mode: ConstructiveMode,
        rng: &mut R,
    ) -> MutationOutcome
    where
        E: Evaluate + ?Sized,
        R: Rng + ?Sized,
    {
        assert_eq!(parent.len(), self.order.n(), "parent length does not match operator");
        self.order.reset();
        self.work.copy_from(parent);
        let mut best: Option<Fitness> = None;
        let mut last = parent_fitness;
        for step in 1..=self.flips {
            let pos = self.order.next_front(rng);
            self.work.flip(pos);
            let Some(f) = eval.evaluate(&self.work) else {
                return MutationOutcome::halted(parent, parent_fitness, step - 1);
            };
            best = best.max(Some(f));
            last = f;
            if mode.is_constructive(f, parent_fitness) {
                return MutationOutcome {
                    offspring: self.work.clone(),
                    offspring_fitness: f,
                    evals_used: step,
                    constructive_found: true,
                    best_eval_fitness: best,
                    stop_step: Some(step),
                    halted: false,
                };
            }
        }
        MutationOutcome {
            offspring: self.work.clone(),
            offspring_fitness: last,
            evals_used: self.flips,
            constructive_found: false,
            best_eval_fitness: best,
            stop_step: None,
            halted: false,
        }
    }
}

/// One-shot fast hypermutation with first-constructive stopping.
pub fn phype_fcm<E, R>(
    parent: &Bitstring,
    parent_fitness: Fitness,
    eval: &mut E,
    schedule: &ParabolicSchedule,
    mode: ConstructiveMode,
    rng: &mut R,
) -> MutationOutcome
where
    E: Evaluate + ?Sized,
    R: Rng + ?Sized,
{
    FastHypermutation::new(schedule.clone()).first_constructive(parent, parent_fitness, eval, mode, rng)
}

/// One-shot fast hypermutation returning the best evaluated string.
pub fn phype_bm<E, R>(
    parent: &Bitstring,
    parent_fitness: Fitness,
    eval: &mut E,
    schedule: &ParabolicSchedule,
    rng: &mut R,
) -> MutationOutcome
where
    E: Evaluate + ?Sized,
    R: Rng + ?Sized,
{
    FastHypermutation::new(schedule.clone()).best_of(parent, parent_fitness, eval, rng)
}

/// One-shot static hypermutation with first-constructive stopping.
pub fn static_hmp_fcm<E, R>(
    parent: &Bitstring,
    parent_fitness: Fitness,
    eval: &mut E,
    potential: MutationPotential,
    mode: ConstructiveMode,
    rng: &mut R,
) -> MutationOutcome
where
    E: Evaluate + ?Sized,
    R: Rng + ?Sized,
{
    StaticHypermutation::new(parent.len(), potential)
        .expect("parent has length >= 1")
        .first_constructive(parent, parent_fitness, eval, mode, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::Benchmark;
    use crate::bitstring::hamming_distance;
    use crate::eval::{Counted, Objective};
    use crate::rng::RandomSource;
    use proptest::prelude::*;

    /// Records every evaluated string.
    struct Recorder<O> {
        objective: O,
        seen: Vec<Bitstring>,
    }

    impl<O: Objective> Evaluate for Recorder<O> {
        fn evaluate(&mut self, x: &Bitstring) -> Option<Fitness> {
            self.seen.push(x.clone());
            Some(self.objective.value(x))
        }
    }

    /// Refuses every call after `allow`.
    struct Capped<O> {
        objective: O,
        allow: usize,
        used: usize,
    }

    impl<O: Objective> Evaluate for Capped<O> {
        fn evaluate(&mut self, x: &Bitstring) -> Option<Fitness> {
            if self.used == self.allow {
                return None;
            }
            self.used += 1;
            Some(self.objective.value(x))
        }
    }

    #[test]
    fn fcm_single_bit_matches_inverse_e() {
        let f = Benchmark::one_max(1).unwrap();
        let schedule = ParabolicSchedule::new(1, 1.0).unwrap();
        let mut op = FastHypermutation::new(schedule);
        let parent = Bitstring::zeros(1).unwrap();
        let mut rng = RandomSource::from_seed(1);
        let trials = 100_000;
        let mut ones = 0;
        for _ in 0..trials {
            let mut e = Counted::new(&f);
            let out = op.first_constructive(&parent, Fitness(0.0), &mut e, ConstructiveMode::Gt, &mut rng);
            if out.offspring.get(0) {
                ones += 1;
                assert!(out.constructive_found);
            } else {
                assert_eq!(out.evals_used, 0);
            }
        }
        let frac = ones as f64 / trials as f64;
        assert!((frac - 1.0 / std::f64::consts::E).abs() < 0.01, "{frac}");
    }

    #[test]
    fn fcm_never_constructive_at_the_optimum() {
        let n = 20;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 1.0).unwrap());
        let parent = Bitstring::ones(n).unwrap();
        let mut rng = RandomSource::from_seed(2);
        for _ in 0..2000 {
            let mut e = Counted::new(&f);
            let out = op.first_constructive(&parent, Fitness(n as f64), &mut e, ConstructiveMode::Gt, &mut rng);
            assert!(!out.constructive_found);
            assert_eq!(out.evals_used as u64, e.counter().count());
        }
    }

    #[test]
    fn fcm_first_step_from_zeros_is_constructive() {
        let n = 16;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 1.0).unwrap());
        let parent = Bitstring::zeros(n).unwrap();
        let mut rng = RandomSource::from_seed(3);
        let mut seen_step_one = 0;
        for _ in 0..2000 {
            let mut e = Counted::new(&f);
            let out = op.first_constructive(&parent, Fitness(0.0), &mut e, ConstructiveMode::Geq, &mut rng);
            if out.stop_step == Some(1) {
                seen_step_one += 1;
                assert_eq!(out.offspring.count_ones(), 1);
                assert_eq!(out.offspring_fitness, Fitness(1.0));
                assert_eq!(out.evals_used, 1);
            }
            // GEQ from 0^n: every evaluation is constructive
            assert!(out.evals_used <= 1);
        }
        assert!(seen_step_one > 600, "{seen_step_one}");
    }

    #[test]
    fn bm_tiny_gamma_single_evaluation_is_complement() {
        let n = 100;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 1e-9).unwrap());
        let mut rng = RandomSource::from_seed(4);
        let parent = Bitstring::random(n, &mut rng).unwrap();
        let pf = f.value(&parent);
        let mut checked = 0;
        for _ in 0..3000 {
            let mut rec = Recorder { objective: &f, seen: vec![] };
            let out = op.best_of(&parent, pf, &mut rec, &mut rng);
            if rec.seen.len() == 1 && hamming_distance(&rec.seen[0], &parent).unwrap() == n {
                assert_eq!(out.offspring, parent.complement());
                checked += 1;
            }
        }
        assert!(checked > 500);
    }

    #[test]
    fn bm_without_evaluations_returns_parent() {
        let n = 50;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 1e-9).unwrap());
        let mut rng = RandomSource::from_seed(5);
        let parent = Bitstring::random(n, &mut rng).unwrap();
        let pf = f.value(&parent);
        let mut none = 0;
        for _ in 0..2000 {
            let mut e = Counted::new(&f);
            let out = op.best_of(&parent, pf, &mut e, &mut rng);
            if out.evals_used == 0 {
                none += 1;
                assert_eq!(out.offspring, parent);
                assert_eq!(out.offspring_fitness, pf);
                assert!(!out.constructive_found);
            }
        }
        assert!(none > 500);
    }

    #[test]
    fn bm_prefers_later_better_string() {
        let n = 4;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 2.0).unwrap());
        let parent = Bitstring::zeros(n).unwrap();
        let mut rng = RandomSource::from_seed(6);
        let mut checked = 0;
        for _ in 0..5000 {
            let mut rec = Recorder { objective: &f, seen: vec![] };
            let out = op.best_of(&parent, Fitness(0.0), &mut rec, &mut rng);
            if rec.seen.len() >= 2 {
                // from 0^n every later string has more ones
                let last = rec.seen.last().unwrap();
                assert_eq!(out.offspring, *last);
                assert_eq!(out.offspring_fitness, Fitness(last.count_ones() as f64));
                checked += 1;
            }
        }
        assert!(checked > 100);
    }

    #[test]
    fn bm_returns_worse_string_when_nothing_better() {
        let n = 30;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 0.5).unwrap());
        let parent = Bitstring::ones(n).unwrap();
        let mut rng = RandomSource::from_seed(7);
        for _ in 0..500 {
            let mut rec = Recorder { objective: &f, seen: vec![] };
            let out = op.best_of(&parent, Fitness(n as f64), &mut rec, &mut rng);
            if let Some(top) = rec.seen.iter().map(|x| x.count_ones()).max() {
                let first_best = rec.seen.iter().find(|x| x.count_ones() == top).unwrap();
                assert_eq!(&out.offspring, first_best);
                assert!(out.offspring_fitness < Fitness(n as f64));
            }
        }
    }

    #[test]
    fn static_complement_when_stuck() {
        let n = 8;
        let f = Benchmark::one_max(n).unwrap();
        let mut rng = RandomSource::from_seed(8);
        let parent = Bitstring::ones(n).unwrap();
        let mut e = Counted::new(&f);
        let out = static_hmp_fcm(&parent, Fitness(8.0), &mut e, MutationPotential::default(), ConstructiveMode::Gt, &mut rng);
        assert_eq!(out.evals_used, 8);
        assert_eq!(out.offspring, Bitstring::zeros(n).unwrap());
        assert_eq!(e.counter().count(), 8);

        let mut e = Counted::new(&f);
        let zero = Bitstring::zeros(n).unwrap();
        let out = static_hmp_fcm(&zero, Fitness(0.0), &mut e, MutationPotential::default(), ConstructiveMode::Geq, &mut rng);
        assert_eq!(out.evals_used, 1);
        assert_eq!(out.stop_step, Some(1));
    }

    #[test]
    fn static_partial_potential() {
        let p = MutationPotential::new(0.3).unwrap();
        assert_eq!(p.flips(10), 3);
        assert_eq!(p.flips(11), 4);
        assert!(MutationPotential::new(0.0).is_err());
        let f = Benchmark::one_max(10).unwrap();
        let mut e = Counted::new(&f);
        let out = static_hmp_fcm(
            &Bitstring::ones(10).unwrap(),
            Fitness(10.0),
            &mut e,
            p,
            ConstructiveMode::Gt,
            &mut RandomSource::from_seed(1),
        );
        assert_eq!(out.evals_used, 3);
        assert_eq!(out.offspring.count_ones(), 7);
    }

    #[test]
    fn halted_evaluator_stops_operator() {
        let n = 40;
        let f = Benchmark::one_max(n).unwrap();
        let mut op = FastHypermutation::new(ParabolicSchedule::new(n, 2.0).unwrap());
        let parent = Bitstring::ones(n).unwrap();
        let mut rng = RandomSource::from_seed(9);
        let mut cap = Capped { objective: &f, allow: 2, used: 0 };
        let out = op.best_of(&parent, Fitness(n as f64), &mut cap, &mut rng);
        assert!(out.halted);
        assert_eq!(out.evals_used, 2);
        let mut cap = Capped { objective: &f, allow: 0, used: 0 };
        let out = static_hmp_fcm(&parent, Fitness(40.0), &mut cap, MutationPotential::default(), ConstructiveMode::Gt, &mut rng);
        assert!(out.halted);
        assert_eq!(out.evals_used, 0);
    }

    #[test]
    fn flip_order_fills_both_ends() {
        let mut order = FlipOrder::new(6);
        let mut rng = RandomSource::from_seed(10);
        let a = order.next_front(&mut rng);
        let b = order.next_back(&mut rng);
        let c = order.next_back(&mut rng);
        assert_eq!(order.position_at(1), Some(a));
        assert_eq!(order.position_at(6), Some(b));
        assert_eq!(order.position_at(5), Some(c));
        assert_eq!(order.position_at(3), None);
        let mut all = vec![a, b, c];
        for _ in 0..3 {
            all.push(order.next_front(&mut rng));
        }
        all.sort_unstable();
        assert_eq!(all, vec![0, 1, 2, 3, 4, 5]);
    }

    fn check_walk_consistency(rec: &[Bitstring], parent: &Bitstring) -> std::result::Result<(), TestCaseError> {
        // Successive evaluated strings are nested flip sets: every step moves
        // strictly further from the parent and never revisits a position.
        let mut prev = parent.clone();
        let mut prev_d = 0;
        for x in rec {
            let d = hamming_distance(x, parent).unwrap();
            prop_assert!(d > prev_d);
            prop_assert_eq!(d, prev_d + hamming_distance(x, &prev).unwrap());
            prev = x.clone();
            prev_d = d;
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn fast_walk_flips_distinct_positions(seed in any::<u64>(), n in 1usize..150, gamma in 0.05f64..2.0) {
            let f = Benchmark::one_max(n).unwrap();
            let mut op = FastHypermutation::new(ParabolicSchedule::new(n, gamma).unwrap());
            let mut rng = RandomSource::from_seed(seed);
            let parent = Bitstring::random(n, &mut rng).unwrap();
            let pf = f.value(&parent);
            for _ in 0..5 {
                let mut rec = Recorder { objective: &f, seen: vec![] };
                let out = op.best_of(&parent, pf, &mut rec, &mut rng);
                check_walk_consistency(&rec.seen, &parent)?;
                prop_assert_eq!(out.evals_used, rec.seen.len());
                if rec.seen.iter().any(|x| hamming_distance(x, &parent).unwrap() == n) {
                    prop_assert!(rec.seen.contains(&parent.complement()));
                }
            }
        }

        #[test]
        fn fcm_stop_contract(seed in any::<u64>(), n in 2usize..120, gamma in 0.05f64..2.0, geq in any::<bool>()) {
            let mode = if geq { ConstructiveMode::Geq } else { ConstructiveMode::Gt };
            let f = Benchmark::leading_ones(n).unwrap();
            let mut op = FastHypermutation::new(ParabolicSchedule::new(n, gamma).unwrap());
            let mut rng = RandomSource::from_seed(seed);
            let parent = Bitstring::random(n, &mut rng).unwrap();
            let pf = f.value(&parent);
            let mut rec = Recorder { objective: &f, seen: vec![] };
            let out = op.first_constructive(&parent, pf, &mut rec, mode, &mut rng);
            check_walk_consistency(&rec.seen, &parent)?;
            prop_assert_eq!(out.evals_used, rec.seen.len());
            prop_assert!(out.evals_used <= n);
            if out.constructive_found {
                // nothing evaluated after the stop, and the stop string is the last one
                let step = out.stop_step.unwrap();
                prop_assert_eq!(rec.seen.last().unwrap(), &out.offspring);
                prop_assert_eq!(hamming_distance(&out.offspring, &parent).unwrap(), step);
                prop_assert!(mode.is_constructive(out.offspring_fitness, pf));
                for x in &rec.seen[..rec.seen.len() - 1] {
                    prop_assert!(!mode.is_constructive(f.value(x), pf));
                }
            } else if let Some(last) = rec.seen.last() {
                prop_assert_eq!(last, &out.offspring);
            } else {
                prop_assert_eq!(&out.offspring, &parent);
            }
        }

        #[test]
        fn geq_stops_no_later_than_gt(seed in any::<u64>(), n in 2usize..80, gamma in 0.05f64..2.0) {
            let f = Benchmark::one_max(n).unwrap();
            let schedule = ParabolicSchedule::new(n, gamma).unwrap();
            let mut rng = RandomSource::from_seed(seed);
            let parent = Bitstring::random(n, &mut rng).unwrap();
            let pf = f.value(&parent);
            let run = |mode| {
                let mut rng = RandomSource::from_seed(seed ^ 0xABCD);
                let mut e = Counted::new(&f);
                phype_fcm(&parent, pf, &mut e, &schedule, mode, &mut rng)
            };
            let gt = run(ConstructiveMode::Gt);
            let geq = run(ConstructiveMode::Geq);
            if let Some(s) = gt.stop_step {
                prop_assert!(geq.stop_step.is_some_and(|t| t <= s));
            }
        }
    }
}
