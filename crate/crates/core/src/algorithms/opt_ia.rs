//! Fast Opt-IA: cloning, hypermutation and hybrid ageing over a population
//! of `mu` b-cells.
//!
//! One generation, in order:
//!
//! 1. every age is incremented;
//! 2. each b-cell is cloned `dup` times and every clone hypermutated; an
//!    offspring strictly better than its parent gets age 0, otherwise it
//!    inherits the parent's (already incremented) age;
//! 3. offspring join the population;
//! 4. every b-cell with `age >= tau` dies with probability
//!    `p_die = 1 - 1/(mu + 1)`;
//! 5. if fewer than `mu` survive, fresh uniformly random age-0 b-cells fill
//!    the gap (one evaluation each);
//! 6. if more than `mu` remain, the lowest-fitness ones are removed, ties
//!    broken uniformly at random.
//!
//! Refills are created after cloning, so they are first cloned in the next
//! generation.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::{check_budget, Mutator, OperatorKind, RunEvaluator, RunResult};
use crate::benchmarks::Benchmark;
use crate::bitstring::Bitstring;
use crate::error::{Error, Result};
use crate::eval::Evaluate;
use crate::fitness::Fitness;
use crate::operators::{ConstructiveMode, GammaPreset};
use crate::rng::RandomSource;

/// A b-cell: genotype, cached fitness and age.
#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub genotype: Bitstring,
    pub fitness: Fitness,
    pub age: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptIaConfig {
    pub mu: usize,
    pub dup: usize,
    pub tau: u64,
    pub operator: OperatorKind,
    pub gamma: GammaPreset,
    /// Stopping rule of the first-constructive operators; ignored by
    /// `PhypeBm`.
    pub mode: ConstructiveMode,
}

impl OptIaConfig {
    pub fn validate(&self) -> Result<()> {
        if self.mu == 0 {
            return Err(Error::param("mu", "must be at least 1"));
        }
        if self.dup == 0 {
            return Err(Error::param("dup", "must be at least 1"));
        }
        if self.tau == 0 {
            return Err(Error::param("tau", "must be at least 1"));
        }
        Ok(())
    }

    /// Death probability of an over-age b-cell.
    pub fn p_die(&self) -> f64 {
        p_die(self.mu)
    }
}

fn p_die(mu: usize) -> f64 {
    1.0 - 1.0 / (mu as f64 + 1.0)
}

/// Removes each b-cell with `age >= tau` independently with probability
/// `1 - 1/(mu + 1)`.
pub fn hybrid_ageing_step<R: Rng + ?Sized>(
    mut population: Vec<Individual>,
    tau: u64,
    mu: usize,
    rng: &mut R,
) -> Vec<Individual> {
    let survive = 1.0 / (mu as f64 + 1.0);
    population.retain(|x| x.age < tau || rng.random_bool(survive));
    population
}

/// Keeps the `mu` fittest b-cells, breaking ties among equal fitness
/// uniformly at random.
pub fn truncation_selection<R: Rng + ?Sized>(
    mut population: Vec<Individual>,
    mu: usize,
    rng: &mut R,
) -> Vec<Individual> {
    if population.len() <= mu {
        return population;
    }
    // a uniform shuffle followed by a stable sort makes every order of equal
    // fitness values equally likely
    population.shuffle(rng);
    population.sort_by_key(|x| std::cmp::Reverse(x.fitness));
    population.truncate(mu);
    population
}

/// A Fast Opt-IA run that can be advanced one generation at a time.
pub struct OptIa<'a> {
    config: OptIaConfig,
    n: usize,
    eval: RunEvaluator<'a>,
    mutator: Mutator,
    population: Vec<Individual>,
    generations: u64,
    init_evaluations: u64,
    operator_evaluations: u64,
    best_regressions: u64,
    last_best: Fitness,
    seed: u64,
    budget: u64,
}

impl<'a> OptIa<'a> {
    /// Creates the initial population (`mu` evaluations).
    pub fn new(benchmark: &'a Benchmark, config: OptIaConfig, budget: u64, rng: &mut RandomSource) -> Result<Self> {
        config.validate()?;
        check_budget(budget, config.mu as u64)?;
        let n = benchmark.n();
        let mutator = Mutator::new(config.operator, n, config.gamma, config.mode)?;
        let mut run = Self {
            config,
            n,
            eval: RunEvaluator::new(benchmark, budget),
            mutator,
            population: Vec::with_capacity(config.mu * (config.dup + 1)),
            generations: 0,
            init_evaluations: 0,
            operator_evaluations: 0,
            best_regressions: 0,
            last_best: Fitness(f64::NEG_INFINITY),
            seed: rng.seed(),
            budget,
        };
        for _ in 0..config.mu {
            if run.eval.found_optimum() {
                break;
            }
            if !run.push_random(rng)? {
                break;
            }
        }
        run.last_best = run.population_best();
        Ok(run)
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn generations(&self) -> u64 {
        self.generations
    }

    pub fn evaluations(&self) -> u64 {
        self.eval.count()
    }

    pub fn is_done(&self) -> bool {
        self.eval.is_done()
    }

    /// Runs one generation. Returns `false` once the run is over.
    pub fn step(&mut self, rng: &mut RandomSource) -> Result<bool> {
        self.step_inner(rng, None)
    }

    /// Like [`step`](Self::step), also returning every (parent, offspring)
    /// pair produced by cloning and hypermutation, parents as they were when
    /// cloned.
    pub fn step_traced(&mut self, rng: &mut RandomSource) -> Result<(bool, Vec<(Individual, Individual)>)> {
        let mut trace = Vec::new();
        let more = self.step_inner(rng, Some(&mut trace))?;
        Ok((more, trace))
    }

    fn step_inner(
        &mut self,
        rng: &mut RandomSource,
        mut trace: Option<&mut Vec<(Individual, Individual)>>,
    ) -> Result<bool> {
        if self.eval.is_done() {
            return Ok(false);
        }
        self.generations += 1;
        for x in self.population.iter_mut() {
            x.age += 1;
        }
        let mut offspring = Vec::with_capacity(self.population.len() * self.config.dup);
        'clones: for parent in &self.population {
            for _ in 0..self.config.dup {
                let out = self.mutator.apply(&parent.genotype, parent.fitness, &mut self.eval, rng);
                self.operator_evaluations += out.evals_used as u64;
                if out.halted {
                    break 'clones;
                }
                let child = Individual {
                    age: if out.offspring_fitness > parent.fitness { 0 } else { parent.age },
                    genotype: out.offspring,
                    fitness: out.offspring_fitness,
                };
                if let Some(t) = trace.as_deref_mut() {
                    t.push((parent.clone(), child.clone()));
                }
                offspring.push(child);
                if self.eval.is_done() {
                    break 'clones;
                }
            }
        }
        self.population.append(&mut offspring);
        if self.eval.is_done() {
            return Ok(false);
        }

        let population = std::mem::take(&mut self.population);
        self.population = hybrid_ageing_step(population, self.config.tau, self.config.mu, rng);
        while self.population.len() < self.config.mu {
            if !self.push_random(rng)? {
                return Ok(false);
            }
        }
        let population = std::mem::take(&mut self.population);
        self.population = truncation_selection(population, self.config.mu, rng);
        debug_assert_eq!(self.population.len(), self.config.mu);

        let best = self.population_best();
        if best < self.last_best {
            self.best_regressions += 1;
        }
        self.last_best = best;
        Ok(!self.eval.is_done())
    }

    /// Adds a fresh random age-0 b-cell. Returns `false` if the evaluator
    /// refused the call.
    fn push_random(&mut self, rng: &mut RandomSource) -> Result<bool> {
        let genotype = Bitstring::random(self.n, rng)?;
        let Some(fitness) = self.eval.evaluate(&genotype) else {
            return Ok(false);
        };
        self.init_evaluations += 1;
        self.population.push(Individual {
            genotype,
            fitness,
            age: 0,
        });
        Ok(!self.eval.is_done())
    }

    fn population_best(&self) -> Fitness {
        self.population
            .iter()
            .map(|x| x.fitness)
            .max()
            .unwrap_or(Fitness(f64::NEG_INFINITY))
    }

    pub fn result(&self) -> RunResult {
        RunResult {
            evaluations: self.eval.count(),
            generations: self.generations,
            success: self.eval.found_optimum(),
            best_fitness: self.eval.best().unwrap_or(Fitness(f64::NEG_INFINITY)),
            budget: self.budget,
            seed: self.seed,
            init_evaluations: self.init_evaluations,
            operator_evaluations: self.operator_evaluations,
            best_regressions: self.best_regressions,
        }
    }
}

/// Runs Fast Opt-IA until the optimum is evaluated or the budget is spent.
pub fn run_fast_opt_ia(
    benchmark: &Benchmark,
    config: OptIaConfig,
    budget: u64,
    rng: &mut RandomSource,
) -> Result<RunResult> {
    let mut run = OptIa::new(benchmark, config, budget, rng)?;
    while run.step(rng)? {}
    Ok(run.result())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ind(fitness: f64, age: u64, tag: usize) -> Individual {
        let mut g = Bitstring::zeros(16).unwrap();
        for i in 0..16 {
            g.set(i, tag >> i & 1 == 1);
        }
        Individual {
            genotype: g,
            fitness: Fitness(fitness),
            age,
        }
    }

    fn config(mu: usize, dup: usize, tau: u64, operator: OperatorKind) -> OptIaConfig {
        OptIaConfig {
            mu,
            dup,
            tau,
            operator,
            gamma: GammaPreset::Const(1.0),
            mode: ConstructiveMode::Gt,
        }
    }

    #[test]
    fn p_die_formula() {
        assert_eq!(config(1, 1, 5, OperatorKind::PhypeBm).p_die(), 0.5);
        assert!((config(4, 1, 5, OperatorKind::PhypeBm).p_die() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        let b = Benchmark::one_max(8).unwrap();
        let mut rng = RandomSource::from_seed(0);
        assert!(OptIa::new(&b, config(0, 1, 1, OperatorKind::PhypeBm), 10, &mut rng).is_err());
        assert!(OptIa::new(&b, config(1, 0, 1, OperatorKind::PhypeBm), 10, &mut rng).is_err());
        assert!(OptIa::new(&b, config(1, 1, 0, OperatorKind::PhypeBm), 10, &mut rng).is_err());
        assert!(OptIa::new(&b, config(5, 1, 1, OperatorKind::PhypeBm), 4, &mut rng).is_err());
    }

    #[test]
    fn young_population_untouched_by_ageing() {
        let pop: Vec<_> = (0..6).map(|i| ind(i as f64, 3, i)).collect();
        let mut rng = RandomSource::from_seed(1);
        assert_eq!(hybrid_ageing_step(pop.clone(), 4, 2, &mut rng), pop);
    }

    #[test]
    fn ageing_removal_frequency_mu_one() {
        let mut rng = RandomSource::from_seed(2);
        let trials = 100_000;
        let removed = (0..trials)
            .filter(|_| hybrid_ageing_step(vec![ind(1.0, 10, 0)], 10, 1, &mut rng).is_empty())
            .count();
        let freq = removed as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 0.01, "{freq}");
    }

    #[test]
    fn ageing_survivors_mu_four() {
        let mut rng = RandomSource::from_seed(3);
        let pop: Vec<_> = (0..10).map(|i| ind(1.0, 1, i)).collect();
        let trials = 20_000;
        let survivors: usize = (0..trials)
            .map(|_| hybrid_ageing_step(pop.clone(), 1, 4, &mut rng).len())
            .sum();
        let mean = survivors as f64 / trials as f64;
        // binomial(10, 1/5): mean 2, sd of the mean 0.009
        assert!((mean - 2.0).abs() < 0.04, "{mean}");
    }

    #[test]
    fn truncation_keeps_best() {
        let mut rng = RandomSource::from_seed(4);
        let pop: Vec<_> = [3.0, 9.0, 1.0, 7.0].iter().enumerate().map(|(i, &f)| ind(f, 0, i)).collect();
        assert_eq!(truncation_selection(pop.clone(), 4, &mut rng).len(), 4);
        let kept = truncation_selection(pop, 2, &mut rng);
        let mut f: Vec<f64> = kept.iter().map(|x| x.fitness.value()).collect();
        f.sort_by(f64::total_cmp);
        assert_eq!(f, vec![7.0, 9.0]);
    }

    #[test]
    fn truncation_tie_break_is_uniform() {
        let mut rng = RandomSource::from_seed(5);
        let pop = vec![ind(5.0, 0, 0), ind(3.0, 0, 1), ind(3.0, 0, 2), ind(3.0, 0, 3)];
        let trials = 100_000;
        let mut kept = [0u32; 4];
        for _ in 0..trials {
            for x in truncation_selection(pop.clone(), 2, &mut rng) {
                let tag = (0..4).find(|&t| x == pop[t]).unwrap();
                kept[tag] += 1;
            }
        }
        assert_eq!(kept[0], trials);
        for &k in &kept[1..] {
            let freq = k as f64 / trials as f64;
            assert!((freq - 1.0 / 3.0).abs() < 0.01, "{freq}");
        }
    }

    #[test]
    fn population_size_and_age_rules() {
        let b = Benchmark::cliff(30, 6).unwrap();
        let mut rng = RandomSource::from_seed(6);
        let cfg = OptIaConfig {
            gamma: GammaPreset::Const(0.2),
            ..config(3, 2, 40, OperatorKind::PhypeBm)
        };
        let mut run = OptIa::new(&b, cfg, 200_000, &mut rng).unwrap();
        assert_eq!(run.population().len(), 3);
        let mut steps = 0;
        loop {
            let ages_before: Vec<u64> = run.population().iter().map(|x| x.age).collect();
            let (more, trace) = run.step_traced(&mut rng).unwrap();
            steps += 1;
            if !more {
                break;
            }
            assert_eq!(trace.len(), 6);
            for (k, (parent, child)) in trace.iter().enumerate() {
                assert_eq!(parent.age, ages_before[k / 2] + 1);
                if child.fitness > parent.fitness {
                    assert_eq!(child.age, 0);
                } else {
                    assert_eq!(child.age, parent.age);
                }
            }
            assert_eq!(run.population().len(), 3);
            for x in run.population() {
                assert_eq!(x.fitness, b.value_at_level(x.genotype.count_ones()).unwrap());
            }
        }
        assert!(steps > 1);
        let r = run.result();
        assert_eq!(r.evaluations, r.init_evaluations + r.operator_evaluations);
    }

    #[test]
    fn ageing_neutral_when_tau_exceeds_budget() {
        // With tau > budget no b-cell can reach the age threshold, so the
        // population never shrinks below mu before selection and no refill
        // evaluation happens.
        let b = Benchmark::jump(24, 4).unwrap();
        let mut rng = RandomSource::from_seed(7);
        let budget = 5_000;
        let r = run_fast_opt_ia(&b, config(2, 1, budget + 1, OperatorKind::PhypeFcm), budget, &mut rng).unwrap();
        assert_eq!(r.init_evaluations, 2);
    }

    #[test]
    fn solves_onemax_and_conserves_evaluations() {
        let b = Benchmark::one_max(40).unwrap();
        for (seed, op) in OperatorKind::ALL.into_iter().enumerate() {
            let mut rng = RandomSource::from_seed(seed as u64);
            let r = run_fast_opt_ia(&b, config(2, 1, 2000, op), 1_000_000, &mut rng).unwrap();
            assert!(r.success, "{op}");
            assert_eq!(r.evaluations, r.init_evaluations + r.operator_evaluations);
        }
    }
}
