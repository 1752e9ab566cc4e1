//! Release acceptance suite. Every criterion prints one `PASS`/`FAIL` line
//! on stderr (uncaptured) and then asserts its outcome.
//!
//! Release builds are strongly recommended: `cargo test --release --test acceptance`.

use std::io::Write;

use immuno_opt::algorithms::{
    run_fast_opt_ia, run_one_plus_one_ea, run_one_plus_one_fast_ia, run_one_plus_one_ia_hyp, run_rls_k,
    truncation_selection, hybrid_ageing_step, Individual, OperatorKind, OptIa, OptIaConfig, RunResult,
};
use immuno_opt::benchmarks::{Benchmark, BenchmarkKind};
use immuno_opt::bitstring::{hamming_distance, Bitstring};
use immuno_opt::eval::{Counted, Evaluate, Objective};
use immuno_opt::fitness::Fitness;
use immuno_opt::lab::{
    compare, fit_scaling, run_trials, run_trials_with_workers, AlgoKind, ExperimentConfig, Expr, ScalingModel,
    TrialRecord, TrialTable,
};
use immuno_opt::operators::{phype_bm, phype_fcm, ConstructiveMode, FlipOrder, GammaPreset, ParabolicSchedule};
use immuno_opt::oracle::{
    exact_fast_ia_expected_evals, exact_schedule_sum, prefix_subset_chi_square, LevelChain,
};
use immuno_opt::rng::RandomSource;
use rand::Rng;

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr().lock(), "[acceptance] criterion {id:>2} {verdict} {name}: {detail}");
}

/// Mean and standard error.
fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    (mean, (var / m).sqrt())
}

fn ln(x: f64) -> f64 {
    x.ln()
}

fn success_count(t: &TrialTable) -> usize {
    t.rows.iter().filter(|r| r.success).count()
}

fn median_evals(rows: &[&TrialRecord]) -> f64 {
    let mut v: Vec<f64> = rows.iter().map(|r| r.evaluations as f64).collect();
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

fn median_of_successes(t: &TrialTable) -> f64 {
    let ok: Vec<&TrialRecord> = t.rows.iter().filter(|r| r.success).collect();
    if ok.is_empty() {
        f64::INFINITY
    } else {
        median_evals(&ok)
    }
}

#[test]
fn criterion_01_schedule_exactness() {
    const CALLS: usize = 100_000;
    let mut rng = RandomSource::from_seed(0x5c4e_d01e);
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in [4usize, 10, 100, 10_000] {
        let b = Benchmark::one_max(n).unwrap();
        let parent = Bitstring::random(n, &mut rng).unwrap();
        let fp = b.value(&parent);
        for gamma in [0.5, 1.0, 1.0 / ln(n as f64)] {
            let schedule = ParabolicSchedule::new(n, gamma).unwrap();
            let mut eval = Counted::new(&b);
            let evals: Vec<f64> = (0..CALLS)
                .map(|_| phype_bm(&parent, fp, &mut eval, &schedule, &mut rng).evals_used as f64)
                .collect();
            let (mean, se) = mean_se(&evals);
            let exact = exact_schedule_sum(n, gamma).unwrap();
            let z = (mean - exact).abs() / se;
            worst = worst.max(z);
            if z > 3.0 {
                failures.push(format!("n={n} gamma={gamma:.4}: mean {mean:.5} exact {exact:.5} z={z:.2}"));
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        format!("12 settings within 3 SE (max |z| = {worst:.2})")
    } else {
        failures.join("; ")
    };
    report(1, "schedule exactness", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_02_oracle_equivalence() {
    const TRIALS: u64 = 100_000;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut settings = 0;
    for (kind, d) in [
        (BenchmarkKind::OneMax, None),
        (BenchmarkKind::Trap, None),
        (BenchmarkKind::Jump, Some(2)),
        (BenchmarkKind::Cliff, Some(2)),
    ] {
        for n in [6usize, 10] {
            let b = Benchmark::new(kind, n, d, None).unwrap();
            for mode in [ConstructiveMode::Geq, ConstructiveMode::Gt] {
                for preset in [GammaPreset::Const(1.0), GammaPreset::InvLnN] {
                    let gamma = preset.gamma(n).unwrap();
                    let exact = exact_fast_ia_expected_evals(&b, gamma, mode).unwrap();
                    let evals: Vec<f64> = (0..TRIALS)
                        .map(|t| {
                            let mut rng = RandomSource::for_trial(2024 + settings, t);
                            let r = run_one_plus_one_fast_ia(&b, preset, mode, u64::MAX, &mut rng).unwrap();
                            assert!(r.success);
                            r.evaluations as f64
                        })
                        .collect();
                    let (mean, se) = mean_se(&evals);
                    let z = (mean - exact).abs() / se;
                    worst = worst.max(z);
                    settings += 1;
                    if z > 3.0 {
                        failures.push(format!(
                            "{kind} n={n} {mode:?} gamma={gamma:.4}: mean {mean:.3} exact {exact:.3} z={z:.2}"
                        ));
                    }
                }
            }
        }
    }
    let pass = failures.is_empty();
    let detail = if pass {
        format!("{settings} settings within 3 SE (max |z| = {worst:.2})")
    } else {
        failures.join("; ")
    };
    report(2, "oracle equivalence", pass, &detail);
    assert!(pass, "{detail}");
}

fn scaling_config(benchmark: BenchmarkKind, sizes: Vec<usize>) -> ExperimentConfig {
    ExperimentConfig {
        algo: AlgoKind::FastIa,
        benchmark,
        n: sizes,
        gamma: vec![GammaPreset::InvLnN],
        mode: ConstructiveMode::Geq,
        trials: 200,
        seed: 31,
        ..Default::default()
    }
}

#[test]
fn criterion_03_onemax_scaling() {
    let table = run_trials(&scaling_config(BenchmarkKind::OneMax, vec![64, 128, 256, 512, 1024])).unwrap();
    let all_solved = success_count(&table) == table.len();
    let fit = fit_scaling(&table, ScalingModel::N_LOG_N).unwrap();
    let normalized: Vec<f64> = fit.points.iter().map(|p| p.median / (p.n as f64 * ln(p.n as f64))).collect();
    let spread = normalized.iter().copied().fold(f64::MIN, f64::max) / normalized.iter().copied().fold(f64::MAX, f64::min);
    let pass = all_solved && (0.8..=1.2).contains(&fit.exponent) && spread <= 3.0;
    let detail = format!(
        "success {}/{}, exponent {:.3} (need [0.8, 1.2]), median/(n ln n) = {:?}, max/min {:.3} (need <= 3)",
        success_count(&table),
        table.len(),
        fit.exponent,
        normalized.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
        spread
    );
    report(3, "OneMax scaling", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_04_leading_ones_scaling() {
    let table = run_trials(&scaling_config(BenchmarkKind::LeadingOnes, vec![64, 128, 256, 512])).unwrap();
    let all_solved = success_count(&table) == table.len();
    let fit = fit_scaling(&table, ScalingModel::POWER).unwrap();
    let pass = all_solved && (1.8..=2.2).contains(&fit.exponent);
    let detail = format!(
        "success {}/{}, exponent {:.3} (need [1.8, 2.2]), medians {:?}",
        success_count(&table),
        table.len(),
        fit.exponent,
        fit.points.iter().map(|p| p.median).collect::<Vec<_>>()
    );
    report(4, "LeadingOnes scaling", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_05_speedup_over_static_hypermutation() {
    let base = ExperimentConfig {
        algo: AlgoKind::IaHyp,
        benchmark: BenchmarkKind::OneMax,
        n: vec![128, 256],
        gamma: vec![],
        trials: 100,
        seed: 55,
        ..Default::default()
    };
    let candidate = ExperimentConfig {
        algo: AlgoKind::FastIa,
        gamma: vec![GammaPreset::InvLnN],
        ..base.clone()
    };
    let c = compare(&base, &candidate).unwrap();
    let r128 = c.points.iter().find(|p| p.n == 128).unwrap().median_ratio;
    let r256 = c.points.iter().find(|p| p.n == 256).unwrap().median_ratio;
    let all_solved = c.points.iter().all(|p| p.baseline_successes == p.pairs && p.candidate_successes == p.pairs);
    let pass = all_solved && r128 >= 10.0 && r256 > r128;
    let detail = format!("median paired ratio {r128:.2} at n=128 (need >= 10), {r256:.2} at n=256 (need > n=128)");
    report(5, "speedup over static hypermutation", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_06_trap_dichotomy() {
    let n = 24usize;
    let budget = Expr::parse("10^7").unwrap();
    let ea = ExperimentConfig {
        algo: AlgoKind::Ea,
        benchmark: BenchmarkKind::Trap,
        n: vec![n],
        gamma: vec![],
        trials: 100,
        budget: Some(budget.clone()),
        seed: 66,
        ..Default::default()
    };
    let fast = ExperimentConfig {
        algo: AlgoKind::FastIa,
        gamma: vec![GammaPreset::InvLnN],
        ..ea.clone()
    };
    let ea_table = run_trials(&ea).unwrap();
    let fast_table = run_trials(&fast).unwrap();
    let gamma = GammaPreset::InvLnN.gamma(n).unwrap();
    let nf = n as f64;
    let limit = 10.0 * nf * ln(nf) * (1.0 + gamma * ln(nf));
    let fast_median = median_of_successes(&fast_table);
    let pass = success_count(&ea_table) == 0 && success_count(&fast_table) == 100 && fast_median <= limit;
    let detail = format!(
        "EA {}/100 (need 0), Fast-IA {}/100 (need 100), Fast-IA median {fast_median} (need <= {limit:.1})",
        success_count(&ea_table),
        success_count(&fast_table)
    );
    report(6, "Trap dichotomy", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_07_jump_bound() {
    let config = ExperimentConfig {
        algo: AlgoKind::FastIa,
        benchmark: BenchmarkKind::Jump,
        d: Some(3),
        n: vec![20],
        gamma: vec![GammaPreset::InvLnN],
        trials: 100,
        budget: Some(Expr::parse("100*(d/gamma)*(1+gamma*ln(n))*binom(n,d)").unwrap()),
        seed: 77,
        ..Default::default()
    };
    let table = run_trials(&config).unwrap();
    let (n, d) = (20.0f64, 3.0);
    let gamma = 1.0 / ln(n);
    let bound = (d / gamma) * (1.0 + gamma * ln(n)) * 1140.0;
    let median = median_of_successes(&table);
    let pass = success_count(&table) >= 95 && median <= 20.0 * bound;
    let detail = format!(
        "success {}/100 (need >= 95), median {median} (need <= {:.0})",
        success_count(&table),
        20.0 * bound
    );
    report(7, "Jump bound", pass, &detail);
    assert!(pass, "{detail}");
}

fn cliff_config(operator: OperatorKind, gamma: GammaPreset, seed: u64) -> ExperimentConfig {
    ExperimentConfig {
        algo: AlgoKind::OptIa,
        benchmark: BenchmarkKind::Cliff,
        d: Some(16),
        n: vec![64],
        gamma: vec![gamma],
        operator,
        mode: ConstructiveMode::Gt,
        mu: 1,
        dup: 1,
        tau: Some(Expr::parse("2*n*ln(n)").unwrap()),
        trials: 100,
        budget: Some(Expr::parse("10^6").unwrap()),
        seed,
        ..Default::default()
    }
}

#[test]
fn criterion_08_cliff_trichotomy() {
    let n = 64.0f64;
    let bm_small = run_trials(&cliff_config(OperatorKind::PhypeBm, GammaPreset::InvNLog2Sq, 81)).unwrap();
    let fcm_small = run_trials(&cliff_config(OperatorKind::PhypeFcm, GammaPreset::InvNLog2Sq, 82)).unwrap();
    let bm_large = run_trials(&cliff_config(OperatorKind::PhypeBm, GammaPreset::InvLnN, 83)).unwrap();
    let limit = 50.0 * n * ln(n);
    let a_median = median_of_successes(&bm_small);
    let a = success_count(&bm_small) >= 95 && a_median <= limit;
    let b = success_count(&fcm_small) <= 5;
    let c = success_count(&bm_large) <= 5;
    let pass = a && b && c;
    let detail = format!(
        "(a) BM small gamma {}/100 (need >= 95), median {a_median} (need <= {limit:.0}) {}; \
         (b) FCM small gamma {}/100 (need <= 5) {}; (c) BM gamma=1/ln n {}/100 (need <= 5) {}",
        success_count(&bm_small),
        if a { "ok" } else { "violated" },
        success_count(&fcm_small),
        if b { "ok" } else { "violated" },
        success_count(&bm_large),
        if c { "ok" } else { "violated" },
    );
    report(8, "Cliff trichotomy", pass, &detail);
    assert!(pass, "{detail}");
}

#[test]
fn criterion_09_hidden_path() {
    let config = ExperimentConfig {
        algo: AlgoKind::OptIa,
        benchmark: BenchmarkKind::HiddenPath,
        n: vec![32],
        gamma: vec![GammaPreset::QuarterInvLnN],
        operator: OperatorKind::PhypeFcm,
        mode: ConstructiveMode::Gt,
        mu: 5,
        dup: 1,
        tau: Some(Expr::parse("n*ln(n)^2").unwrap()),
        trials: 100,
        budget: Some(Expr::parse("10^7").unwrap()),
        seed: 99,
        ..Default::default()
    };
    let table = run_trials(&config).unwrap();
    let pass = success_count(&table) >= 80;
    let detail = format!(
        "success {}/100 (need >= 80), median {}",
        success_count(&table),
        median_of_successes(&table)
    );
    report(9, "HiddenPath solvability", pass, &detail);
    assert!(pass, "{detail}");
}

/// Records the Hamming distance to the parent of every evaluated string.
struct DistanceLog<'a> {
    parent: Bitstring,
    benchmark: &'a Benchmark,
    distances: Vec<usize>,
}

impl Evaluate for DistanceLog<'_> {
    fn evaluate(&mut self, x: &Bitstring) -> Option<Fitness> {
        self.distances.push(hamming_distance(&self.parent, x).unwrap());
        Some(self.benchmark.value(x))
    }
}

/// One named sub-check of the property criterion.
struct Checks(Vec<(&'static str, bool, String)>);

impl Checks {
    fn add(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) {
        self.0.push((name, ok, detail.into()));
    }
}

fn check_flip_distinctness(checks: &mut Checks) {
    let mut rng = RandomSource::from_seed(1001);
    let mut ok = true;
    for n in [1usize, 2, 7, 33, 100] {
        let b = Benchmark::one_max(n).unwrap();
        // gamma = 2 evaluates most steps; the orders are the same for any gamma
        let schedule = ParabolicSchedule::new(n, 2.0).unwrap();
        for _ in 0..500 {
            let parent = Bitstring::random(n, &mut rng).unwrap();
            let mut log = DistanceLog {
                parent: parent.clone(),
                benchmark: &b,
                distances: vec![],
            };
            let fp = b.value(&parent);
            let out = phype_bm(&parent, fp, &mut log, &schedule, &mut rng);
            // each step flips a fresh position, so the distance after step i is i
            ok &= log.distances.windows(2).all(|w| w[0] < w[1]);
            ok &= out.evals_used == log.distances.len();
            let mut order = FlipOrder::new(n);
            let mut seen = vec![false; n];
            let mut front = 0;
            let mut back = 0;
            while front + back < n {
                let p = if rng.random_bool(0.5) {
                    front += 1;
                    order.next_front(&mut rng)
                } else {
                    back += 1;
                    order.next_back(&mut rng)
                };
                ok &= !seen[p];
                seen[p] = true;
            }
            ok &= seen.iter().all(|&s| s);
            let mut full = parent.clone();
            for step in 1..=n {
                full.flip(order.position_at(step).unwrap());
            }
            ok &= full == parent.complement();
        }
    }
    checks.add("flip distinctness", ok, "distances strictly increase, orders are permutations");
}

fn check_prefix_uniformity(checks: &mut Checks) {
    let mut rng = RandomSource::from_seed(1002);
    let mut failed = Vec::new();
    for n in 4..=8usize {
        for k in 1..=3usize {
            let t = prefix_subset_chi_square(n, k, 200 * immuno_opt::lab::expr::binom(n as f64, k as f64) as usize, &mut rng).unwrap();
            if !t.passes() {
                failed.push(format!("n={n} k={k} p={:.4}", t.test.p_value));
            }
        }
    }
    let ok = failed.is_empty();
    checks.add("prefix-subset chi-square", ok, if ok { "15 (n, k) pairs at alpha 0.01".into() } else { failed.join(", ") });
}

fn check_fcm_contracts(checks: &mut Checks) {
    let mut rng = RandomSource::from_seed(1003);
    let mut stop_ok = true;
    let mut monotone_ok = true;
    for n in [8usize, 20, 50] {
        let b = Benchmark::one_max(n).unwrap();
        let schedule = ParabolicSchedule::new(n, 1.0).unwrap();
        for trial in 0..2000u64 {
            let parent = Bitstring::random(n, &mut rng).unwrap();
            let fp = b.value(&parent);
            let mut log = DistanceLog {
                parent: parent.clone(),
                benchmark: &b,
                distances: vec![],
            };
            let out = phype_fcm(&parent, fp, &mut log, &schedule, ConstructiveMode::Geq, &mut rng);
            if out.constructive_found {
                stop_ok &= log.distances.last().copied() == out.stop_step;
            }
            let mut gt_rng = RandomSource::from_seed(trial * 7 + n as u64);
            let mut geq_rng = gt_rng.clone();
            let mut ev = Counted::new(&b);
            let gt = phype_fcm(&parent, fp, &mut ev, &schedule, ConstructiveMode::Gt, &mut gt_rng);
            let geq = phype_fcm(&parent, fp, &mut ev, &schedule, ConstructiveMode::Geq, &mut geq_rng);
            if gt.constructive_found {
                monotone_ok &= geq.constructive_found && geq.stop_step <= gt.stop_step;
            }
        }
    }
    checks.add("FCM stop contract", stop_ok, "no evaluation after the stop step");
    checks.add("mode monotonicity", monotone_ok, "geq stops no later than gt on the same stream");
}

fn check_benchmark_laws(checks: &mut Checks) {
    let mut offsets_ok = true;
    let mut slopes_ok = true;
    for n in 5..=12usize {
        for d in 1..n.div_ceil(2) {
            let jump = Benchmark::new(BenchmarkKind::Jump, n, Some(d), None).unwrap();
            let cliff = Benchmark::new(BenchmarkKind::Cliff, n, Some(d), None).unwrap();
            for mask in 0u32..(1 << n) {
                let x = Bitstring::from_bits(&(0..n).map(|i| mask >> i & 1 == 1).collect::<Vec<_>>()).unwrap();
                let ones = x.count_ones();
                if ones <= n - d {
                    offsets_ok &= jump.value(&x).value() == ones as f64 + d as f64;
                    offsets_ok &= cliff.value(&x).value() == ones as f64;
                }
            }
            let levels: Vec<f64> = (0..=n).map(|a| cliff.value_at_level(a).unwrap().value()).collect();
            slopes_ok &= levels[..=n - d].windows(2).all(|w| w[0] < w[1]);
            slopes_ok &= levels[n - d + 1..].windows(2).all(|w| w[0] < w[1]);
        }
    }
    checks.add("jump/cliff offsets", offsets_ok, "exhaustive for n = 5..12 below the gap");
    checks.add("cliff slopes", slopes_ok, "strictly increasing on both branches");

    let mut rng = RandomSource::from_seed(1004);
    let mut unitation_ok = true;
    for kind in [BenchmarkKind::OneMax, BenchmarkKind::Trap, BenchmarkKind::Jump, BenchmarkKind::Cliff] {
        let d = matches!(kind, BenchmarkKind::Jump | BenchmarkKind::Cliff).then_some(3);
        let b = Benchmark::new(kind, 30, d, None).unwrap();
        for _ in 0..200 {
            let x = Bitstring::random(30, &mut rng).unwrap();
            let mut bits = x.to_bits();
            rand::seq::SliceRandom::shuffle(bits.as_mut_slice(), &mut rng);
            unitation_ok &= b.value(&x) == b.value(&Bitstring::from_bits(&bits).unwrap());
        }
    }
    checks.add("unitation", unitation_ok, "permuted strings score equally");

    let hp = Benchmark::new(BenchmarkKind::HiddenPath, 32, None, None).unwrap();
    let mut hp_ok = true;
    for i in 0..32 {
        let mut x = Bitstring::zeros(32).unwrap();
        x.flip(i);
        hp_ok &= hp.value(&x).value() == 32.0 && hp.is_global_optimum(&x);
    }
    for _ in 0..20_000 {
        let x = Bitstring::random(32, &mut rng).unwrap();
        hp_ok &= hp.value(&x).value() < 32.0;
    }
    let mut sp_end = Bitstring::ones(32).unwrap();
    for i in 26..32 {
        sp_end.set(i, false);
    }
    let sp_value = hp.value(&sp_end).value();
    hp_ok &= sp_value <= 32.0;
    checks.add(
        "HiddenPath maximum",
        hp_ok,
        format!("value 32 exactly at the strings with 31 zeros (1^26 0^6 scores {sp_value:.4})"),
    );
}

fn check_population_rules(checks: &mut Checks) {
    let mut size_ok = true;
    let mut age_ok = true;
    let mut conservation_ok = true;
    let cliff = Benchmark::new(BenchmarkKind::Cliff, 24, Some(4), None).unwrap();
    let onemax = Benchmark::one_max(24).unwrap();
    for (b, operator, mu, dup) in [
        (&cliff, OperatorKind::PhypeBm, 1, 1),
        (&cliff, OperatorKind::PhypeFcm, 3, 2),
        (&onemax, OperatorKind::StaticFcm, 4, 1),
        (&onemax, OperatorKind::PhypeFcm, 2, 3),
    ] {
        let config = OptIaConfig {
            mu,
            dup,
            tau: 10,
            operator,
            gamma: GammaPreset::InvLnN,
            mode: ConstructiveMode::Gt,
        };
        for seed in 0..20 {
            let mut rng = RandomSource::from_seed(seed);
            let mut run = OptIa::new(b, config, 200_000, &mut rng).unwrap();
            loop {
                let (more, trace) = run.step_traced(&mut rng).unwrap();
                for (parent, child) in &trace {
                    let expected = if child.fitness > parent.fitness { 0 } else { parent.age };
                    age_ok &= child.age == expected;
                }
                if !more {
                    break;
                }
                size_ok &= run.population().len() == mu;
            }
            let r = run.result();
            conservation_ok &= r.evaluations == r.init_evaluations + r.operator_evaluations;
        }
    }
    let mut rng = RandomSource::from_seed(1005);
    let b = Benchmark::new(BenchmarkKind::Jump, 12, Some(2), None).unwrap();
    let runs: [fn(&Benchmark, &mut RandomSource) -> RunResult; 5] = [
        |b, r| run_one_plus_one_fast_ia(b, GammaPreset::InvLnN, ConstructiveMode::Gt, 5000, r).unwrap(),
        |b, r| run_one_plus_one_ia_hyp(b, ConstructiveMode::Geq, 5000, r).unwrap(),
        |b, r| run_one_plus_one_ea(b, 5000, r).unwrap(),
        |b, r| run_rls_k(b, 2, 5000, r).unwrap(),
        |b, r| {
            let config = OptIaConfig {
                mu: 2,
                dup: 1,
                tau: 30,
                operator: OperatorKind::PhypeBm,
                gamma: GammaPreset::InvLnN,
                mode: ConstructiveMode::Gt,
            };
            run_fast_opt_ia(b, config, 5000, r).unwrap()
        },
    ];
    for run in runs {
        for _ in 0..50 {
            let r = run(&b, &mut rng);
            conservation_ok &= r.evaluations == r.init_evaluations + r.operator_evaluations && r.evaluations <= r.budget;
        }
    }
    checks.add("population-size constancy", size_ok, "mu b-cells after every generation");
    checks.add("age rules", age_ok, "age 0 iff strictly better, else parent age");
    checks.add("counter conservation", conservation_ok, "evaluations = init + operator evaluations <= budget");
}

fn check_tie_breaks(checks: &mut Checks) {
    let mut rng = RandomSource::from_seed(1006);
    const DRAWS: usize = 30_000;
    let mut counts = [0usize; 3];
    for _ in 0..DRAWS {
        let pop: Vec<Individual> = (0..4)
            .map(|i| Individual {
                genotype: Bitstring::from_bits(&[i & 1 == 1, i & 2 == 2]).unwrap(),
                fitness: Fitness(if i == 3 { 0.0 } else { 1.0 }),
                age: i as u64,
            })
            .collect();
        let kept = truncation_selection(pop, 1, &mut rng);
        counts[kept[0].age as usize] += 1;
    }
    let tie_ok = counts.iter().all(|&c| ((c as f64 / DRAWS as f64) - 1.0 / 3.0).abs() < 4.0 * (2.0f64 / 9.0 / DRAWS as f64).sqrt());

    let mu = 3;
    let mut survivors = 0usize;
    let trials = 20_000;
    for _ in 0..trials {
        let pop = vec![Individual {
            genotype: Bitstring::zeros(4).unwrap(),
            fitness: Fitness(1.0),
            age: 50,
        }];
        survivors += hybrid_ageing_step(pop, 10, mu, &mut rng).len();
    }
    let rate = survivors as f64 / trials as f64;
    let expected = 1.0 / (mu as f64 + 1.0);
    let ageing_ok = (rate - expected).abs() < 4.0 * (expected * (1.0 - expected) / trials as f64).sqrt();
    checks.add("tie-break frequencies", tie_ok && ageing_ok, format!("tie shares {counts:?}, old-cell survival {rate:.4} vs {expected:.4}"));
}

fn check_determinism(checks: &mut Checks) {
    let config = ExperimentConfig {
        algo: AlgoKind::OptIa,
        benchmark: BenchmarkKind::Jump,
        d: Some(2),
        n: vec![14, 10],
        gamma: vec![GammaPreset::InvLnN, GammaPreset::Const(1.0)],
        mu: 2,
        tau: Some(Expr::parse("n*ln(n)").unwrap()),
        trials: 8,
        seed: 4242,
        ..Default::default()
    };
    let serial = run_trials_with_workers(&config, 1).unwrap();
    let again = run_trials_with_workers(&config, 1).unwrap();
    let parallel = run_trials_with_workers(&config, 4).unwrap();
    let sorted = serial
        .rows
        .windows(2)
        .all(|w| (w[0].n, w[0].gamma.unwrap(), w[0].trial) < (w[1].n, w[1].gamma.unwrap(), w[1].trial));
    let ok = serial == again
        && serial == parallel
        && serial.len() == 2 * 2 * 8
        && sorted
        && serial.to_csv_string() == parallel.to_csv_string();

    let base = ExperimentConfig {
        n: vec![20],
        trials: 5,
        seed: 9,
        gamma: vec![GammaPreset::Const(1.0)],
        ..Default::default()
    };
    let paired = compare(&base, &ExperimentConfig { seed: 10, ..base.clone() }).unwrap();
    let paired_ok = paired.points[0].median_ratio == 1.0;

    let starved = run_trials(&ExperimentConfig {
        benchmark: BenchmarkKind::Jump,
        d: Some(2),
        n: vec![10, 12],
        trials: 10,
        budget: Some(Expr::parse("3").unwrap()),
        ..Default::default()
    })
    .unwrap();
    let refused = success_count(&starved) < 9 && fit_scaling(&starved, ScalingModel::POWER).is_err();
    checks.add("determinism", ok, "serial, repeated and parallel tables identical and sorted");
    checks.add("paired seeds", paired_ok, "identical configs compare at ratio 1");
    checks.add("fit refusal", refused, "points below 90% success are rejected");
}

fn check_level_chains(checks: &mut Checks) {
    let mut max_dev: f64 = 0.0;
    for n in 2..=14usize {
        let b = Benchmark::one_max(n).unwrap();
        for mode in [ConstructiveMode::Geq, ConstructiveMode::Gt] {
            for gamma in [0.1, 1.0, 2.0] {
                let chain = LevelChain::fast_ia(&b, gamma, mode).unwrap();
                for s in chain.row_sums() {
                    max_dev = max_dev.max((s - 1.0).abs());
                }
            }
        }
    }
    checks.add("level chain rows", max_dev <= 1e-12, format!("max |row sum - 1| = {max_dev:.2e}"));
}

fn check_oracle_agreement(checks: &mut Checks) {
    const TRIALS: u64 = 100_000;
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    for n in 4..=12usize {
        let gap = if n >= 5 { 2 } else { 1 };
        for (kind, d) in [
            (BenchmarkKind::OneMax, None),
            (BenchmarkKind::Trap, None),
            (BenchmarkKind::Jump, Some(gap)),
            (BenchmarkKind::Cliff, Some(gap)),
        ] {
            let b = Benchmark::new(kind, n, d, None).unwrap();
            let mode = if n % 2 == 0 { ConstructiveMode::Gt } else { ConstructiveMode::Geq };
            let preset = GammaPreset::InvLnN;
            let exact = exact_fast_ia_expected_evals(&b, preset.gamma(n).unwrap(), mode).unwrap();
            let evals: Vec<f64> = (0..TRIALS)
                .map(|t| {
                    let mut rng = RandomSource::for_trial(777 + n as u64, t);
                    run_one_plus_one_fast_ia(&b, preset, mode, u64::MAX, &mut rng).unwrap().evaluations as f64
                })
                .collect();
            let (mean, se) = mean_se(&evals);
            let z = (mean - exact).abs() / se;
            worst = worst.max(z);
            if z > 3.0 {
                failures.push(format!("{kind} n={n}: z={z:.2}"));
            }
        }
    }
    let ok = failures.is_empty();
    checks.add(
        "oracle agreement n=4..12",
        ok,
        if ok { format!("36 settings, max |z| = {worst:.2}") } else { failures.join(", ") },
    );
}

fn check_schedule_sum_bound(checks: &mut Checks) {
    let mut sizes: Vec<usize> = (4..=2000).collect();
    let mut n = 2000f64;
    while n < 1e6 {
        n *= 1.05;
        sizes.push(n.round() as usize);
    }
    sizes.push(1_000_000);
    let mut violations = 0;
    let mut total = 0;
    let mut worst = (0usize, 0.0f64, 0.0f64);
    for &n in &sizes {
        let nf = n as f64;
        for gamma in [0.1, 1.0 / nf.ln(), 1.0] {
            let sum = exact_schedule_sum(n, gamma).unwrap();
            let bound = 2.0 / std::f64::consts::E + 2.0 * gamma * (nf / 2.0).ln();
            total += 1;
            if sum > bound {
                violations += 1;
                if sum - bound > worst.2 {
                    worst = (n, gamma, sum - bound);
                }
            }
        }
    }
    checks.add(
        "schedule-sum bound",
        violations == 0,
        format!(
            "{violations}/{total} (n, gamma) exceed 2/e + 2 gamma ln(n/2); largest excess {:.4} at n={} gamma={:.4}",
            worst.2, worst.0, worst.1
        ),
    );
}

fn check_non_elitism(checks: &mut Checks) {
    let config = cliff_config(OperatorKind::PhypeBm, GammaPreset::InvNLog2Sq, 1010);
    let point = &config.points().unwrap()[0];
    let mut successes = 0;
    let mut with_regression = 0;
    for trial in 0..50 {
        let r = immuno_opt::lab::run_single(&config, point, trial).unwrap();
        if r.success {
            successes += 1;
            if r.best_regressions > 0 {
                with_regression += 1;
            }
        }
    }
    let ok = successes > 0 && 2 * with_regression >= successes;
    checks.add(
        "non-elitism witness",
        ok,
        format!("{with_regression} of {successes} successful Cliff runs lost their best fitness at least once"),
    );
}

#[test]
fn criterion_10_property_suites() {
    let mut checks = Checks(Vec::new());
    check_flip_distinctness(&mut checks);
    check_prefix_uniformity(&mut checks);
    check_fcm_contracts(&mut checks);
    check_benchmark_laws(&mut checks);
    check_population_rules(&mut checks);
    check_tie_breaks(&mut checks);
    check_determinism(&mut checks);
    check_level_chains(&mut checks);
    check_oracle_agreement(&mut checks);
    check_schedule_sum_bound(&mut checks);
    check_non_elitism(&mut checks);

    let mut err = std::io::stderr().lock();
    for (name, ok, detail) in &checks.0 {
        let _ = writeln!(err, "[acceptance]     {} {name}: {detail}", if *ok { "ok  " } else { "FAIL" });
    }
    drop(err);
    let failed: Vec<&str> = checks.0.iter().filter(|c| !c.1).map(|c| c.0).collect();
    let pass = failed.is_empty();
    let detail = if pass {
        format!("{} property checks hold", checks.0.len())
    } else {
        format!("{} of {} checks fail: {}", failed.len(), checks.0.len(), failed.join(", "))
    };
    report(10, "property suites", pass, &detail);
    assert!(pass, "{detail}");
}
