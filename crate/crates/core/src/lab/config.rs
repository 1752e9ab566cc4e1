//! Experiment descriptions and their flat `key = value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algorithms::{OperatorKind, OptIaConfig};
use crate::benchmarks::{Benchmark, BenchmarkKind};
use crate::error::{Error, Result};
use crate::lab::expr::{Expr, Vars};
use crate::operators::{ConstructiveMode, GammaPreset};

/// Which optimization loop an experiment runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgoKind {
    FastIa,
    IaHyp,
    Ea,
    Rls,
    OptIa,
}

impl AlgoKind {
    pub const ALL: [AlgoKind; 5] = [
        AlgoKind::FastIa,
        AlgoKind::IaHyp,
        AlgoKind::Ea,
        AlgoKind::Rls,
        AlgoKind::OptIa,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AlgoKind::FastIa => "fast-ia",
            AlgoKind::IaHyp => "ia-hyp",
            AlgoKind::Ea => "ea",
            AlgoKind::Rls => "rls",
            AlgoKind::OptIa => "opt-ia",
        }
    }

    /// Whether the parabolic schedule (and thus gamma) is involved.
    pub fn uses_gamma(self, operator: OperatorKind) -> bool {
        match self {
            AlgoKind::FastIa => true,
            AlgoKind::OptIa => operator != OperatorKind::StaticFcm,
            _ => false,
        }
    }
}

impl fmt::Display for AlgoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AlgoKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let key = match key.as_str() {
            "1+1-fast-ia" | "fastia" => "fast-ia",
            "iahyp" | "1+1-ia-hyp" => "ia-hyp",
            "1+1-ea" => "ea",
            "rls-k" => "rls",
            "optia" | "fast-opt-ia" => "opt-ia",
            other => other,
        };
        AlgoKind::ALL
            .into_iter()
            .find(|a| a.name() == key)
            .ok_or_else(|| Error::UnknownName {
                kind: "algorithm",
                value: s.to_string(),
                options: AlgoKind::ALL.map(|a| a.name()).join(", "),
            })
    }
}

/// Everything needed to reproduce a batch of runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algo: AlgoKind,
    pub benchmark: BenchmarkKind,
    /// Gap of Jump and Cliff.
    pub d: Option<usize>,
    /// HiddenPath plateau offset.
    pub epsilon: Option<f64>,
    pub n: Vec<usize>,
    pub gamma: Vec<GammaPreset>,
    pub mode: ConstructiveMode,
    /// Hypermutation used by `opt-ia`.
    pub operator: OperatorKind,
    pub mu: usize,
    pub dup: usize,
    /// Ageing threshold of `opt-ia`, as an expression in `n`.
    pub tau: Option<Expr>,
    /// Bits flipped by `rls`.
    pub k: usize,
    /// Mutation rate of `ea`; `1/n` when absent.
    pub rate: Option<Expr>,
    pub trials: usize,
    /// Evaluation budget per run; the benchmark default when absent.
    pub budget: Option<Expr>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            algo: AlgoKind::FastIa,
            benchmark: BenchmarkKind::OneMax,
            d: None,
            epsilon: None,
            n: vec![100],
            gamma: vec![GammaPreset::InvLnN],
            mode: ConstructiveMode::Gt,
            operator: OperatorKind::PhypeBm,
            mu: 1,
            dup: 1,
            tau: None,
            k: 1,
            rate: None,
            trials: 10,
            budget: None,
            seed: 0,
            out: None,
        }
    }
}

/// Default evaluation budget of a benchmark, as an expression in `n` and
/// `d`. Each one is a multiple of the slowest polynomial runtime among the
/// implemented algorithms on that benchmark.
pub fn default_budget(kind: BenchmarkKind) -> Expr {
    let src = match kind {
        BenchmarkKind::OneMax | BenchmarkKind::Trap => "20*n^2*ln(n)",
        BenchmarkKind::LeadingOnes => "20*n^3",
        BenchmarkKind::Jump | BenchmarkKind::Cliff => "20*n*binom(n,d)",
        BenchmarkKind::HiddenPath => "1000*n^(5/2)*ln(n)",
    };
    Expr::parse(src).expect("valid default budget")
}

/// One `(n, gamma)` grid point with every derived quantity resolved.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub benchmark: Benchmark,
    pub gamma_preset: Option<GammaPreset>,
    pub gamma: Option<f64>,
    pub budget: u64,
    pub tau: Option<u64>,
    pub rate: Option<f64>,
}

impl Point {
    pub fn n(&self) -> usize {
        self.benchmark.n()
    }

    pub(crate) fn opt_ia_config(&self, config: &ExperimentConfig) -> OptIaConfig {
        OptIaConfig {
            mu: config.mu,
            dup: config.dup,
            tau: self.tau.expect("resolved for opt-ia"),
            operator: config.operator,
            // unused by the static operator
            gamma: self.gamma_preset.unwrap_or(GammaPreset::Const(1.0)),
            mode: config.mode,
        }
    }
}

impl ExperimentConfig {
    /// Operator name reported in result tables.
    pub fn operator_name(&self) -> String {
        match self.algo {
            AlgoKind::FastIa => OperatorKind::PhypeFcm.name().to_string(),
            AlgoKind::IaHyp => OperatorKind::StaticFcm.name().to_string(),
            AlgoKind::Ea => "sbm".to_string(),
            AlgoKind::Rls => format!("rls_{}", self.k),
            AlgoKind::OptIa => self.operator.name().to_string(),
        }
    }

    /// Whether the stopping mode affects the runs.
    pub fn uses_mode(&self) -> bool {
        match self.algo {
            AlgoKind::FastIa | AlgoKind::IaHyp => true,
            AlgoKind::OptIa => self.operator != OperatorKind::PhypeBm,
            AlgoKind::Ea | AlgoKind::Rls => false,
        }
    }

    pub fn budget_expr(&self) -> Expr {
        self.budget.clone().unwrap_or_else(|| default_budget(self.benchmark))
    }

    /// Resolves and validates every grid point, sorted by `(n, gamma)`.
    pub fn points(&self) -> Result<Vec<Point>> {
        if self.n.is_empty() {
            return Err(Error::param("n", "the list of sizes is empty"));
        }
        if self.trials == 0 {
            return Err(Error::param("trials", "must be at least 1"));
        }
        let uses_gamma = self.algo.uses_gamma(self.operator);
        if uses_gamma && self.gamma.is_empty() {
            return Err(Error::param("gamma", "the list of presets is empty"));
        }
        if !uses_gamma && self.gamma.len() > 1 {
            return Err(Error::param(
                "gamma",
                format!("{} does not use the evaluation schedule; give at most one preset", self.algo),
            ));
        }
        if self.algo == AlgoKind::OptIa && self.tau.is_none() {
            return Err(Error::param("tau", "required for opt-ia, e.g. tau = 2*n*ln(n)"));
        }
        let budget = self.budget_expr();
        let mut points = Vec::new();
        let mut sizes = self.n.clone();
        sizes.sort_unstable();
        sizes.dedup();
        for &n in &sizes {
            let benchmark = Benchmark::new(self.benchmark, n, self.d, self.epsilon)?;
            let presets: Vec<Option<GammaPreset>> = if uses_gamma {
                self.gamma.iter().copied().map(Some).collect()
            } else {
                vec![None]
            };
            for preset in presets {
                let gamma = preset.map(|p| p.gamma(n)).transpose()?;
                let vars = Vars {
                    n: n as f64,
                    d: self.d.map(|d| d as f64),
                    gamma,
                    mu: Some(self.mu as f64),
                };
                let budget = budget.eval_count(&vars)?;
                let tau = match (&self.tau, self.algo) {
                    (Some(t), AlgoKind::OptIa) => Some(t.eval_count(&vars)?),
                    _ => None,
                };
                let rate = match self.algo {
                    AlgoKind::Ea => {
                        let r = match &self.rate {
                            Some(e) => e.eval(&vars)?,
                            None => 1.0 / n as f64,
                        };
                        if !(0.0..=1.0).contains(&r) {
                            return Err(Error::param("rate", format!("need 0 <= rate <= 1, got {r}")));
                        }
                        Some(r)
                    }
                    _ => None,
                };
                match self.algo {
                    AlgoKind::Rls if self.k == 0 || self.k > n => {
                        return Err(Error::param("k", format!("need 1 <= k <= n = {n}, got {}", self.k)));
                    }
                    AlgoKind::OptIa => {
                        let point = Point {
                            benchmark,
                            gamma_preset: preset,
                            gamma,
                            budget,
                            tau,
                            rate,
                        };
                        point.opt_ia_config(self).validate()?;
                        if budget < self.mu as u64 {
                            return Err(Error::param("budget", format!("need budget >= mu at n = {n}")));
                        }
                    }
                    _ => {}
                }
                points.push(Point {
                    benchmark,
                    gamma_preset: preset,
                    gamma,
                    budget,
                    tau,
                    rate,
                });
            }
        }
        points.sort_by(|a, b| {
            a.n()
                .cmp(&b.n())
                .then(a.gamma.unwrap_or(f64::NEG_INFINITY).total_cmp(&b.gamma.unwrap_or(f64::NEG_INFINITY)))
        });
        Ok(points)
    }

    /// Canonical text form, readable by [`ExperimentConfig::parse`].
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("algo = {}", self.algo),
            format!("benchmark = {}", self.benchmark),
        ];
        if let Some(d) = self.d {
            lines.push(format!("d = {d}"));
        }
        if let Some(eps) = self.epsilon {
            lines.push(format!("epsilon = {eps}"));
        }
        lines.push(format!("n = {}", join(&self.n)));
        lines.push(format!("gamma = {}", join(&self.gamma)));
        lines.push(format!("mode = {}", self.mode.name()));
        lines.push(format!("operator = {}", self.operator));
        lines.push(format!("mu = {}", self.mu));
        lines.push(format!("dup = {}", self.dup));
        if let Some(tau) = &self.tau {
            lines.push(format!("tau = {tau}"));
        }
        lines.push(format!("k = {}", self.k));
        if let Some(rate) = &self.rate {
            lines.push(format!("rate = {rate}"));
        }
        lines.push(format!("trials = {}", self.trials));
        if let Some(budget) = &self.budget {
            lines.push(format!("budget = {budget}"));
        }
        lines.push(format!("seed = {}", self.seed));
        if let Some(out) = &self.out {
            lines.push(format!("out = {}", out.display()));
        }
        lines.join("\n") + "\n"
    }

    /// Hex digest of everything that determines the results (the output
    /// path excluded).
    pub fn hash(&self) -> String {
        let mut canonical = self.clone();
        canonical.out = None;
        let digest = Sha256::digest(canonical.to_text().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Parses the text form: one `key = value` per line, `#` starts a
    /// comment, lists are comma separated. Missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| Error::Config {
                line: idx + 1,
                reason: e.to_string(),
            };
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: idx + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            config.set(key.trim(), value.trim()).map_err(at)?;
        }
        Ok(config)
    }

    pub fn from_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Sets one field from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.to_ascii_lowercase().as_str() {
            "algo" | "algorithm" => self.algo = value.parse()?,
            "benchmark" => self.benchmark = value.parse()?,
            "d" => self.d = Some(parse_num("d", value)?),
            "epsilon" => self.epsilon = Some(parse_num("epsilon", value)?),
            "n" => self.n = parse_list("n", value)?,
            "gamma" => self.gamma = parse_list("gamma", value)?,
            "mode" => self.mode = value.parse()?,
            "operator" => self.operator = value.parse()?,
            "mu" => self.mu = parse_num("mu", value)?,
            "dup" => self.dup = parse_num("dup", value)?,
            "tau" => self.tau = Some(value.parse()?),
            "k" => self.k = parse_num("k", value)?,
            "rate" => self.rate = Some(value.parse()?),
            "trials" => self.trials = parse_num("trials", value)?,
            "budget" => self.budget = Some(value.parse()?),
            "seed" => self.seed = parse_num("seed", value)?,
            "out" => self.out = Some(PathBuf::from(value)),
            other => {
                return Err(Error::UnknownName {
                    kind: "config key",
                    value: other.to_string(),
                    options: "algo, benchmark, d, epsilon, n, gamma, mode, operator, mu, dup, tau, k, rate, \
                              trials, budget, seed, out"
                        .to_string(),
                })
            }
        }
        Ok(())
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn parse_num<T: FromStr>(name: &'static str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::param(name, format!("cannot parse `{value}`")))
}

/// Comma separated list. Commas inside parentheses do not split, so
/// `const(0.5)` style presets survive.
fn parse_list<T>(name: &'static str, value: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    let mut items = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = value.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b',' if depth == 0 => {
                items.push(&value[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    items.push(&value[start..]);
    items
        .into_iter()
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| Error::param(name, format!("`{s}`: {e}"))))
        .collect()
}
