//! The `immuno-opt` command line tool.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::benchmarks::{Benchmark, BenchmarkKind};
use crate::error::{Error, Result};
use crate::lab::config::{AlgoKind, ExperimentConfig};
use crate::lab::fit::{filter_gamma, fit_scaling, plot_svg, ScalingModel};
use crate::lab::runner::{compare, run_trials, Comparison};
use crate::lab::table::{format_float, TrialTable};
use crate::operators::{ConstructiveMode, GammaPreset};
use crate::oracle;
use crate::rng::RandomSource;

#[derive(Debug, Parser)]
#[command(name = "immuno-opt", version, about = "Runtime experiments with fast hypermutation operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the trials of a single grid point.
    Run(ExperimentArgs),
    /// Run every (n, gamma) point of a grid.
    Sweep(ExperimentArgs),
    /// Fit a scaling law to the medians of a result table.
    Fit(FitArgs),
    /// Exact reference values.
    Oracle {
        #[command(subcommand)]
        query: OracleQuery,
    },
    /// Paired comparison of two configurations on the same seeds.
    Compare(CompareArgs),
}

/// Experiment flags. They override the values read from `--config`.
#[derive(Debug, Default, Args)]
pub struct ExperimentArgs {
    /// `key = value` file; flags given on the command line take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// fast-ia, ia-hyp, ea, rls or opt-ia.
    #[arg(long)]
    pub algo: Option<String>,
    /// onemax, leadingones, trap, jump, cliff or hiddenpath.
    #[arg(long)]
    pub benchmark: Option<String>,
    /// Comma separated sizes.
    #[arg(long)]
    pub n: Option<String>,
    /// Comma separated presets: const(c) or a number, inv_ln_n, quarter_inv_ln_n, inv_n_log2_sq.
    #[arg(long)]
    pub gamma: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    /// Expression in n, d, gamma and mu, e.g. `20*n^2*ln(n)`.
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub d: Option<String>,
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub dup: Option<String>,
    /// Expression in n, e.g. `2*n*ln(n)`.
    #[arg(long)]
    pub tau: Option<String>,
    /// geq or gt.
    #[arg(long)]
    pub mode: Option<String>,
    /// phype_fcm, phype_bm or static_fcm (opt-ia only).
    #[arg(long)]
    pub operator: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    /// Mutation rate of ea, as an expression in n.
    #[arg(long)]
    pub rate: Option<String>,
    /// Result table; `.json` selects JSON, anything else CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ExperimentArgs {
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        self.apply(&mut config)?;
        Ok(config)
    }

    fn apply(&self, config: &mut ExperimentConfig) -> Result<()> {
        let pairs: [(&str, &Option<String>); 16] = [
            ("algo", &self.algo),
            ("benchmark", &self.benchmark),
            ("n", &self.n),
            ("gamma", &self.gamma),
            ("trials", &self.trials),
            ("budget", &self.budget),
            ("seed", &self.seed),
            ("d", &self.d),
            ("epsilon", &self.epsilon),
            ("mu", &self.mu),
            ("dup", &self.dup),
            ("tau", &self.tau),
            ("mode", &self.mode),
            ("operator", &self.operator),
            ("k", &self.k),
            ("rate", &self.rate),
        ];
        for (key, value) in pairs {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        if let Some(out) = &self.out {
            config.out = Some(out.clone());
        }
        Ok(())
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Result table written by `run` or `sweep`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// power (b=0), nlogn (b=1) or nlog2n (b=2).
    #[arg(long, default_value = "power")]
    pub model: String,
    /// Keep only rows produced with this gamma preset.
    #[arg(long)]
    pub filter_gamma: Option<String>,
    /// Write a log-log SVG plot here.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// Write the fit as JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum OracleQuery {
    /// Exact sum of the schedule probabilities next to the analytic bound.
    ScheduleSum {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "inv_ln_n")]
        gamma: String,
    },
    /// Exact expected evaluations of a (1+1) loop on a unitation function.
    Expected {
        /// fast-ia, ia-hyp or rls (k = 1).
        #[arg(long, default_value = "fast-ia")]
        algo: String,
        #[arg(long, default_value = "onemax")]
        benchmark: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value = "inv_ln_n")]
        gamma: String,
        #[arg(long, default_value = "gt")]
        mode: String,
    },
    /// Uniformity of the first k flipped positions over all k-subsets.
    ChiSquare {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Algorithm name or config file of the baseline.
    #[arg(long)]
    pub baseline: String,
    /// Algorithm name or config file of the candidate.
    #[arg(long)]
    pub candidate: String,
    /// Shared settings for sides given by algorithm name.
    #[command(flatten)]
    pub common: ExperimentArgs,
}

/// Parses `args` (program name first) and runs the command, writing the
/// report to `out`.
pub fn run_cli<I, T, W>(args: I, out: &mut W) -> Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            return write!(out, "{e}").map_err(|e| Error::Io(e.to_string()));
        }
        Err(e) => return Err(Error::Usage(e.to_string().trim_end().to_string())),
    };
    execute(cli.command, out)
}

pub fn execute<W: Write>(command: Command, out: &mut W) -> Result<()> {
    match command {
        Command::Run(args) => {
            let config = args.to_config()?;
            let points = config.points()?;
            if points.len() != 1 {
                return Err(Error::param(
                    "n",
                    format!("run takes a single grid point, got {}; use sweep", points.len()),
                ));
            }
            experiment(&config, out)
        }
        Command::Sweep(args) => experiment(&args.to_config()?, out),
        Command::Fit(args) => fit(&args, out),
        Command::Oracle { query } => oracle_query(query, out),
        Command::Compare(args) => {
            let baseline = side(&args.baseline, &args.common)?;
            let candidate = side(&args.candidate, &args.common)?;
            let comparison = compare(&baseline, &candidate)?;
            report_comparison(&comparison, out)?;
            if let Some(path) = &args.common.out {
                write_file(path, &serde_json::to_string_pretty(&comparison).expect("serializable"))?;
            }
            Ok(())
        }
    }
}

fn experiment<W: Write>(config: &ExperimentConfig, out: &mut W) -> Result<()> {
    let table = run_trials(config)?;
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(
        out,
        "# {} on {} | seed {} | config {}",
        config.algo,
        config.benchmark,
        config.seed,
        config.hash()
    )
    .map_err(io)?;
    writeln!(out, "n\tgamma\ttrials\tsuccesses\tmedian_evals\tmean_evals").map_err(io)?;
    for s in table.summaries() {
        let opt = |v: Option<f64>| v.map_or("-".to_string(), format_float);
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}",
            s.n,
            opt(s.gamma),
            s.trials,
            s.successes,
            opt(s.median_evaluations),
            opt(s.mean_evaluations)
        )
        .map_err(io)?;
    }
    if let Some(path) = &config.out {
        table.save(path)?;
        writeln!(out, "wrote {} rows to {}", table.len(), path.display()).map_err(io)?;
    }
    Ok(())
}

fn fit<W: Write>(args: &FitArgs, out: &mut W) -> Result<()> {
    let model: ScalingModel = args.model.parse()?;
    let mut table = TrialTable::load(&args.input)?;
    if let Some(g) = &args.filter_gamma {
        table = filter_gamma(&table, g.parse()?);
        if table.is_empty() {
            return Err(Error::Fit(format!("no rows with gamma preset {g}")));
        }
    }
    let fit = fit_scaling(&table, model)?;
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(
        out,
        "model {}: median ~ {} * n^{} * ln(n)^{}",
        fit.model,
        format_float(fit.constant),
        format_float(fit.exponent),
        fit.model.log_power
    )
    .map_err(io)?;
    writeln!(out, "exponent a = {:.4}", fit.exponent).map_err(io)?;
    writeln!(out, "constant c = {:.4}", fit.constant).map_err(io)?;
    writeln!(out, "residual norm = {:.4}", fit.residual_norm).map_err(io)?;
    for p in &fit.points {
        writeln!(out, "  n = {}\tmedian = {}\tsuccess = {:.2}", p.n, format_float(p.median), p.success_rate)
            .map_err(io)?;
    }
    if let Some(path) = &args.plot {
        write_file(path, &plot_svg(&fit))?;
    }
    if let Some(path) = &args.out {
        write_file(path, &serde_json::to_string_pretty(&fit).expect("serializable"))?;
    }
    Ok(())
}

fn oracle_query<W: Write>(query: OracleQuery, out: &mut W) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    match query {
        OracleQuery::ScheduleSum { n, gamma } => {
            let preset: GammaPreset = gamma.parse()?;
            let g = preset.gamma(n)?;
            let sum = oracle::exact_schedule_sum(n, g)?;
            let bound = oracle::schedule_sum_bound(n, g);
            writeln!(out, "n = {n}, gamma = {}", format_float(g)).map_err(io)?;
            writeln!(out, "sum = {}", format_float(sum)).map_err(io)?;
            writeln!(out, "bound = {}", format_float(bound)).map_err(io)?;
            writeln!(out, "within bound: {}", sum <= bound).map_err(io)?;
        }
        OracleQuery::Expected {
            algo,
            benchmark,
            n,
            d,
            gamma,
            mode,
        } => {
            let algo: AlgoKind = algo.parse()?;
            let kind: BenchmarkKind = benchmark.parse()?;
            let mode: ConstructiveMode = mode.parse()?;
            let b = Benchmark::new(kind, n, d, None)?;
            let value = match algo {
                AlgoKind::FastIa => oracle::exact_fast_ia_expected_evals(&b, GammaPreset::gamma(gamma.parse()?, n)?, mode)?,
                AlgoKind::IaHyp => oracle::exact_ia_hyp_expected_evals(&b, mode)?,
                AlgoKind::Rls => match kind {
                    BenchmarkKind::OneMax => oracle::rls1_onemax_expected_evals(n),
                    BenchmarkKind::LeadingOnes => oracle::rls1_leading_ones_expected_evals(n),
                    _ => {
                        return Err(Error::OracleUnsupported(format!(
                            "rls has closed forms on onemax and leadingones only, not {kind}"
                        )))
                    }
                },
                other => return Err(Error::OracleUnsupported(format!("no exact expectation for {other}"))),
            };
            writeln!(out, "expected evaluations = {}", format_float(value)).map_err(io)?;
        }
        OracleQuery::ChiSquare { n, k, samples, seed } => {
            let mut rng = RandomSource::from_seed(seed);
            let t = oracle::prefix_subset_chi_square(n, k, samples, &mut rng)?;
            writeln!(out, "n = {n}, k = {k}, bins = {}, samples = {samples}", t.bins).map_err(io)?;
            writeln!(
                out,
                "chi2 = {:.3}, df = {}, p = {:.4}",
                t.test.statistic, t.test.degrees_of_freedom, t.test.p_value
            )
            .map_err(io)?;
            writeln!(out, "uniform at alpha = 0.01: {}", t.passes()).map_err(io)?;
        }
    }
    Ok(())
}

/// A compare side: a config file when the path exists, otherwise an
/// algorithm name combined with the shared flags.
fn side(spec: &str, common: &ExperimentArgs) -> Result<ExperimentConfig> {
    let path = Path::new(spec);
    let mut config = if path.is_file() {
        ExperimentConfig::from_file(path)?
    } else {
        let mut c = match &common.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        c.algo = spec.parse()?;
        c
    };
    let algo = config.algo;
    common.apply(&mut config)?;
    if !path.is_file() {
        config.algo = algo;
    }
    config.out = None;
    Ok(config)
}

fn report_comparison<W: Write>(c: &Comparison, out: &mut W) -> Result<()> {
    let io = |e: std::io::Error| Error::Io(e.to_string());
    writeln!(out, "# baseline {} vs candidate {} | seed {}", c.baseline, c.candidate, c.seed).map_err(io)?;
    writeln!(out, "n\tgamma\tpairs\tbase_ok\tcand_ok\tbase_median\tcand_median\tmedian_ratio").map_err(io)?;
    for p in &c.points {
        let g = p.candidate_gamma.or(p.baseline_gamma).map_or("-".to_string(), format_float);
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.4}",
            p.n,
            g,
            p.pairs,
            p.baseline_successes,
            p.candidate_successes,
            format_float(p.baseline_median),
            format_float(p.candidate_median),
            p.median_ratio
        )
        .map_err(io)?;
    }
    Ok(())
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
