//! Per-trial result tables and their CSV and JSON forms.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::benchmarks::BenchmarkKind;
use crate::error::{Error, Result};
use crate::lab::config::AlgoKind;
use crate::operators::ConstructiveMode;

/// Column order of the CSV form.
pub const CSV_HEADER: [&str; 17] = [
    "trial",
    "algo",
    "operator",
    "benchmark",
    "n",
    "d",
    "gamma",
    "mu",
    "dup",
    "tau",
    "mode",
    "seed",
    "budget",
    "evaluations",
    "generations",
    "success",
    "best_fitness",
];

/// One run. Parameters that do not apply to the algorithm are `None` and
/// written as empty CSV fields.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub algo: AlgoKind,
    pub operator: String,
    pub benchmark: BenchmarkKind,
    pub n: usize,
    pub d: Option<usize>,
    pub gamma: Option<f64>,
    pub mu: Option<usize>,
    pub dup: Option<usize>,
    pub tau: Option<u64>,
    pub mode: Option<ConstructiveMode>,
    pub seed: u64,
    pub budget: u64,
    pub evaluations: u64,
    pub generations: u64,
    pub success: bool,
    pub best_fitness: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialTable {
    /// Digest of the generating configuration; absent for tables read back
    /// from CSV.
    pub config_hash: Option<String>,
    pub rows: Vec<TrialRecord>,
}

/// Aggregate of the trials at one `(n, gamma)` point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub n: usize,
    pub gamma: Option<f64>,
    pub trials: usize,
    pub successes: usize,
    /// Median evaluations over successful trials.
    pub median_evaluations: Option<f64>,
    pub mean_evaluations: Option<f64>,
}

impl PointSummary {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

impl TrialTable {
    pub fn new(config_hash: Option<String>, mut rows: Vec<TrialRecord>) -> Self {
        sort_rows(&mut rows);
        Self { config_hash, rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// One summary per `(n, gamma)`, in table order.
    pub fn summaries(&self) -> Vec<PointSummary> {
        let mut out: Vec<PointSummary> = Vec::new();
        let mut start = 0;
        while start < self.rows.len() {
            let key = (self.rows[start].n, self.rows[start].gamma);
            let end = self.rows[start..]
                .iter()
                .position(|r| (r.n, r.gamma) != key)
                .map_or(self.rows.len(), |p| start + p);
            let group = &self.rows[start..end];
            let evals: Vec<f64> = group
                .iter()
                .filter(|r| r.success)
                .map(|r| r.evaluations as f64)
                .collect();
            out.push(PointSummary {
                n: key.0,
                gamma: key.1,
                trials: group.len(),
                successes: evals.len(),
                median_evaluations: median(&evals),
                mean_evaluations: (!evals.is_empty()).then(|| evals.iter().sum::<f64>() / evals.len() as f64),
            });
            start = end;
        }
        out
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(CSV_HEADER).map_err(csv_error)?;
        for r in &self.rows {
            let fields = [
                r.trial.to_string(),
                r.algo.to_string(),
                r.operator.clone(),
                r.benchmark.to_string(),
                r.n.to_string(),
                opt(r.d),
                r.gamma.map(format_float).unwrap_or_default(),
                opt(r.mu),
                opt(r.dup),
                opt(r.tau),
                r.mode.map(|m| m.name().to_string()).unwrap_or_default(),
                r.seed.to_string(),
                r.budget.to_string(),
                r.evaluations.to_string(),
                r.generations.to_string(),
                r.success.to_string(),
                format_float(r.best_fitness),
            ];
            w.write_record(&fields).map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Reads the CSV form. The header must match [`CSV_HEADER`] exactly.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
        let header = r.headers().map_err(csv_error)?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(Error::Table(format!(
                "unexpected header `{}`, want `{}`",
                header.iter().collect::<Vec<_>>().join(","),
                CSV_HEADER.join(",")
            )));
        }
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(csv_error)?;
            let line = i + 2;
            let field = |k: usize| rec.get(k).unwrap_or("");
            let bad = |k: usize| Error::Table(format!("line {line}: bad {} `{}`", CSV_HEADER[k], field(k)));
            macro_rules! req {
                ($k:expr) => {
                    field($k).parse().map_err(|_| bad($k))?
                };
            }
            macro_rules! optional {
                ($k:expr) => {
                    match field($k) {
                        "" => None,
                        s => Some(s.parse().map_err(|_| bad($k))?),
                    }
                };
            }
            rows.push(TrialRecord {
                trial: req!(0),
                algo: req!(1),
                operator: field(2).to_string(),
                benchmark: req!(3),
                n: req!(4),
                d: optional!(5),
                gamma: optional!(6),
                mu: optional!(7),
                dup: optional!(8),
                tau: optional!(9),
                mode: optional!(10),
                seed: req!(11),
                budget: req!(12),
                evaluations: req!(13),
                generations: req!(14),
                success: req!(15),
                best_fitness: req!(16),
            });
        }
        Ok(Self { config_hash: None, rows })
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.write_csv(std::io::BufWriter::new(file))
    }

    pub fn load_csv(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read_csv(std::io::BufReader::new(file))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Table(e.to_string()))
    }

    /// Writes CSV, or JSON when the extension is `.json`.
    pub fn save(&self, path: &Path) -> Result<()> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            std::fs::write(path, self.to_json() + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
        } else {
            self.save_csv(path)
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            Self::from_json(&text)
        } else {
            Self::load_csv(path)
        }
    }
}

/// Orders rows by `(n, gamma, trial)`.
pub(crate) fn sort_rows(rows: &mut [TrialRecord]) {
    rows.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(
                a.gamma
                    .unwrap_or(f64::NEG_INFINITY)
                    .total_cmp(&b.gamma.unwrap_or(f64::NEG_INFINITY)),
            )
            .then(a.trial.cmp(&b.trial))
    });
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_error(e: csv::Error) -> Error {
    Error::Table(e.to_string())
}

/// Median of unsorted values.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 { v[m] } else { (v[m - 1] + v[m]) / 2.0 })
}

/// Formats with 17 significant digits in the style of C's `%.17g`:
/// trailing zeros dropped, scientific notation outside `[1e-5, 1e17)`.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..17).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
