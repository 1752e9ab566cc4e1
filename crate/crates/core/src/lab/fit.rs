//! Scaling-law fits `median ~ c * n^a * (ln n)^b` on per-size medians.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lab::table::TrialTable;
use crate::operators::GammaPreset;

/// Points below this success rate make a fit refuse.
pub const MIN_SUCCESS_RATE: f64 = 0.9;

/// `c * n^a * (ln n)^b` with `b` fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingModel {
    pub log_power: u32,
}

impl ScalingModel {
    pub const POWER: ScalingModel = ScalingModel { log_power: 0 };
    pub const N_LOG_N: ScalingModel = ScalingModel { log_power: 1 };
    pub const N_LOG2_N: ScalingModel = ScalingModel { log_power: 2 };
}

impl fmt::Display for ScalingModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log_power {
            0 => f.write_str("power"),
            1 => f.write_str("nlogn"),
            2 => f.write_str("nlog2n"),
            b => write!(f, "b={b}"),
        }
    }
}

impl FromStr for ScalingModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['_', '-', ' '], "").as_str() {
            "power" | "n" | "b=0" | "0" => Ok(Self::POWER),
            "nlogn" | "b=1" | "1" => Ok(Self::N_LOG_N),
            "nlog2n" | "nlog^2n" | "b=2" | "2" => Ok(Self::N_LOG2_N),
            _ => Err(Error::UnknownName {
                kind: "scaling model",
                value: s.to_string(),
                options: "power (b=0), nlogn (b=1), nlog2n (b=2)".to_string(),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitPoint {
    pub n: usize,
    pub median: f64,
    pub trials: usize,
    pub success_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub model: ScalingModel,
    /// Fitted `a`.
    pub exponent: f64,
    /// Fitted `c`.
    pub constant: f64,
    /// Euclidean norm of the residuals in log space.
    pub residual_norm: f64,
    pub points: Vec<FitPoint>,
}

impl ScalingFit {
    pub fn predict(&self, n: f64) -> f64 {
        self.constant * n.powf(self.exponent) * n.ln().powi(self.model.log_power as i32)
    }
}

/// Fits `model` to the medians of the successful trials at each size.
/// Refuses when any size has a success rate below 90% or carries more than
/// one gamma value.
pub fn fit_scaling(table: &TrialTable, model: ScalingModel) -> Result<ScalingFit> {
    let summaries = table.summaries();
    let mut points = Vec::with_capacity(summaries.len());
    for s in &summaries {
        if points.last().is_some_and(|p: &FitPoint| p.n == s.n) {
            return Err(Error::Fit(format!(
                "n = {} has several gamma values; select one (e.g. with --filter-gamma)",
                s.n
            )));
        }
        if s.success_rate() < MIN_SUCCESS_RATE {
            return Err(Error::Fit(format!(
                "n = {}: success rate {}/{} is below {:.0}%",
                s.n,
                s.successes,
                s.trials,
                MIN_SUCCESS_RATE * 100.0
            )));
        }
        points.push(FitPoint {
            n: s.n,
            median: s.median_evaluations.expect("successes >= 1"),
            trials: s.trials,
            success_rate: s.success_rate(),
        });
    }
    fit_points(points, model)
}

/// Least squares of `ln(median / (ln n)^b)` on `ln n`.
pub fn fit_points(points: Vec<FitPoint>, model: ScalingModel) -> Result<ScalingFit> {
    if points.len() < 2 {
        return Err(Error::Fit(format!("need at least two sizes, got {}", points.len())));
    }
    if points.iter().any(|p| p.n < 2 || p.median <= 0.0) {
        return Err(Error::Fit("sizes must be >= 2 and medians positive".into()));
    }
    let b = model.log_power as f64;
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| {
            let ln_n = (p.n as f64).ln();
            (ln_n, p.median.ln() - b * ln_n.ln())
        })
        .collect();
    let m = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / m;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("need at least two distinct sizes".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = sxy / sxx;
    let intercept = my - a * mx;
    let residual_norm = xy
        .iter()
        .map(|p| (p.1 - intercept - a * p.0).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(ScalingFit {
        model,
        exponent: a,
        constant: intercept.exp(),
        residual_norm,
        points,
    })
}

/// Rows whose gamma equals `preset` evaluated at their size.
pub fn filter_gamma(table: &TrialTable, preset: GammaPreset) -> TrialTable {
    let rows = table
        .rows
        .iter()
        .filter(|r| match (r.gamma, preset.gamma(r.n)) {
            (Some(g), Ok(want)) => (g - want).abs() <= 1e-12 * want.abs().max(1e-300),
            _ => false,
        })
        .cloned()
        .collect();
    TrialTable {
        config_hash: table.config_hash.clone(),
        rows,
    }
}

/// Log-log scatter of the medians with the fitted curve, as SVG.
pub fn plot_svg(fit: &ScalingFit) -> String {
    const W: f64 = 640.0;
    const H: f64 = 420.0;
    const PAD: f64 = 60.0;
    let xs: Vec<f64> = fit.points.iter().map(|p| (p.n as f64).log10()).collect();
    let ys: Vec<f64> = fit.points.iter().map(|p| p.median.log10()).collect();
    let (x0, x1) = bounds(&xs);
    let curve: Vec<(f64, f64)> = (0..=50)
        .map(|i| {
            let lx = x0 + (x1 - x0) * i as f64 / 50.0;
            (lx, fit.predict(10f64.powf(lx)).log10())
        })
        .collect();
    let all_y: Vec<f64> = ys.iter().copied().chain(curve.iter().map(|c| c.1)).collect();
    let (y0, y1) = bounds(&all_y);
    let sx = |x: f64| PAD + (x - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |y: f64| H - PAD - (y - y0) / (y1 - y0) * (H - 2.0 * PAD);

    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n\
         <line x1=\"{PAD}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n\
         <line x1=\"{PAD}\" y1=\"{PAD}\" x2=\"{PAD}\" y2=\"{b}\" stroke=\"black\"/>\n",
        b = H - PAD,
        r = W - PAD
    );
    svg += &format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"13\">log10 n</text>\n",
        W / 2.0,
        H - 15.0
    );
    svg += &format!(
        "<text x=\"15\" y=\"{}\" font-size=\"13\" transform=\"rotate(-90 15 {})\" text-anchor=\"middle\">log10 median evaluations</text>\n",
        H / 2.0,
        H / 2.0
    );
    svg += &format!(
        "<text x=\"{PAD}\" y=\"30\" font-size=\"14\">{}: a = {:.4}, c = {:.4}</text>\n",
        fit.model, fit.exponent, fit.constant
    );
    for (x, label) in [(x0, x0), (x1, x1)] {
        svg += &format!(
            "<text x=\"{:.1}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{label:.2}</text>\n",
            sx(x),
            H - PAD + 16.0
        );
    }
    for (y, label) in [(y0, y0), (y1, y1)] {
        svg += &format!(
            "<text x=\"{}\" y=\"{:.1}\" font-size=\"11\" text-anchor=\"end\">{label:.2}</text>\n",
            PAD - 6.0,
            sy(y) + 4.0
        );
    }
    let path: Vec<String> = curve.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    svg += &format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n",
        path.join(" ")
    );
    for (x, y) in xs.iter().zip(&ys) {
        svg += &format!(
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"4\" fill=\"firebrick\"/>\n",
            sx(*x),
            sy(*y)
        );
    }
    svg += "</svg>\n";
    svg
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo < 1e-9 {
        (lo - 0.5, hi + 0.5)
    } else {
        let pad = (hi - lo) * 0.05;
        (lo - pad, hi + pad)
    }
}
