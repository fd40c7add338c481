//! Radius of spatial analyticity from the exponential decay of Fourier
//! coefficients, compared with the lower bound `max{mu sqrt(t), alpha mu t}`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{apply_weight, floor_relative, x_minus1_norm};
use crate::spectral::SpectralField;
use crate::trajectory::Trajectory;

/// Shells whose peak is below this fraction of the largest peak are left out
/// of the fit.
pub const DEFAULT_FLOOR: f64 = 1e-13;

/// Relative floor applied to each sample before the analyticity weights, so
/// round-off at high modes is not amplified by `e^{phi |k|}`.
pub const WEIGHTED_NORM_FLOOR: f64 = 1e-13;

pub const MIN_SHELLS: usize = 3;

/// How wavevectors are grouped into shells.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShellMetric {
    /// `s = sum |k_i|`, matching the `|D|` weight.
    #[default]
    L1,
    /// `s = round(|k|)`, for sensitivity checks.
    Euclid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellProfile {
    pub metric: ShellMetric,
    /// `(s, max over the shell and over components of |u(k)|)`, ascending in
    /// `s`, one entry per nonzero shell holding a nonzero coefficient.
    pub shells: Vec<(u32, f64)>,
}

fn shell_of(f: &SpectralField, idx: usize, metric: ShellMetric) -> u32 {
    match metric {
        ShellMetric::L1 => f.grid().l1_norms()[idx],
        ShellMetric::Euclid => f.grid().norms()[idx].round() as u32,
    }
}

pub fn shell_profile(f: &SpectralField) -> Result<ShellProfile> {
    shell_profile_with(f, ShellMetric::L1)
}

pub fn shell_profile_with(f: &SpectralField, metric: ShellMetric) -> Result<ShellProfile> {
    if f.is_zero() {
        return Err(Error::ZeroField);
    }
    let grid = f.grid();
    let zero = grid.zero_index();
    let top = (0..grid.len()).map(|i| shell_of(f, i, metric)).max().unwrap_or(0) as usize;
    let mut peaks = vec![None::<f64>; top + 1];
    for idx in (0..grid.len()).filter(|&i| i != zero) {
        let s = shell_of(f, idx, metric) as usize;
        let amp = (0..f.ncomp()).map(|c| f.get(c, idx).norm()).fold(0.0, f64::max);
        peaks[s] = Some(peaks[s].map_or(amp, |p: f64| p.max(amp)));
    }
    let shells = peaks.iter().enumerate().filter_map(|(s, p)| p.filter(|&p| p > 0.0).map(|p| (s as u32, p))).collect();
    Ok(ShellProfile { metric, shells })
}

/// Least-squares line through `(s, log peak)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusFit {
    /// Minus the fitted slope; NaN with fewer than two usable shells.
    pub rho: f64,
    pub intercept: f64,
    /// Root-mean-square residual of `log peak` about the line.
    pub fit_rms: f64,
    pub shells_used: usize,
    /// `shells_used >= 3`.
    pub valid: bool,
}

impl RadiusFit {
    fn invalid(shells_used: usize) -> Self {
        Self { rho: f64::NAN, intercept: f64::NAN, fit_rms: f64::NAN, shells_used, valid: false }
    }
}

/// Fits the points `(s, ln p)`.
pub fn fit_points(points: &[(f64, f64)]) -> RadiusFit {
    let n = points.len();
    if n < 2 {
        return RadiusFit::invalid(n);
    }
    let nf = n as f64;
    let sx = points.iter().map(|p| p.0).sum::<f64>() / nf;
    let sy = points.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = points.iter().map(|p| (p.0 - sx) * (p.0 - sx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - sx) * (p.1 - sy)).sum();
    let slope = sxy / sxx;
    let intercept = sy - slope * sx;
    let ss: f64 = points.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    RadiusFit { rho: -slope, intercept, fit_rms: (ss / nf).sqrt(), shells_used: n, valid: n >= MIN_SHELLS }
}

/// Fit over the shells `1 <= s <= 2n/3` whose peak exceeds `floor_rel` times
/// the largest peak.
pub fn fit_profile(profile: &ShellProfile, n: usize, floor_rel: f64) -> RadiusFit {
    let cut = (2 * n / 3) as u32;
    let top = profile.shells.iter().map(|s| s.1).fold(0.0, f64::max);
    let floor = floor_rel * top;
    let points: Vec<(f64, f64)> = profile
        .shells
        .iter()
        .filter(|&&(s, p)| s >= 1 && s <= cut && p > floor)
        .map(|&(s, p)| (s as f64, p.ln()))
        .collect();
    fit_points(&points)
}

pub fn fit_radius(f: &SpectralField, floor_rel: f64) -> Result<RadiusFit> {
    fit_radius_with(f, floor_rel, ShellMetric::L1)
}

pub fn fit_radius_with(f: &SpectralField, floor_rel: f64, metric: ShellMetric) -> Result<RadiusFit> {
    Ok(fit_profile(&shell_profile_with(f, metric)?, f.grid().n(), floor_rel))
}

/// `(mu sqrt(t), alpha mu t, max of the two)`.
pub fn lower_bound(t: f64, mu: f64, alpha: f64) -> Result<(f64, f64, f64)> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if !(mu > 0.0) || !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("need mu > 0 and t >= 0, got mu = {mu}, t = {t}")));
    }
    let s = mu * t.sqrt();
    let l = alpha * mu * t;
    Ok((s, l, s.max(l)))
}

/// Time at which the two bounds cross, `1 / alpha^2`.
pub fn crossover_time(alpha: f64) -> f64 {
    1.0 / (alpha * alpha)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub t: f64,
    #[serde(flatten)]
    pub fit: RadiusFit,
    pub bound_sqrt: f64,
    pub bound_linear: f64,
    pub bound: f64,
    /// `⦀e^{mu sqrt(s) |D|} v⦀` over `[0, t]`.
    pub weighted_norm_sqrt: f64,
    /// `⦀e^{alpha mu s |D|} v⦀` over `[0, t]`.
    pub weighted_norm_linear: f64,
}

impl RadiusEstimate {
    /// `rho - bound`, NaN when the fit is invalid.
    pub fn margin(&self) -> f64 {
        if self.fit.valid {
            self.fit.rho - self.bound
        } else {
            f64::NAN
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusSeries {
    pub mu: f64,
    pub alpha: f64,
    pub crossover: f64,
    pub data_norm: f64,
    pub estimates: Vec<RadiusEstimate>,
    /// Weighted triple norm over the whole trajectory divided by `|v0|_{X^-1}`.
    pub k_sqrt: f64,
    pub k_linear: f64,
    /// Smallest `rho - bound` over valid samples.
    pub min_margin: f64,
    /// First and last sample time with a valid fit.
    pub window: Option<(f64, f64)>,
}

/// `⦀v⦀` restricted to `[0, t_m]` for every `m`: running sup plus running
/// trapezoid integral per `(k, i)`.
pub fn cumulative_triple(v: &Trajectory) -> Result<Vec<f64>> {
    for f in v.fields() {
        f.ensure_mean_zero()?;
    }
    let grid = v.grid();
    let m = grid.len();
    let nc = v.ncomp();
    let t = v.times().times();
    let mut sup = vec![0.0f64; nc * m];
    let mut int = vec![0.0f64; nc * m];
    let mut out = Vec::with_capacity(t.len());
    let zero = grid.zero_index();
    for (step, f) in v.fields().iter().enumerate() {
        let half = if step == 0 { 0.0 } else { 0.5 * (t[step] - t[step - 1]) };
        let prev = if step == 0 { None } else { Some(v.field(step - 1)) };
        for (j, z) in f.coeffs().iter().enumerate() {
            let a = z.norm();
            sup[j] = sup[j].max(a);
            if let Some(p) = prev {
                int[j] += half * (a + p.coeffs()[j].norm());
            }
        }
        let mut acc = 0.0;
        for idx in (0..m).filter(|&i| i != zero) {
            let (k, inv) = (grid.norms()[idx], 1.0 / grid.norms()[idx]);
            for c in 0..nc {
                acc += sup[c * m + idx] * inv + k * int[c * m + idx];
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Fits the radius at every sample, attaches the bounds, and evaluates the
/// two weighted triple norms after flooring round-off.
pub fn radius_series(v: &Trajectory, mu: f64, alpha: f64) -> Result<RadiusSeries> {
    lower_bound(0.0, mu, alpha)?;
    let floored = floor_relative(v, WEIGHTED_NORM_FLOOR);
    let sqrt_w = cumulative_triple(&apply_weight(&floored, &|t: f64| mu * t.sqrt())?)?;
    let lin_w = cumulative_triple(&apply_weight(&floored, &|t: f64| alpha * mu * t)?)?;
    let data_norm = x_minus1_norm(v.field(0))?;
    let n = v.grid().n();

    let mut estimates = Vec::with_capacity(v.len());
    for (m, &t) in v.times().times().iter().enumerate() {
        let fit = match shell_profile(v.field(m)) {
            Ok(p) => fit_profile(&p, n, DEFAULT_FLOOR),
            Err(Error::ZeroField) => RadiusFit::invalid(0),
            Err(e) => return Err(e),
        };
        let (bound_sqrt, bound_linear, bound) = lower_bound(t, mu, alpha)?;
        estimates.push(RadiusEstimate {
            t,
            fit,
            bound_sqrt,
            bound_linear,
            bound,
            weighted_norm_sqrt: sqrt_w[m],
            weighted_norm_linear: lin_w[m],
        });
    }
    let valid: Vec<&RadiusEstimate> = estimates.iter().filter(|e| e.fit.valid).collect();
    let min_margin = valid.iter().map(|e| e.margin()).fold(f64::INFINITY, f64::min);
    let window = match (valid.first(), valid.last()) {
        (Some(a), Some(b)) => Some((a.t, b.t)),
        _ => None,
    };
    let (k_sqrt, k_linear) = if data_norm > 0.0 {
        (sqrt_w[sqrt_w.len() - 1] / data_norm, lin_w[lin_w.len() - 1] / data_norm)
    } else {
        (f64::NAN, f64::NAN)
    };
    Ok(RadiusSeries { mu, alpha, crossover: crossover_time(alpha), data_norm, estimates, k_sqrt, k_linear, min_margin, window })
}

pub const RADIUS_CSV_HEADER: &str =
    "t,rho,fit_rms,shells_used,bound_sqrt,bound_linear,bound,weighted_norm_sqrt,weighted_norm_linear,crossover,valid";

impl RadiusSeries {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(RADIUS_CSV_HEADER);
        out.push('\n');
        for e in &self.estimates {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                e.t,
                e.fit.rho,
                e.fit.fit_rms,
                e.fit.shells_used,
                e.bound_sqrt,
                e.bound_linear,
                e.bound,
                e.weighted_norm_sqrt,
                e.weighted_norm_linear,
                self.crossover,
                e.fit.valid
            )
            .expect("writing to a String");
        }
        out
    }
}
