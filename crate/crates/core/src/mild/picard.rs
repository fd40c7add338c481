use log::warn;
use serde::{Deserialize, Serialize};

use super::config::{Problem, SolverConfig};
use super::duhamel::duhamel_bilinear_with;
use super::heat::heat_flow;
use crate::error::{Error, Result};
use crate::norms::triple;
use crate::spectral::{divergence_defect, leray_project, SpectralField};
use crate::trajectory::Trajectory;

/// Increments above this are treated as divergence and end the iteration.
const DIVERGENCE_LIMIT: f64 = 1e8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PicardReport {
    pub iterations: usize,
    /// `⦀v^{n+1} - v^n⦀` for each iteration.
    pub increment_norms: Vec<f64>,
    /// Successive quotients of the increment norms.
    pub contraction_ratios: Vec<f64>,
    /// `⦀v - exp(mu t Δ) v0 + B(v, v)⦀` for the returned iterate.
    pub residual: f64,
    pub converged: bool,
    /// `⦀exp(mu t Δ) v0⦀`.
    pub heat_norm: f64,
    /// `⦀v⦀` of the returned iterate.
    pub solution_norm: f64,
}

/// Checks the datum against the config, pinning nothing silently: a nonzero
/// mean is an error, a divergent NS datum is projected with a warning.
pub(crate) fn prepare_datum(v0: &SpectralField, cfg: &SolverConfig) -> Result<SpectralField> {
    cfg.validate()?;
    if v0.grid() != &cfg.grid || v0.ncomp() != cfg.problem.ncomp() {
        return Err(Error::GridMismatch(format!(
            "datum on {:?} with {} components does not match the {} config",
            v0.grid(),
            v0.ncomp(),
            cfg.problem.name()
        )));
    }
    v0.ensure_mean_zero()?;
    v0.check_hermitian()?;
    if cfg.problem == Problem::Ns3d {
        let defect = divergence_defect(v0)?;
        if defect > 1e-12 * v0.max_abs() {
            warn!("initial datum has divergence defect {defect:e}; projecting");
            return leray_project(v0);
        }
    }
    Ok(v0.clone())
}

/// Space-time Picard iteration for `v = exp(mu t Δ) v0 - B(v, v)` on the
/// config's time grid, starting from the heat flow.
///
/// Non-convergence is not an error: the report carries `converged = false`,
/// the increment history, and the iterate with the smallest residual.
pub fn picard_solve(v0: &SpectralField, cfg: &SolverConfig) -> Result<(Trajectory, PicardReport)> {
    let v0 = prepare_datum(v0, cfg)?;
    let heat = heat_flow(&v0, &cfg.times, cfg.mu);
    let heat_norm = triple(&heat)?;
    let bilinear = |v: &Trajectory| duhamel_bilinear_with(v, v, cfg.mu, cfg.method);

    let mut current = heat.clone();
    let mut b_current = bilinear(&current)?;
    let mut increments = Vec::new();
    let mut best: Option<(f64, Trajectory)> = None;
    let mut converged = false;
    let mut last_residual = f64::INFINITY;

    for _ in 0..cfg.picard_max_iters {
        let mut next = heat.clone();
        next.add_scaled(&b_current, -1.0);
        let increment = triple(&next.difference(&current)?)?;
        increments.push(increment);
        if !increment.is_finite() || increment > DIVERGENCE_LIMIT {
            break;
        }
        let b_next = bilinear(&next)?;
        // next - heat + B(next, next) = B(next, next) - B(current, current)
        let residual = triple(&b_next.difference(&b_current)?)?;
        current = next;
        b_current = b_next;
        last_residual = residual;
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, current.clone()));
        }
        if increment < cfg.picard_tol {
            converged = true;
            break;
        }
    }

    let (residual, solution) = if converged {
        (last_residual, current)
    } else {
        best.unwrap_or((last_residual, current))
    };
    let contraction_ratios = increments
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .collect();
    let report = PicardReport {
        iterations: increments.len(),
        increment_norms: increments,
        contraction_ratios,
        residual,
        converged,
        heat_norm,
        solution_norm: triple(&solution)?,
    };
    Ok((solution, report))
}
