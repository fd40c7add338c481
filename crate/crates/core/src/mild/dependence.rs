use serde::{Deserialize, Serialize};

use super::config::SolverConfig;
use super::duhamel::{duhamel_bilinear, duhamel_bilinear_sym};
use super::heat::{heat_flow, heat_quadrature_slack};
use super::picard::picard_solve;
use crate::error::{Error, Result};
use crate::norms::{triple, x_minus1_norm};
use crate::spectral::SpectralField;

/// Additive slack allowed on top of the Lipschitz bound.
pub const DEPENDENCE_SLACK: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DependenceReport {
    pub mu: f64,
    pub c_bilinear: f64,
    pub u0_norm: f64,
    pub v0_norm: f64,
    /// `|u0 - v0|_{X^-1}`.
    pub data_difference: f64,
    /// `⦀u - v⦀`.
    pub solution_difference: f64,
    /// `(1 + 1/mu) / (1 - 2 C (1 + 1/mu)^2 (|u0| + |v0|))`.
    pub lipschitz_factor: f64,
    /// `lipschitz_factor * data_difference + slack`, where the slack covers
    /// the trapezoid overshoot of the linear part.
    pub bound: f64,
    pub quadrature_slack: f64,
    pub holds: bool,
    pub u_converged: bool,
    pub v_converged: bool,
    /// `⦀(u - v) - [exp(mu t Δ)(u0 - v0) - B_sym(u - v, u + v)]⦀`.
    pub identity_residual: f64,
    /// `⦀B(v, v) - B_sym(v, v)⦀`.
    pub diagonal_symmetry_defect: f64,
}

/// `(1 + 1/mu) / (1 - 2 C (1 + 1/mu)^2 (a + b))`.
pub fn lipschitz_factor(mu: f64, c_bilinear: f64, u0_norm: f64, v0_norm: f64) -> f64 {
    let s = 1.0 + 1.0 / mu;
    s / (1.0 - 2.0 * c_bilinear * s * s * (u0_norm + v0_norm))
}

/// Solves from both data and compares the solution difference with the
/// Lipschitz estimate. Refuses data violating `4 C (1 + 1/mu)^2 |.| < 1`.
pub fn continuous_dependence_experiment(
    u0: &SpectralField,
    v0: &SpectralField,
    cfg: &SolverConfig,
    c_bilinear: f64,
) -> Result<DependenceReport> {
    if !(c_bilinear > 0.0) {
        return Err(Error::InvalidParameter(format!("bilinear constant must be positive, got {c_bilinear}")));
    }
    let mu = cfg.mu;
    let s = 1.0 + 1.0 / mu;
    let u0_norm = x_minus1_norm(u0)?;
    let v0_norm = x_minus1_norm(v0)?;
    for (name, norm) in [("u0", u0_norm), ("v0", v0_norm)] {
        let lhs = 4.0 * c_bilinear * s * s * norm;
        if !(lhs < 1.0) {
            return Err(Error::SmallnessViolated(format!("4 C (1 + 1/mu)^2 |{name}| = {lhs:.4} >= 1")));
        }
    }
    let (u, ru) = picard_solve(u0, cfg)?;
    let (v, rv) = picard_solve(v0, cfg)?;
    let diff = u.difference(&v)?;
    let solution_difference = triple(&diff)?;
    let d0 = u0 - v0;
    let data_difference = x_minus1_norm(&d0)?;
    let factor = lipschitz_factor(mu, c_bilinear, u0_norm, v0_norm);
    let quadrature_slack = heat_quadrature_slack(&d0, &cfg.times, mu);
    let bound = factor * data_difference + quadrature_slack + DEPENDENCE_SLACK;

    let mut identity = heat_flow(&d0, &cfg.times, mu);
    identity.add_scaled(&duhamel_bilinear_sym(&diff, &u.sum(&v)?, mu)?, -1.0);
    let identity_residual = triple(&diff.difference(&identity)?)?;
    let diagonal_symmetry_defect =
        triple(&duhamel_bilinear(&v, &v, mu)?.difference(&duhamel_bilinear_sym(&v, &v, mu)?)?)?;

    Ok(DependenceReport {
        mu,
        c_bilinear,
        u0_norm,
        v0_norm,
        data_difference,
        solution_difference,
        lipschitz_factor: factor,
        bound,
        quadrature_slack,
        holds: solution_difference <= bound,
        u_converged: ru.converged,
        v_converged: rv.converged,
        identity_residual,
        diagonal_symmetry_defect,
    })
}
