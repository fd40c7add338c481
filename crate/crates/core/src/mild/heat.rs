use crate::error::{Error, Result};
use crate::spectral::SpectralField;
use crate::trajectory::{TimeGrid, Trajectory};

/// `u(k) -> exp(-mu dt |k|^2) u(k)`.
pub fn heat_propagate(f: &SpectralField, dt: f64, mu: f64) -> Result<SpectralField> {
    if !(dt >= 0.0) {
        return Err(Error::InvalidParameter(format!("negative time step {dt}")));
    }
    let mut out = f.clone();
    if dt > 0.0 {
        let ks = f.grid().norm_sq().to_vec();
        out.map_modes(|idx| (-mu * dt * ks[idx]).exp());
    }
    Ok(out)
}

/// The heat flow `exp(mu t Δ) v0` sampled on `times`.
pub fn heat_flow(v0: &SpectralField, times: &TimeGrid, mu: f64) -> Trajectory {
    let ks = v0.grid().norm_sq().to_vec();
    let fields = times
        .times()
        .iter()
        .map(|&t| {
            let mut f = v0.clone();
            f.map_modes(|idx| (-mu * t * ks[idx]).exp());
            f
        })
        .collect();
    Trajectory::new(times.clone(), fields).expect("heat flow shares the datum's grid")
}

/// Amount by which trapezoid quadrature can push the 𝒳¹ norm of a heat flow
/// above its continuous bound `|v0|_{X^-1} / mu`:
/// `sum_k |k| |v0(k)| max(0, Q(mu |k|^2) - 1 / (mu |k|^2))`, where `Q(λ)` is the
/// trapezoid value of `int e^{-λt} dt` on the grid.
pub fn heat_quadrature_slack(v0: &SpectralField, times: &TimeGrid, mu: f64) -> f64 {
    let grid = v0.grid();
    let t = times.times();
    let zero = grid.zero_index();
    let mut slack = 0.0;
    for idx in (0..grid.len()).filter(|&i| i != zero) {
        let lambda = mu * grid.norm_sq()[idx];
        let q: f64 = t
            .windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * ((-lambda * w[0]).exp() + (-lambda * w[1]).exp()))
            .sum();
        let excess = q - 1.0 / lambda;
        if excess > 0.0 {
            let amp: f64 = (0..v0.ncomp()).map(|c| v0.get(c, idx).norm()).sum();
            slack += grid.norms()[idx] * amp * excess;
        }
    }
    slack
}
