//! Integrating-factor RK4 (Lawson) on the Galerkin system
//! `dv/dt = mu Δ v - N(v, v)`, used as an independent check on the Picard
//! construction.

use super::config::SolverConfig;
use super::picard::prepare_datum;
use crate::error::{Error, Result};
use crate::spectral::{nonlinear_term, SpectralField};
use crate::trajectory::Trajectory;

/// Coefficient magnitude at which the march is abandoned.
pub const BLOW_UP_LIMIT: f64 = 1e12;

fn scaled_modes(f: &SpectralField, factors: &[f64]) -> SpectralField {
    let mut out = f.clone();
    out.map_modes(|idx| factors[idx]);
    out
}

/// Marches from `v0` with `cfg.substeps` equal substeps per sample interval
/// and returns the solution on `cfg.times`.
pub fn timestep_solve(v0: &SpectralField, cfg: &SolverConfig) -> Result<Trajectory> {
    let v0 = prepare_datum(v0, cfg)?;
    let ks = cfg.grid.norm_sq().to_vec();
    let rhs = |v: &SpectralField| -> Result<SpectralField> {
        Ok(nonlinear_term(v, v, cfg.method)?.scaled(-1.0))
    };
    let t = cfg.times.times();
    let mut out = Vec::with_capacity(t.len());
    out.push(v0.clone());
    let mut v = v0;
    for step in 0..t.len() - 1 {
        let h = (t[step + 1] - t[step]) / cfg.substeps as f64;
        let half: Vec<f64> = ks.iter().map(|&k| (-cfg.mu * k * h * 0.5).exp()).collect();
        let full: Vec<f64> = ks.iter().map(|&k| (-cfg.mu * k * h).exp()).collect();
        for _ in 0..cfg.substeps {
            let k1 = rhs(&v)?;
            let mut a = v.clone();
            a.add_scaled(&k1, 0.5 * h);
            let k2 = rhs(&scaled_modes(&a, &half))?;
            let mut b = scaled_modes(&v, &half);
            b.add_scaled(&k2, 0.5 * h);
            let k3 = rhs(&b)?;
            let mut c = scaled_modes(&v, &full);
            c.add_scaled(&scaled_modes(&k3, &half), h);
            let k4 = rhs(&c)?;

            let mut mid = k2;
            mid.add_scaled(&k3, 1.0);
            let mut next = scaled_modes(&v, &full);
            next.add_scaled(&scaled_modes(&k1, &full), h / 6.0);
            next.add_scaled(&scaled_modes(&mid, &half), h / 3.0);
            next.add_scaled(&k4, h / 6.0);
            next.pin_mean();
            next.symmetrize();
            v = next;
        }
        let max_abs = v.max_abs();
        if !(max_abs <= BLOW_UP_LIMIT) {
            return Err(Error::BlowUp { time: t[step + 1], max_abs });
        }
        out.push(v.clone());
    }
    Trajectory::new(cfg.times.clone(), out)
}
