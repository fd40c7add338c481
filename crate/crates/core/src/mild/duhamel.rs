//! The bilinear Duhamel operator
//! `B(F, G)(t) = int_0^t exp(mu (t - s) Δ) P div(F ⊗ G)(s) ds`.
//!
//! Time integration is exponential-trapezoid: the integrand is linear in `s`
//! between samples and the heat kernel is integrated exactly. On an interval
//! of length `h` with `z = mu |k|^2 h`,
//!
//! `B_{m+1} = e^{-z} B_m + h (phi1(z) - phi2(z)) H_m + h phi2(z) H_{m+1}`,
//!
//! `phi1(z) = (1 - e^{-z}) / z`, `phi2(z) = (z - 1 + e^{-z}) / z^2`.

use crate::error::Result;
use crate::spectral::{nonlinear_term, ProductMethod, SpectralField};
use crate::trajectory::Trajectory;

/// Below this `z` the phi functions are summed from their Taylor series.
const SERIES_CUTOFF: f64 = 0.05;

/// `(phi1(z), phi2(z))`.
pub fn phi_functions(z: f64) -> (f64, f64) {
    if z < SERIES_CUTOFF {
        // phi1 = sum (-z)^j / (j+1)!, phi2 = sum (-z)^j / (j+2)!
        let mut term1 = 1.0;
        let mut term2 = 0.5;
        let (mut p1, mut p2) = (0.0, 0.0);
        for j in 0..12 {
            p1 += term1;
            p2 += term2;
            let jf = j as f64;
            term1 *= -z / (jf + 2.0);
            term2 *= -z / (jf + 3.0);
        }
        (p1, p2)
    } else {
        let em1 = (-z).exp_m1();
        (-em1 / z, (z + em1) / (z * z))
    }
}

/// Integrates a given forcing trajectory `H` against the heat kernel:
/// `out(t) = int_0^t exp(mu (t - s) Δ) H(s) ds`.
pub fn duhamel_integrate(forcing: &Trajectory, mu: f64) -> Trajectory {
    let grid = forcing.grid().clone();
    let m = grid.len();
    let nc = forcing.ncomp();
    let t = forcing.times().times();
    let mut out = Vec::with_capacity(t.len());
    out.push(SpectralField::zeros(&grid, nc));

    let mut decay = vec![0.0; m];
    let mut w_old = vec![0.0; m];
    let mut w_new = vec![0.0; m];
    let mut cached_h = f64::NAN;
    for step in 0..t.len() - 1 {
        let h = t[step + 1] - t[step];
        if h.to_bits() != cached_h.to_bits() {
            for idx in 0..m {
                let z = mu * grid.norm_sq()[idx] * h;
                let (p1, p2) = phi_functions(z);
                decay[idx] = (-z).exp();
                w_old[idx] = h * (p1 - p2);
                w_new[idx] = h * p2;
            }
            cached_h = h;
        }
        let prev = &out[step];
        let h0 = forcing.field(step);
        let h1 = forcing.field(step + 1);
        let mut next = SpectralField::zeros(&grid, nc);
        for c in 0..nc {
            let (b, a0, a1) = (prev.component(c), h0.component(c), h1.component(c));
            for (idx, dst) in next.component_mut(c).iter_mut().enumerate() {
                *dst = b[idx] * decay[idx] + a0[idx] * w_old[idx] + a1[idx] * w_new[idx];
            }
        }
        out.push(next);
    }
    Trajectory::new(forcing.times().clone(), out).expect("same grid and times as the forcing")
}

/// `P div(F ⊗ G)` at every sample time.
pub fn nonlinear_trajectory(f: &Trajectory, g: &Trajectory, method: ProductMethod) -> Result<Trajectory> {
    f.ensure_compatible(g)?;
    let same = std::ptr::eq(f, g);
    let fields = f
        .fields()
        .iter()
        .zip(g.fields())
        .map(|(a, b)| if same { nonlinear_term(a, a, method) } else { nonlinear_term(a, b, method) })
        .collect::<Result<Vec<_>>>()?;
    Trajectory::new(f.times().clone(), fields)
}

pub fn duhamel_bilinear(f: &Trajectory, g: &Trajectory, mu: f64) -> Result<Trajectory> {
    duhamel_bilinear_with(f, g, mu, ProductMethod::Pseudospectral)
}

pub fn duhamel_bilinear_with(
    f: &Trajectory,
    g: &Trajectory,
    mu: f64,
    method: ProductMethod,
) -> Result<Trajectory> {
    Ok(duhamel_integrate(&nonlinear_trajectory(f, g, method)?, mu))
}

/// Symmetrized operator `½ [B(F, G) + B(G, F)]`.
pub fn duhamel_bilinear_sym(f: &Trajectory, g: &Trajectory, mu: f64) -> Result<Trajectory> {
    let mut out = duhamel_bilinear(f, g, mu)?;
    let other = duhamel_bilinear(g, f, mu)?;
    out.add_scaled(&other, 1.0);
    Ok(out.scaled(0.5))
}
