//! Closed-form and semi-analytic reference solutions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{make_grid, transform_to_physical, transform_to_spectral, GridSpec, PhysicalField, SpectralField, WaveVector};

/// Largest `A / (2 mu)` accepted by the Cole-Hopf oracle. Beyond it `theta`
/// spans more than `e^{-2 * 40}` and the quotient loses accuracy.
pub const COLE_HOPF_MAX_RATIO: f64 = 40.0;

/// Default refinement of the Cole-Hopf evaluation grid over the solver grid.
pub const COLE_HOPF_REFINE: usize = 4;

fn require_ns_grid(grid: &GridSpec) -> Result<()> {
    if grid.dims() != 3 {
        return Err(Error::Oracle(format!("oracle needs a 3-D grid, got dims = {}", grid.dims())));
    }
    Ok(())
}

/// ABC (Beltrami) flow
/// `(A sin z + C cos y, B sin x + A cos z, C sin y + B cos x) e^{-mu t}`.
///
/// It is an eigenfunction of the curl with `|k| = 1`, so the nonlinear term
/// is a gradient and the flow decays like the heat equation.
pub fn beltrami_field(a: f64, b: f64, c: f64, t: f64, mu: f64, grid: &GridSpec) -> Result<SpectralField> {
    require_ns_grid(grid)?;
    let decay = (-mu * t).exp();
    let sin = Complex64::new(0.0, -0.5 * decay);
    let cos = Complex64::new(0.5 * decay, 0.0);
    let mut f = SpectralField::zeros(grid, 3);
    let idx = |k: [i32; 3]| grid.index_of(WaveVector(k)).expect("unit modes are retained for n >= 4");
    let (ex, ey, ez) = (idx([1, 0, 0]), idx([0, 1, 0]), idx([0, 0, 1]));
    f.set_pair(0, ez, sin * a);
    f.set_pair(0, ey, cos * c);
    f.set_pair(1, ex, sin * b);
    f.set_pair(1, ez, cos * a);
    f.set_pair(2, ey, sin * c);
    f.set_pair(2, ex, cos * b);
    Ok(f)
}

/// `amplitude * a cos(k . x) e^{-mu |k|^2 t}` with `a . k = 0`, an exact
/// solution because its self-advection vanishes.
pub fn single_mode_field(
    k: WaveVector,
    a: [f64; 3],
    amplitude: f64,
    t: f64,
    mu: f64,
    grid: &GridSpec,
) -> Result<SpectralField> {
    require_ns_grid(grid)?;
    if k.is_zero() {
        return Err(Error::Oracle("single mode needs a nonzero wave vector".into()));
    }
    let kf = k.as_f64();
    let dot: f64 = (0..3).map(|i| a[i] * kf[i]).sum();
    let scale = a.iter().map(|x| x.abs()).fold(0.0, f64::max) * k.euclid_norm();
    if dot.abs() > 1e-14 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Oracle(format!("polarization {a:?} is not orthogonal to {k}")));
    }
    let idx = grid
        .index_of(k)
        .ok_or_else(|| Error::Oracle(format!("mode {k} is not retained on n = {}", grid.n())))?;
    let decay = (-mu * k.euclid_norm_sq() as f64 * t).exp();
    let mut f = SpectralField::zeros(grid, 3);
    for (c, &ac) in a.iter().enumerate() {
        f.set_pair(c, idx, Complex64::new(0.5 * amplitude * ac * decay, 0.0));
    }
    Ok(f)
}

/// Burgers solution from `u0 = A sin x` via Cole-Hopf, with the default
/// refinement.
pub fn cole_hopf_burgers(amplitude: f64, mu: f64, t: f64, grid: &GridSpec) -> Result<SpectralField> {
    cole_hopf_burgers_with(amplitude, mu, t, grid, COLE_HOPF_REFINE)
}

/// `u = -2 mu theta_x / theta`, where `theta` solves the heat equation from
/// `theta0 = exp(-(A / 2 mu)(1 - cos x))`. The quotient is formed on a grid
/// `refine` times finer than `grid` and then truncated to its modes.
pub fn cole_hopf_burgers_with(
    amplitude: f64,
    mu: f64,
    t: f64,
    grid: &GridSpec,
    refine: usize,
) -> Result<SpectralField> {
    if grid.dims() != 1 {
        return Err(Error::Oracle(format!("Cole-Hopf oracle needs a 1-D grid, got dims = {}", grid.dims())));
    }
    if !(mu > 0.0) || !(t >= 0.0) || !amplitude.is_finite() {
        return Err(Error::InvalidParameter(format!("Cole-Hopf needs mu > 0, t >= 0, got mu = {mu}, t = {t}")));
    }
    let beta = amplitude / (2.0 * mu);
    if beta.abs() > COLE_HOPF_MAX_RATIO {
        return Err(Error::Oracle(format!(
            "A / (2 mu) = {beta} exceeds {COLE_HOPF_MAX_RATIO}; theta underflows"
        )));
    }
    let fine = make_grid(1, (grid.n() * refine.max(1)).max(256))?;
    let theta0 = PhysicalField::from_fn(&fine, 1, |_, x| (-beta * (1.0 - x[0].cos())).exp());
    let mut theta = transform_to_spectral(&theta0)?;
    let ks = fine.norm_sq().to_vec();
    theta.map_modes(|idx| (-mu * ks[idx] * t).exp());
    let mut theta_x = theta.clone();
    for (idx, z) in theta_x.component_mut(0).iter_mut().enumerate() {
        let k = fine.wavevector(idx).0[0] as f64;
        *z *= Complex64::new(0.0, k);
    }
    let th = transform_to_physical(&theta)?;
    let thx = transform_to_physical(&theta_x)?;
    let u: Vec<f64> = th.component(0).iter().zip(thx.component(0)).map(|(a, b)| -2.0 * mu * b / a).collect();
    let u_hat = transform_to_spectral(&PhysicalField::new(&fine, vec![u])?)?;

    let mut out = SpectralField::zeros(grid, 1);
    for idx in 0..grid.len() {
        let k = grid.wavevector(idx);
        let src = fine.index_of(k).expect("fine grid contains the coarse modes");
        out.set(0, idx, u_hat.get(0, src));
    }
    out.pin_mean();
    out.symmetrize();
    Ok(out)
}

/// An analytic reference solution, as recorded in artifact metadata.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "oracle", rename_all = "snake_case")]
pub enum OracleSpec {
    Beltrami { a: f64, b: f64, c: f64 },
    SingleMode { k: [i32; 3], polarization: [f64; 3], amplitude: f64 },
    ColeHopf { amplitude: f64 },
}

impl OracleSpec {
    pub fn name(&self) -> &'static str {
        match self {
            OracleSpec::Beltrami { .. } => "beltrami",
            OracleSpec::SingleMode { .. } => "single_mode",
            OracleSpec::ColeHopf { .. } => "cole_hopf",
        }
    }

    pub fn evaluate(&self, t: f64, mu: f64, grid: &GridSpec) -> Result<SpectralField> {
        match *self {
            OracleSpec::Beltrami { a, b, c } => beltrami_field(a, b, c, t, mu, grid),
            OracleSpec::SingleMode { k, polarization, amplitude } => {
                single_mode_field(WaveVector(k), polarization, amplitude, t, mu, grid)
            }
            OracleSpec::ColeHopf { amplitude } => cole_hopf_burgers(amplitude, mu, t, grid),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{divergence_defect, nonlinear_term, ProductMethod};
    use std::f64::consts::PI;

    #[test]
    fn beltrami_matches_physical_formula() {
        let g = make_grid(3, 8).unwrap();
        let (a, b, c, t, mu) = (1.3, -0.4, 0.7, 0.6, 0.5);
        let f = beltrami_field(a, b, c, t, mu, &g).unwrap();
        let p = transform_to_physical(&f).unwrap();
        let d = (-mu * t).exp();
        let exact = PhysicalField::from_fn(&g, 3, |comp, x| {
            d * match comp {
                0 => a * x[2].sin() + c * x[1].cos(),
                1 => b * x[0].sin() + a * x[2].cos(),
                _ => c * x[1].sin() + b * x[0].cos(),
            }
        });
        for comp in 0..3 {
            for (u, v) in p.component(comp).iter().zip(exact.component(comp)) {
                assert!((u - v).abs() < 1e-14);
            }
        }
        assert_eq!(divergence_defect(&f).unwrap(), 0.0);
        assert!(beltrami_field(1.0, 1.0, 1.0, 0.0, 1.0, &make_grid(1, 8).unwrap()).is_err());
    }

    #[test]
    fn beltrami_nonlinearity_vanishes() {
        let g = make_grid(3, 8).unwrap();
        let f = beltrami_field(1.0, 2.0, -0.5, 0.0, 1.0, &g).unwrap();
        assert!(nonlinear_term(&f, &f, ProductMethod::Direct).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn single_mode_rejects_compressive_polarization() {
        let g = make_grid(3, 8).unwrap();
        assert!(single_mode_field(WaveVector([1, 0, 0]), [1.0, 0.0, 0.0], 1.0, 0.0, 1.0, &g).is_err());
        assert!(single_mode_field(WaveVector([9, 0, 0]), [0.0, 1.0, 0.0], 1.0, 0.0, 1.0, &g).is_err());
        let f = single_mode_field(WaveVector([1, 1, 0]), [1.0, -1.0, 2.0], 1.0, 0.5, 1.0, &g).unwrap();
        let idx = g.index_of(WaveVector([1, 1, 0])).unwrap();
        assert!((f.get(2, idx).re - (-1.0f64).exp()).abs() < 1e-15);
        assert!(nonlinear_term(&f, &f, ProductMethod::Direct).unwrap().max_abs() < 1e-15);
    }

    #[test]
    fn cole_hopf_initial_value_is_a_sine() {
        let g = make_grid(1, 16).unwrap();
        let f = cole_hopf_burgers(1.5, 0.7, 0.0, &g).unwrap();
        let idx = g.index_of(WaveVector([1, 0, 0])).unwrap();
        assert!((f.get(0, idx) - Complex64::new(0.0, -0.75)).norm() < 1e-13);
        let rest = (0..g.len())
            .filter(|&i| i != idx && i != g.mirror(idx))
            .map(|i| f.get(0, i).norm())
            .fold(0.0, f64::max);
        assert!(rest < 1e-13, "{rest}");
    }

    #[test]
    fn cole_hopf_self_converges() {
        let g = make_grid(1, 64).unwrap();
        for &(amp, mu, t) in &[(1.0, 1.0, 0.5), (2.0, 0.2, 0.3)] {
            let a = cole_hopf_burgers_with(amp, mu, t, &g, 4).unwrap();
            let b = cole_hopf_burgers_with(amp, mu, t, &g, 8).unwrap();
            assert!((&a - &b).max_abs() <= 1e-10, "A {amp} mu {mu}");
        }
    }

    #[test]
    fn cole_hopf_satisfies_burgers_pointwise() {
        // time derivative by central differences of the oracle
        // against mu u_xx - u u_x in physical space
        let g = make_grid(1, 64).unwrap();
        let (amp, mu, t, dt) = (1.0, 0.5, 0.4, 1e-4);
        let up = transform_to_physical(&cole_hopf_burgers(amp, mu, t + dt, &g).unwrap()).unwrap();
        let um = transform_to_physical(&cole_hopf_burgers(amp, mu, t - dt, &g).unwrap()).unwrap();
        let f = cole_hopf_burgers(amp, mu, t, &g).unwrap();
        let deriv = |order: i32| {
            let mut d = f.clone();
            for (idx, z) in d.component_mut(0).iter_mut().enumerate() {
                let k = g.wavevector(idx).0[0] as f64;
                *z *= Complex64::new(0.0, k).powi(order);
            }
            transform_to_physical(&d).unwrap()
        };
        let (u, ux, uxx) = (deriv(0), deriv(1), deriv(2));
        for j in 0..g.n() {
            let ut = (up.component(0)[j] - um.component(0)[j]) / (2.0 * dt);
            let rhs = mu * uxx.component(0)[j] - u.component(0)[j] * ux.component(0)[j];
            assert!((ut - rhs).abs() < 1e-6, "x = {}: {ut} vs {rhs}", 2.0 * PI * j as f64 / g.n() as f64);
        }
    }

    #[test]
    fn cole_hopf_rejects_extreme_ratio() {
        let g = make_grid(1, 16).unwrap();
        assert!(matches!(cole_hopf_burgers(100.0, 0.1, 0.1, &g), Err(Error::Oracle(_))));
        assert!(cole_hopf_burgers(1.0, 1.0, 0.1, &make_grid(3, 8).unwrap()).is_err());
    }

    #[test]
    fn spec_round_trips_through_json() {
        let s = OracleSpec::SingleMode { k: [1, 2, 0], polarization: [2.0, -1.0, 0.0], amplitude: 0.5 };
        let j = serde_json::to_string(&s).unwrap();
        assert!(j.contains("\"oracle\":\"single_mode\""));
        assert_eq!(serde_json::from_str::<OracleSpec>(&j).unwrap(), s);
    }
}
