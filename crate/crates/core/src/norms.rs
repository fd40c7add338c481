//! Wiener-algebra type norms.
//!
//! For vector fields every norm is the sum of the component norms, i.e. the
//! scalar definitions are applied per `(k, i)` pair:
//!
//! * `|f|_{X^-1} = sum_{k != 0} sum_i |f_i(k)| / |k|`
//! * `|v|_{𝒳^-1} = sum_{k != 0} sum_i sup_t |v_i(t, k)| / |k|` (sup over samples)
//! * `|v|_{𝒳^1}  = sum_{k != 0} sum_i int_0^T |k| |v_i(t, k)| dt` (trapezoid)
//! * `⦀v⦀ = |v|_{𝒳^-1} + |v|_{𝒳^1}`
//!
//! Sums run over wavevectors in grid order, then components, so results are
//! bit-reproducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::SpectralField;
use crate::trajectory::Trajectory;

/// Largest exponent accepted by [`apply_weight`].
pub const WEIGHT_EXPONENT_LIMIT: f64 = 700.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub x_minus1: f64,
    pub x1: f64,
    pub triple: f64,
    pub time_grid: Vec<f64>,
    pub quadrature: String,
}

pub fn x_minus1_norm(f: &SpectralField) -> Result<f64> {
    f.ensure_mean_zero()?;
    let grid = f.grid();
    let zero = grid.zero_index();
    let mut acc = 0.0;
    for idx in (0..grid.len()).filter(|&i| i != zero) {
        let inv = 1.0 / grid.norms()[idx];
        for c in 0..f.ncomp() {
            acc += f.get(c, idx).norm() * inv;
        }
    }
    Ok(acc)
}

fn ensure_mean_zero(v: &Trajectory) -> Result<()> {
    v.fields().iter().try_for_each(SpectralField::ensure_mean_zero)
}

/// Sup over sampled times per `(k, i)`, then the weighted sum.
pub fn script_x_minus1_norm(v: &Trajectory) -> Result<f64> {
    ensure_mean_zero(v)?;
    let grid = v.grid();
    let m = grid.len();
    let nc = v.ncomp();
    let mut peaks = vec![0.0f64; nc * m];
    for f in v.fields() {
        for (p, z) in peaks.iter_mut().zip(f.coeffs()) {
            *p = p.max(z.norm());
        }
    }
    let zero = grid.zero_index();
    let mut acc = 0.0;
    for idx in (0..m).filter(|&i| i != zero) {
        let inv = 1.0 / grid.norms()[idx];
        for c in 0..nc {
            acc += peaks[c * m + idx] * inv;
        }
    }
    Ok(acc)
}

/// Trapezoid integral in time per `(k, i)`, then the `|k|`-weighted sum.
pub fn script_x1_norm(v: &Trajectory) -> Result<f64> {
    ensure_mean_zero(v)?;
    let grid = v.grid();
    let m = grid.len();
    let nc = v.ncomp();
    let weights = v.times().trapezoid_weights();
    let mut integrals = vec![0.0f64; nc * m];
    for (f, &w) in v.fields().iter().zip(&weights) {
        for (acc, z) in integrals.iter_mut().zip(f.coeffs()) {
            *acc += w * z.norm();
        }
    }
    let zero = grid.zero_index();
    let mut acc = 0.0;
    for idx in (0..m).filter(|&i| i != zero) {
        let k = grid.norms()[idx];
        for c in 0..nc {
            acc += k * integrals[c * m + idx];
        }
    }
    Ok(acc)
}

pub fn triple_norm(v: &Trajectory) -> Result<NormReport> {
    let x_minus1 = script_x_minus1_norm(v)?;
    let x1 = script_x1_norm(v)?;
    Ok(NormReport {
        x_minus1,
        x1,
        triple: x_minus1 + x1,
        time_grid: v.times().times().to_vec(),
        quadrature: "trapezoid".into(),
    })
}

/// Shorthand for `triple_norm(v)?.triple`.
pub fn triple(v: &Trajectory) -> Result<f64> {
    Ok(triple_norm(v)?.triple)
}

/// Bound on the part of the 𝒳¹ integral beyond the horizon if the final
/// state decayed as a pure heat flow: `sum |v(T, k)| / (mu |k|)`.
pub fn heat_tail_bound(v: &Trajectory, mu: f64) -> Result<f64> {
    Ok(x_minus1_norm(v.last())? / mu)
}

/// Which wavenumber magnitude multiplies the weight exponent.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplier {
    /// `sum |k_i|`, the `|D|` multiplier.
    #[default]
    L1,
    /// Euclidean `|k|`.
    Euclid,
}

fn weight_exponents(v: &Trajectory, multiplier: Multiplier) -> Vec<f64> {
    let grid = v.grid();
    match multiplier {
        Multiplier::L1 => grid.l1_norms().iter().map(|&s| s as f64).collect(),
        Multiplier::Euclid => grid.norms().to_vec(),
    }
}

fn multiply_weight(
    v: &Trajectory,
    phi: &dyn Fn(f64) -> f64,
    sign: f64,
    multiplier: Multiplier,
) -> Result<Trajectory> {
    let radii = weight_exponents(v, multiplier);
    let max_radius = radii.iter().copied().fold(0.0, f64::max);
    let times = v.times().times();
    let phis: Vec<f64> = times.iter().map(|&t| phi(t)).collect();
    for &p in &phis {
        let exponent = p.abs() * max_radius;
        if !(exponent <= WEIGHT_EXPONENT_LIMIT) {
            return Err(Error::WeightOverflow { exponent, limit: WEIGHT_EXPONENT_LIMIT });
        }
    }
    let mut out = v.clone();
    for (f, &p) in out.fields_mut().iter_mut().zip(&phis) {
        if p != 0.0 {
            f.map_modes(|idx| (sign * p * radii[idx]).exp());
        }
    }
    Ok(out)
}

/// Multiplies `v(t, k)` by `exp(phi(t) sum |k_i|)`. `phi` must satisfy
/// `phi(0) >= 0` and be nondecreasing on the samples.
pub fn apply_weight(v: &Trajectory, phi: &dyn Fn(f64) -> f64) -> Result<Trajectory> {
    apply_weight_with(v, phi, Multiplier::L1)
}

pub fn apply_weight_with(
    v: &Trajectory,
    phi: &dyn Fn(f64) -> f64,
    multiplier: Multiplier,
) -> Result<Trajectory> {
    let times = v.times().times();
    let p0 = phi(times[0]);
    if !(p0 >= 0.0) {
        return Err(Error::InvalidParameter(format!("weight must satisfy phi(0) >= 0, got {p0}")));
    }
    let mut prev = p0;
    for &t in &times[1..] {
        let p = phi(t);
        if !(p >= prev) {
            return Err(Error::InvalidParameter(format!("weight decreases at t = {t}")));
        }
        prev = p;
    }
    multiply_weight(v, phi, 1.0, multiplier)
}

/// Inverse of [`apply_weight`]: multiplies by `exp(-phi(t) sum |k_i|)`.
pub fn remove_weight(v: &Trajectory, phi: &dyn Fn(f64) -> f64) -> Result<Trajectory> {
    multiply_weight(v, phi, -1.0, Multiplier::L1)
}

/// Zeroes coefficients below `rel * max_k |v(t, k)|` at each sample time.
pub fn floor_relative(v: &Trajectory, rel: f64) -> Trajectory {
    let mut out = v.clone();
    for f in out.fields_mut() {
        let cut = rel * f.max_abs();
        for z in f.coeffs_mut() {
            if z.norm() < cut {
                *z = num_complex::Complex64::new(0.0, 0.0);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_hermitian, random_solenoidal};
    use crate::spectral::{make_grid, GridSpec, WaveVector};
    use crate::trajectory::TimeGrid;
    use num_complex::Complex64;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cosine(g: &GridSpec, k: [i32; 3], amp: f64) -> SpectralField {
        let mut f = SpectralField::zeros(g, 1);
        f.set_pair(0, g.index_of(WaveVector(k)).unwrap(), Complex64::new(amp / 2.0, 0.0));
        f
    }

    /// Independent reference: one pass over every `(component, k)` pair.
    fn naive_x_minus1(f: &SpectralField) -> f64 {
        let g = f.grid();
        let mut acc = 0.0;
        for idx in 0..g.len() {
            let k = g.wavevector(idx);
            if k.is_zero() {
                continue;
            }
            let kk = k.0.iter().map(|&c| (c * c) as f64).sum::<f64>().sqrt();
            for c in 0..f.ncomp() {
                let z = f.get(c, idx);
                acc += (z.re * z.re + z.im * z.im).sqrt() / kk;
            }
        }
        acc
    }

    fn heat_trajectory(f: &SpectralField, mu: f64, times: &TimeGrid) -> Trajectory {
        let g = f.grid().clone();
        let fields = times
            .times()
            .iter()
            .map(|&t| {
                let mut h = f.clone();
                h.map_modes(|idx| (-mu * t * g.norm_sq()[idx]).exp());
                h
            })
            .collect();
        Trajectory::new(times.clone(), fields).unwrap()
    }

    #[test]
    fn cosine_modes() {
        let g = make_grid(3, 8).unwrap();
        assert!((x_minus1_norm(&cosine(&g, [1, 0, 0], 3.0)).unwrap() - 3.0).abs() < 1e-15);
        assert!((x_minus1_norm(&cosine(&g, [2, 0, 0], 3.0)).unwrap() - 1.5).abs() < 1e-15);
    }

    #[test]
    fn nonzero_mean_rejected() {
        let g = make_grid(1, 8).unwrap();
        let mut f = SpectralField::zeros(&g, 1);
        f.set(0, g.zero_index(), Complex64::new(1.0, 0.0));
        assert!(matches!(x_minus1_norm(&f), Err(Error::NonzeroMean(_))));
    }

    #[test]
    fn matches_naive_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = make_grid(3, 10).unwrap();
        let f = random_hermitian(&g, 3, 1.5, &mut rng);
        let a = x_minus1_norm(&f).unwrap();
        assert!((a - naive_x_minus1(&f)).abs() <= 1e-13 * a);
    }

    #[test]
    fn constant_trajectory() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let g = make_grid(3, 6).unwrap();
        let f = random_solenoidal(&g, 2.0, &mut rng);
        let times = TimeGrid::uniform(2.5, 7).unwrap();
        let v = Trajectory::constant(&f, &times);
        let xm = x_minus1_norm(&f).unwrap();
        assert!((script_x_minus1_norm(&v).unwrap() - xm).abs() <= 1e-14 * xm);
        let expected: f64 = (0..g.len())
            .map(|i| (0..3).map(|c| f.get(c, i).norm()).sum::<f64>() * g.norms()[i])
            .sum::<f64>()
            * 2.5;
        assert!((script_x1_norm(&v).unwrap() - expected).abs() <= 1e-13 * expected);
    }

    #[test]
    fn decaying_mode_peaks_at_start() {
        let g = make_grid(3, 8).unwrap();
        let f = cosine(&g, [1, 0, 0], 1.0);
        let v = heat_trajectory(&f, 1.0, &TimeGrid::uniform(3.0, 30).unwrap());
        assert!((script_x_minus1_norm(&v).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sup_then_sum_exceeds_sum_then_sup() {
        // two disjoint modes peaking at different times: amplitudes (1, 0, 0.2)
        // on |k| = 1 and (0.1, 0, 2) on |k| = 2
        let g = make_grid(3, 8).unwrap();
        let times = TimeGrid::new(vec![0.0, 1.0, 2.0]).unwrap();
        let a = cosine(&g, [1, 0, 0], 1.0);
        let b = cosine(&g, [0, 2, 0], 1.0);
        let amps = [(1.0, 0.1), (0.0, 0.0), (0.2, 2.0)];
        let fields = amps
            .iter()
            .map(|&(x, y)| {
                let mut f = a.scaled(x);
                f.add_scaled(&b, y);
                f
            })
            .collect();
        let v = Trajectory::new(times, fields).unwrap();
        let hand = 1.0 + 2.0 / 2.0;
        let got = script_x_minus1_norm(&v).unwrap();
        assert!((got - hand).abs() < 1e-15);
        let sum_then_sup = v.fields().iter().map(|f| x_minus1_norm(f).unwrap()).fold(0.0, f64::max);
        assert!(got > sum_then_sup + 0.5);
    }

    #[test]
    fn heat_decay_integral_converges_to_closed_form() {
        // unit-amplitude cosine at |k| = 1, mu = 1: int_0^inf |k| e^{-t} dt = 1
        let g = make_grid(3, 8).unwrap();
        let f = cosine(&g, [0, 0, 1], 1.0);
        let v = heat_trajectory(&f, 1.0, &TimeGrid::uniform(10.0, 10_000).unwrap());
        let x1 = script_x1_norm(&v).unwrap();
        assert!((x1 - 1.0).abs() < 1e-4, "{x1}");
    }

    #[test]
    fn zero_trajectory() {
        let g = make_grid(3, 6).unwrap();
        let v = Trajectory::zeros(&g, 3, &TimeGrid::uniform(1.0, 4).unwrap());
        let r = triple_norm(&v).unwrap();
        assert_eq!((r.x_minus1, r.x1, r.triple), (0.0, 0.0, 0.0));
        assert_eq!(r.quadrature, "trapezoid");
    }

    #[test]
    fn quadrature_refinement_is_second_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let g = make_grid(3, 6).unwrap();
        let f = random_solenoidal(&g, 2.0, &mut rng);
        let x1 = |steps| script_x1_norm(&heat_trajectory(&f, 0.5, &TimeGrid::uniform(1.0, steps).unwrap())).unwrap();
        let (a, b, c) = (x1(16), x1(32), x1(64));
        let order = ((a - b) / (b - c)).log2();
        assert!(order >= 1.9, "observed order {order}");
    }

    #[test]
    fn weight_single_mode_and_identity() {
        let g = make_grid(3, 8).unwrap();
        let f = cosine(&g, [1, -2, 1], 2.0);
        let times = TimeGrid::uniform(1.0, 4).unwrap();
        let v = Trajectory::constant(&f, &times);
        assert_eq!(apply_weight(&v, &|_| 0.0).unwrap(), v);
        let mu = 0.7;
        let w = apply_weight(&v, &|t: f64| mu * t.sqrt()).unwrap();
        let idx = g.index_of(WaveVector([1, -2, 1])).unwrap();
        for (m, &t) in times.times().iter().enumerate() {
            let expected = 1.0 * (mu * t.sqrt() * 4.0).exp();
            assert!((w.field(m).get(0, idx).re - expected).abs() <= 1e-14 * expected);
        }
    }

    #[test]
    fn weight_guards() {
        let g = make_grid(3, 16).unwrap();
        let v = Trajectory::zeros(&g, 3, &TimeGrid::uniform(10.0, 4).unwrap());
        // max l1 = 21, phi(T) = 40 -> 840 > 700
        assert!(matches!(apply_weight(&v, &|t| 4.0 * t), Err(Error::WeightOverflow { .. })));
        assert!(apply_weight(&v, &|t| -t).is_err());
        assert!(apply_weight(&v, &|t| 1.0 - t).is_err());
    }

    #[test]
    fn l1_weight_dominates_euclidean_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = make_grid(3, 8).unwrap();
        let f = random_solenoidal(&g, 1.0, &mut rng);
        let v = Trajectory::constant(&f, &TimeGrid::uniform(1.0, 5).unwrap());
        let phi = |t: f64| 0.8 * t;
        let l1 = triple(&apply_weight_with(&v, &phi, Multiplier::L1).unwrap()).unwrap();
        let eu = triple(&apply_weight_with(&v, &phi, Multiplier::Euclid).unwrap()).unwrap();
        assert!(l1 >= eu);
    }

    fn random_trajectory(seed: u64) -> Trajectory {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = make_grid(3, 6).unwrap();
        let times = TimeGrid::uniform(1.0, 5).unwrap();
        let fields = (0..times.len()).map(|_| random_solenoidal(&g, 1.5, &mut rng)).collect();
        Trajectory::new(times, fields).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn homogeneity_and_triangle(seed in any::<u64>(), lambda in -3.0f64..3.0) {
            let u = random_trajectory(seed);
            let v = random_trajectory(seed.wrapping_add(1));
            let nu = triple_norm(&u).unwrap();
            let scaled = triple_norm(&u.scaled(lambda)).unwrap();
            prop_assert!((scaled.triple - lambda.abs() * nu.triple).abs() <= 1e-12 * nu.triple);
            prop_assert!((scaled.x_minus1 - lambda.abs() * nu.x_minus1).abs() <= 1e-12 * nu.x_minus1);
            let w = u.sum(&v).unwrap();
            let (a, b, c) = (triple_norm(&u).unwrap(), triple_norm(&v).unwrap(), triple_norm(&w).unwrap());
            prop_assert!(c.x_minus1 <= a.x_minus1 + b.x_minus1 + 1e-12 * c.x_minus1);
            prop_assert!(c.x1 <= a.x1 + b.x1 + 1e-12 * c.x1);
            prop_assert_eq!(nu.triple, nu.x_minus1 + nu.x1);
            let sup = u.fields().iter().map(|f| x_minus1_norm(f).unwrap()).fold(0.0, f64::max);
            prop_assert!(nu.x_minus1 >= sup);
        }

        #[test]
        fn weight_round_trip(seed in any::<u64>(), c in 0.0f64..1.5) {
            let v = random_trajectory(seed);
            let phi = move |t: f64| c * t.sqrt();
            let back = remove_weight(&apply_weight(&v, &phi).unwrap(), &phi).unwrap();
            for (a, b) in back.fields().iter().zip(v.fields()) {
                prop_assert!((a - b).max_abs() <= 1e-12 * b.max_abs());
            }
        }
    }
}
