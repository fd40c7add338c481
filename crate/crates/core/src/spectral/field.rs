use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Relative tolerance for Hermitian symmetry checks.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Truncated Fourier coefficients of a real periodic field with `ncomp`
/// components. Coefficients are stored component-major: entry `c * len + i`
/// is `u_c(k_i)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    ncomp: usize,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &GridSpec, ncomp: usize) -> Self {
        Self {
            grid: grid.clone(),
            ncomp,
            coeffs: vec![Complex64::new(0.0, 0.0); ncomp * grid.len()],
        }
    }

    pub fn from_coeffs(grid: &GridSpec, ncomp: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        let expected = ncomp * grid.len();
        if coeffs.len() != expected {
            return Err(Error::ShapeMismatch { expected, got: coeffs.len() });
        }
        Ok(Self { grid: grid.clone(), ncomp, coeffs })
    }

    /// Builds a field by evaluating `f(component, wavevector index)`.
    pub fn from_fn(
        grid: &GridSpec,
        ncomp: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let m = grid.len();
        let coeffs = (0..ncomp * m).map(|j| f(j / m, j % m)).collect();
        Self { grid: grid.clone(), ncomp, coeffs }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        let m = self.grid.len();
        &self.coeffs[c * m..(c + 1) * m]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        let m = self.grid.len();
        &mut self.coeffs[c * m..(c + 1) * m]
    }

    #[inline]
    pub fn get(&self, c: usize, idx: usize) -> Complex64 {
        self.coeffs[c * self.grid.len() + idx]
    }

    #[inline]
    pub fn set(&mut self, c: usize, idx: usize, value: Complex64) {
        let m = self.grid.len();
        self.coeffs[c * m + idx] = value;
    }

    /// Sets `u(k)` and `u(-k) = conj(u(k))` together.
    pub fn set_pair(&mut self, c: usize, idx: usize, value: Complex64) {
        let mirror = self.grid.mirror(idx);
        self.set(c, idx, value);
        self.set(c, mirror, value.conj());
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Largest `|u(0)|` over components.
    pub fn mean_abs(&self) -> f64 {
        let z = self.grid.zero_index();
        (0..self.ncomp).map(|c| self.get(c, z).norm()).fold(0.0, f64::max)
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mean_abs() == 0.0
    }

    pub fn ensure_mean_zero(&self) -> Result<()> {
        let m = self.mean_abs();
        if m != 0.0 {
            return Err(Error::NonzeroMean(m));
        }
        Ok(())
    }

    pub fn pin_mean(&mut self) {
        let z = self.grid.zero_index();
        for c in 0..self.ncomp {
            self.set(c, z, Complex64::new(0.0, 0.0));
        }
    }

    /// `max |u(-k) - conj(u(k))|`.
    pub fn hermitian_defect(&self) -> f64 {
        let m = self.grid.len();
        let mut worst: f64 = 0.0;
        for c in 0..self.ncomp {
            let comp = self.component(c);
            for i in 0..=m / 2 {
                let d = (comp[m - 1 - i] - comp[i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let defect = self.hermitian_defect();
        let tolerance = HERMITIAN_TOL * self.max_abs();
        if defect > tolerance {
            return Err(Error::NotHermitian { defect, tolerance });
        }
        Ok(())
    }

    /// Replaces the field by its Hermitian part, `(u(k) + conj u(-k)) / 2`.
    pub fn symmetrize(&mut self) {
        let m = self.grid.len();
        for c in 0..self.ncomp {
            let comp = self.component_mut(c);
            for i in 0..=m / 2 {
                let j = m - 1 - i;
                let avg = (comp[i] + comp[j].conj()) * 0.5;
                comp[i] = avg;
                comp[j] = avg.conj();
            }
        }
    }

    pub fn ensure_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        if self.ncomp != other.ncomp {
            return Err(Error::GridMismatch(format!(
                "{} vs {} components",
                self.ncomp, other.ncomp
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, a: f64) -> SpectralField {
        let mut out = self.clone();
        out.coeffs.iter_mut().for_each(|z| *z *= a);
        out
    }

    /// `self += a * other`.
    pub fn add_scaled(&mut self, other: &SpectralField, a: f64) {
        debug_assert_eq!(self.coeffs.len(), other.coeffs.len());
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * a;
        }
    }

    /// Multiplies each coefficient by `factor(wavevector index)`.
    pub fn map_modes(&mut self, mut factor: impl FnMut(usize) -> f64) {
        let m = self.grid.len();
        let factors: Vec<f64> = (0..m).map(&mut factor).collect();
        for c in 0..self.ncomp {
            for (z, &f) in self.component_mut(c).iter_mut().zip(&factors) {
                *z *= f;
            }
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;

    fn add(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.add_scaled(rhs, 1.0);
        out
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;

    fn sub(self, rhs: &SpectralField) -> SpectralField {
        let mut out = self.clone();
        out.add_scaled(rhs, -1.0);
        out
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;

    fn mul(self, a: f64) -> SpectralField {
        self.scaled(a)
    }
}

/// Fourier coefficients of a rank-2 tensor field, e.g. `(F ⊗ G)_{ij} = F_i G_j`.
/// Entry `(i * ncomp + j) * len + idx`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorField {
    grid: GridSpec,
    ncomp: usize,
    coeffs: Vec<Complex64>,
}

impl TensorField {
    pub fn zeros(grid: &GridSpec, ncomp: usize) -> Self {
        Self {
            grid: grid.clone(),
            ncomp,
            coeffs: vec![Complex64::new(0.0, 0.0); ncomp * ncomp * grid.len()],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.ncomp
    }

    pub fn component(&self, i: usize, j: usize) -> &[Complex64] {
        let m = self.grid.len();
        let b = (i * self.ncomp + j) * m;
        &self.coeffs[b..b + m]
    }

    pub fn component_mut(&mut self, i: usize, j: usize) -> &mut [Complex64] {
        let m = self.grid.len();
        let b = (i * self.ncomp + j) * m;
        &mut self.coeffs[b..b + m]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, idx: usize) -> Complex64 {
        self.coeffs[(i * self.ncomp + j) * self.grid.len() + idx]
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &TensorField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_defect(&self) -> f64 {
        let m = self.grid.len();
        let mut worst: f64 = 0.0;
        for i in 0..self.ncomp {
            for j in 0..self.ncomp {
                let comp = self.component(i, j);
                for a in 0..=m / 2 {
                    worst = worst.max((comp[m - 1 - a] - comp[a].conj()).norm());
                }
            }
        }
        worst
    }
}

/// Real samples of a field on the uniform `n^dims` grid `x_j = 2 pi j / n`,
/// one row-major array per component.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalField {
    grid: GridSpec,
    samples: Vec<Vec<f64>>,
}

impl PhysicalField {
    pub fn new(grid: &GridSpec, samples: Vec<Vec<f64>>) -> Result<Self> {
        let expected = grid.samples_per_component();
        for s in &samples {
            if s.len() != expected {
                return Err(Error::ShapeMismatch { expected, got: s.len() });
            }
        }
        if samples.is_empty() {
            return Err(Error::ShapeMismatch { expected: 1, got: 0 });
        }
        Ok(Self { grid: grid.clone(), samples })
    }

    /// Samples `f(component, x)` at the grid points.
    pub fn from_fn(grid: &GridSpec, ncomp: usize, f: impl Fn(usize, [f64; 3]) -> f64) -> Self {
        let n = grid.n();
        let h = 2.0 * std::f64::consts::PI / n as f64;
        let total = grid.samples_per_component();
        let samples = (0..ncomp)
            .map(|c| {
                (0..total)
                    .map(|flat| {
                        let x = if grid.dims() == 1 {
                            [flat as f64 * h, 0.0, 0.0]
                        } else {
                            let (a, rest) = (flat / (n * n), flat % (n * n));
                            [a as f64 * h, (rest / n) as f64 * h, (rest % n) as f64 * h]
                        };
                        f(c, x)
                    })
                    .collect()
            })
            .collect();
        Self { grid: grid.clone(), samples }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn ncomp(&self) -> usize {
        self.samples.len()
    }

    pub fn component(&self, c: usize) -> &[f64] {
        &self.samples[c]
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().flatten().map(|v| v.abs()).fold(0.0, f64::max)
    }
}
