//! Spectral <-> physical transforms.
//!
//! Convention: `f(x) = sum_k f^(k) e^{ik.x}` and
//! `f^(k) = (2 pi)^{-d} int f(x) e^{-ik.x} dx`, so the inverse transform is
//! the unnormalized backward DFT and the forward transform carries `1/N^d`.
//! Two real fields are transformed at once by packing them into the real and
//! imaginary parts of one complex array.

use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft_nd;
use super::field::{PhysicalField, SpectralField};
use super::grid::GridSpec;
use crate::error::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Resolution {
    /// The `n^dims` sample grid.
    Native,
    /// The `(3n/2)^dims` grid used for dealiased products.
    Padded,
}

impl Resolution {
    fn size(self, grid: &GridSpec) -> usize {
        match self {
            Resolution::Native => grid.n(),
            Resolution::Padded => grid.padded_n(),
        }
    }

    fn positions(self, grid: &GridSpec) -> &[usize] {
        match self {
            Resolution::Native => grid.physical_positions(),
            Resolution::Padded => grid.padded_positions(),
        }
    }
}

/// Evaluates one or two real fields (given by Hermitian coefficient slices)
/// on the chosen sample grid.
pub(crate) fn synthesize_pair(
    grid: &GridSpec,
    res: Resolution,
    a: &[Complex64],
    b: Option<&[Complex64]>,
) -> (Vec<f64>, Option<Vec<f64>>) {
    let size = res.size(grid);
    let total = size.pow(grid.dims() as u32);
    let mut z = vec![Complex64::new(0.0, 0.0); total];
    let pos = res.positions(grid);
    let i = Complex64::new(0.0, 1.0);
    match b {
        Some(b) => {
            for ((&p, &x), &y) in pos.iter().zip(a).zip(b) {
                z[p] = x + i * y;
            }
        }
        None => {
            for (&p, &x) in pos.iter().zip(a) {
                z[p] = x;
            }
        }
    }
    fft_nd(&mut z, size, grid.dims(), FftDirection::Inverse, Some(grid.kmax() as usize));
    let re = z.iter().map(|v| v.re).collect();
    let im = b.map(|_| z.iter().map(|v| v.im).collect());
    (re, im)
}

/// Fourier coefficients (retained modes only) of one or two real sample
/// arrays on the chosen grid.
pub(crate) fn analyze_pair(
    grid: &GridSpec,
    res: Resolution,
    p: &[f64],
    q: Option<&[f64]>,
) -> (Vec<Complex64>, Option<Vec<Complex64>>) {
    let size = res.size(grid);
    let total = size.pow(grid.dims() as u32);
    let mut z: Vec<Complex64> = match q {
        Some(q) => p.iter().zip(q).map(|(&a, &b)| Complex64::new(a, b)).collect(),
        None => p.iter().map(|&a| Complex64::new(a, 0.0)).collect(),
    };
    fft_nd(&mut z, size, grid.dims(), FftDirection::Forward, Some(grid.kmax() as usize));
    let scale = 1.0 / total as f64;
    let pos = res.positions(grid);
    let m = grid.len();
    match q {
        None => {
            let out = pos.iter().map(|&ps| z[ps] * scale).collect();
            (out, None)
        }
        Some(_) => {
            let mut out_p = Vec::with_capacity(m);
            let mut out_q = Vec::with_capacity(m);
            for idx in 0..m {
                let zk = z[pos[idx]];
                let zm = z[pos[grid.mirror(idx)]].conj();
                out_p.push((zk + zm) * (0.5 * scale));
                // (zk - zm) / (2i)
                let d = (zk - zm) * (0.5 * scale);
                out_q.push(Complex64::new(d.im, -d.re));
            }
            (out_p, Some(out_q))
        }
    }
}

/// Samples every component on the `n^dims` grid. Rejects non-Hermitian input.
pub fn transform_to_physical(f: &SpectralField) -> Result<PhysicalField> {
    f.check_hermitian()?;
    let grid = f.grid();
    let mut samples = Vec::with_capacity(f.ncomp());
    let mut c = 0;
    while c < f.ncomp() {
        if c + 1 < f.ncomp() {
            let (a, b) =
                synthesize_pair(grid, Resolution::Native, f.component(c), Some(f.component(c + 1)));
            samples.push(a);
            samples.extend(b);
            c += 2;
        } else {
            let (a, _) = synthesize_pair(grid, Resolution::Native, f.component(c), None);
            samples.push(a);
            c += 1;
        }
    }
    PhysicalField::new(grid, samples)
}

/// Fourier coefficients of physical samples on the retained modes. The zero
/// mode is reported as is; content at the Nyquist wavenumber `-n/2` lies
/// outside the retained set and is dropped.
pub fn transform_to_spectral(p: &PhysicalField) -> Result<SpectralField> {
    let grid = p.grid();
    let ncomp = p.ncomp();
    let mut coeffs = Vec::with_capacity(ncomp * grid.len());
    let mut c = 0;
    while c < ncomp {
        if c + 1 < ncomp {
            let (a, b) =
                analyze_pair(grid, Resolution::Native, p.component(c), Some(p.component(c + 1)));
            coeffs.extend(a);
            coeffs.extend(b.unwrap_or_default());
            c += 2;
        } else {
            let (a, _) = analyze_pair(grid, Resolution::Native, p.component(c), None);
            coeffs.extend(a);
            c += 1;
        }
    }
    SpectralField::from_coeffs(grid, ncomp, coeffs)
}
