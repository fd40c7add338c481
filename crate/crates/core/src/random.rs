//! Random spectral fields for tests, calibration and experiment presets.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spectral::leray::leray_project_in_place;
use crate::spectral::{GridSpec, SpectralField};

/// Hermitian field with independent complex Gaussian coefficients shaped by
/// `|k|^{-decay}`; the zero mode is 0.
pub fn random_hermitian<R: Rng + ?Sized>(
    grid: &GridSpec,
    ncomp: usize,
    decay: f64,
    rng: &mut R,
) -> SpectralField {
    let mut f = SpectralField::zeros(grid, ncomp);
    let zero = grid.zero_index();
    for c in 0..ncomp {
        for idx in 0..zero {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let shape = grid.norms()[idx].powf(-decay);
            f.set_pair(c, idx, Complex64::new(re, im) * shape);
        }
    }
    f
}

/// Random divergence-free mean-zero velocity field on a 3-D grid with
/// coefficient amplitudes `~ |k|^{-decay}`.
pub fn random_solenoidal<R: Rng + ?Sized>(grid: &GridSpec, decay: f64, rng: &mut R) -> SpectralField {
    let mut f = random_hermitian(grid, 3, decay, rng);
    leray_project_in_place(&mut f);
    f.symmetrize();
    f
}
