use num_complex::Complex64;

use super::field::SpectralField;
use crate::error::{Error, Result};

fn require_vector_3d(f: &SpectralField, op: &str) -> Result<()> {
    if f.grid().dims() != 3 || f.ncomp() != 3 {
        return Err(Error::Unsupported(format!(
            "{op} needs a 3-component field on a 3-D grid (got dims {}, {} components)",
            f.grid().dims(),
            f.ncomp()
        )));
    }
    Ok(())
}

/// Leray projection `u(k) - k (k.u(k)) / |k|^2`. The zero mode passes through
/// unchanged (constants are already solenoidal).
pub fn leray_project(f: &SpectralField) -> Result<SpectralField> {
    require_vector_3d(f, "leray_project")?;
    let mut out = f.clone();
    leray_project_in_place(&mut out);
    Ok(out)
}

pub(crate) fn leray_project_in_place(f: &mut SpectralField) {
    let grid = f.grid().clone();
    let m = grid.len();
    let zero = grid.zero_index();
    let coeffs = f.coeffs_mut();
    for idx in 0..m {
        if idx == zero {
            continue;
        }
        let k = grid.wavevector(idx).as_f64();
        let inv = 1.0 / grid.norm_sq()[idx];
        let u = [coeffs[idx], coeffs[m + idx], coeffs[2 * m + idx]];
        let div = u[0] * k[0] + u[1] * k[1] + u[2] * k[2];
        for c in 0..3 {
            coeffs[c * m + idx] = u[c] - div * (k[c] * inv);
        }
    }
}

/// `max_k |k . u(k)|`.
pub fn divergence_defect(f: &SpectralField) -> Result<f64> {
    require_vector_3d(f, "divergence_defect")?;
    let grid = f.grid();
    let m = grid.len();
    let coeffs = f.coeffs();
    let mut worst: f64 = 0.0;
    for idx in 0..m {
        let k = grid.wavevector(idx).as_f64();
        let div: Complex64 = (0..3).map(|c| coeffs[c * m + idx] * k[c]).sum();
        worst = worst.max(div.norm());
    }
    Ok(worst)
}
