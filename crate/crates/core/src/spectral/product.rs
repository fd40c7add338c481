//! The quadratic nonlinearity `P div(F ⊗ G)` (or `½ ∂x(FG)` in one
//! dimension), formed either pseudo-spectrally on a 3/2-padded grid or by
//! literal convolution over the truncated lattice.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{SpectralField, TensorField};
use super::leray::leray_project_in_place;
use super::transform::{analyze_pair, synthesize_pair, Resolution};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductMethod {
    #[default]
    Pseudospectral,
    Direct,
}

fn padded_samples(f: &SpectralField) -> Vec<Vec<f64>> {
    let grid = f.grid();
    let mut out = Vec::with_capacity(f.ncomp());
    let mut c = 0;
    while c < f.ncomp() {
        if c + 1 < f.ncomp() {
            let (a, b) =
                synthesize_pair(grid, Resolution::Padded, f.component(c), Some(f.component(c + 1)));
            out.push(a);
            out.extend(b);
            c += 2;
        } else {
            out.push(synthesize_pair(grid, Resolution::Padded, f.component(c), None).0);
            c += 1;
        }
    }
    out
}

fn check_pair(f: &SpectralField, g: &SpectralField) -> Result<()> {
    f.ensure_compatible(g)
}

/// Dealiased Fourier coefficients of `F_i G_j` on the retained modes.
///
/// Products are formed on the `(3n/2)^d` grid, so the result equals the
/// truncated lattice convolution for all retained inputs.
pub fn tensor_product_pseudospectral(f: &SpectralField, g: &SpectralField) -> Result<TensorField> {
    check_pair(f, g)?;
    let grid = f.grid();
    let nc = f.ncomp();
    let symmetric = std::ptr::eq(f, g) || f == g;
    let fs = padded_samples(f);
    let gs = if symmetric { fs.clone() } else { padded_samples(g) };

    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..nc {
        for j in 0..nc {
            if !symmetric || i <= j {
                pairs.push((i, j));
            }
        }
    }
    let product = |(i, j): (usize, usize)| -> Vec<f64> {
        fs[i].iter().zip(&gs[j]).map(|(a, b)| a * b).collect()
    };

    let mut out = TensorField::zeros(grid, nc);
    for chunk in pairs.chunks(2) {
        let p = product(chunk[0]);
        if chunk.len() == 2 {
            let q = product(chunk[1]);
            let (a, b) = analyze_pair(grid, Resolution::Padded, &p, Some(&q));
            out.component_mut(chunk[0].0, chunk[0].1).copy_from_slice(&a);
            out.component_mut(chunk[1].0, chunk[1].1).copy_from_slice(&b.unwrap_or_default());
        } else {
            let (a, _) = analyze_pair(grid, Resolution::Padded, &p, None);
            out.component_mut(chunk[0].0, chunk[0].1).copy_from_slice(&a);
        }
    }
    if symmetric {
        for i in 0..nc {
            for j in 0..i {
                let upper = out.component(j, i).to_vec();
                out.component_mut(i, j).copy_from_slice(&upper);
            }
        }
    }
    Ok(out)
}

/// Literal truncated convolution `sum_{l, k-l retained} F_i(l) G_j(k-l)`.
/// Cost is quadratic in the number of modes; meant for small grids.
pub fn tensor_product_direct(f: &SpectralField, g: &SpectralField) -> Result<TensorField> {
    check_pair(f, g)?;
    let grid = f.grid();
    let nc = f.ncomp();
    let m = grid.len();
    let zero = grid.zero_index() as isize;
    let kmax = grid.kmax();
    let modes = grid.wavevectors();
    let mut out = TensorField::zeros(grid, nc);

    let active_f: Vec<usize> = (0..m).filter(|&l| (0..nc).any(|i| f.get(i, l).norm() != 0.0)).collect();
    let active_g: Vec<usize> = (0..m).filter(|&q| (0..nc).any(|j| g.get(j, q).norm() != 0.0)).collect();

    for i in 0..nc {
        for j in 0..nc {
            let fi = f.component(i);
            let gj = g.component(j);
            let dest = out.component_mut(i, j);
            for &l in &active_f {
                let kl = modes[l].0;
                for &q in &active_g {
                    let kq = modes[q].0;
                    if (0..3).any(|c| (kl[c] + kq[c]).abs() > kmax) {
                        continue;
                    }
                    let k = (l as isize + q as isize - zero) as usize;
                    dest[k] += fi[l] * gj[q];
                }
            }
        }
    }
    Ok(out)
}

pub fn tensor_product(f: &SpectralField, g: &SpectralField, method: ProductMethod) -> Result<TensorField> {
    match method {
        ProductMethod::Pseudospectral => tensor_product_pseudospectral(f, g),
        ProductMethod::Direct => tensor_product_direct(f, g),
    }
}

/// Spectral coefficients of the quadratic term.
///
/// On a 3-D grid with 3-component fields this is `P div(F ⊗ G)` with
/// `(F ⊗ G)_{ij} = F_i G_j`, i.e. component `i` is `i sum_j k_j (F_i G_j)^(k)`
/// followed by the Leray projector. On a 1-D grid it is the conservative
/// Burgers flux `½ ∂x(F G)`. The zero mode is pinned to 0.
pub fn nonlinear_term(f: &SpectralField, g: &SpectralField, method: ProductMethod) -> Result<SpectralField> {
    check_pair(f, g)?;
    let grid = f.grid();
    let three_d = match (grid.dims(), f.ncomp()) {
        (3, 3) => true,
        (1, 1) => false,
        (d, c) => {
            return Err(Error::Unsupported(format!(
                "nonlinear term needs 3 components in 3-D or 1 in 1-D (got dims {d}, {c} components)"
            )))
        }
    };
    let tensor = tensor_product(f, g, method)?;
    let m = grid.len();
    let i_unit = Complex64::new(0.0, 1.0);
    let mut out = SpectralField::zeros(grid, f.ncomp());
    if three_d {
        for i in 0..3 {
            let dest = out.component_mut(i);
            for (idx, d) in dest.iter_mut().enumerate() {
                let k = grid.wavevector(idx).as_f64();
                let mut acc = Complex64::new(0.0, 0.0);
                for (j, kj) in k.iter().enumerate() {
                    acc += tensor.get(i, j, idx) * kj;
                }
                *d = i_unit * acc;
            }
        }
        leray_project_in_place(&mut out);
    } else {
        let dest = out.component_mut(0);
        for (idx, d) in dest.iter_mut().enumerate().take(m) {
            let k = grid.wavevector(idx).0[0] as f64;
            *d = i_unit * tensor.get(0, 0, idx) * (0.5 * k);
        }
    }
    out.pin_mean();
    out.symmetrize();
    Ok(out)
}
