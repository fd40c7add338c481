//! Truncated Fourier representation of periodic fields on the 1- or 3-torus:
//! grids, transforms, the Leray projector and the quadratic nonlinearity.

mod fft;
pub mod field;
pub mod grid;
pub mod leray;
pub mod product;
pub mod transform;

pub use field::{PhysicalField, SpectralField, TensorField, HERMITIAN_TOL};
pub use grid::{make_grid, DealiasRule, GridSpec, WaveVector};
pub use leray::{divergence_defect, leray_project};
pub use product::{
    nonlinear_term, tensor_product, tensor_product_direct, tensor_product_pseudospectral,
    ProductMethod,
};
pub use transform::{transform_to_physical, transform_to_spectral};
