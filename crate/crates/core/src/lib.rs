// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analyticity;
pub mod calibration;
pub mod error;
pub mod experiment;
pub mod io;
pub mod mild;
pub mod norms;
pub mod oracles;
pub mod random;
pub mod spectral;
pub mod trajectory;

pub use error::{Error, Result};
