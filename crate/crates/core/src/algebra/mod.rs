//! Exact scalars, dense matrices and bilinear forms.

pub mod field;
pub mod form;
pub mod matrix;

pub use field::{Field, Scalar};
pub use form::{BilinearSpace, FormKind, StandardForm};
pub use matrix::Matrix;
