//! Scalars and dense linear algebra over the exact and float backends.

mod complex;
mod linalg;
mod scalar;

pub use complex::{CMatrix, Complex};
pub use linalg::*;
pub use scalar::{
    float_tolerance, scalar_eq, set_float_tolerance, tolerance_from_env, Backend, Scalar, Value,
    DEFAULT_FLOAT_TOLERANCE, TOLERANCE_ENV,
};
