pub mod composition;
pub mod cone;
pub mod darwinism;
pub mod decoherence;
pub mod demos;
pub mod error;
pub mod gpt;
pub mod io;
pub mod lp;
pub mod numeric;
pub mod quantum;
pub mod report;
pub mod separability;
pub mod stm;
pub mod theories;

pub use error::{Error, Result};
pub use num_rational::BigRational;

/// Exact rational scalar.
pub type Q = BigRational;
