//! Generalized inverses of dense matrices over exact rationals and complex
//! doubles.

pub mod certify;
pub mod cli;
pub mod error;
pub mod geninv;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod scalar;
pub mod spectral;

pub use error::{GinvError, Result};
pub use matrix::Matrix;
pub use scalar::{Backend, Field, Rational, Scalar, TolerancePolicy};
pub use num_complex::Complex64;
