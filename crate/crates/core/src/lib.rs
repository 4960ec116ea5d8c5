//! Sum-free categorical quantum mechanics: a typed term algebra for strict
//! dagger-compact categories with classical objects, a diagram rewriter, and
//! a dense complex-matrix model used to check the two against each other.

#![no_std]

extern crate alloc;

pub mod axioms;
pub mod classical;
pub mod cpm;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod object;
pub mod protocols;
pub mod report;
pub mod rewrite;
pub mod sample;
pub mod spectra;
pub mod term;

pub use error::{Error, Result};
pub use matrix::{approx_eq, c, CMatrix, C64};
pub use model::{eval, numeric_eq, standard_classical, Interpretation, TOL};
pub use object::{Factor, ObjectWord};
pub use term::{conjugate, dagger, partial_transpose, scalar_mul, trace, transpose, MorTerm, Signature};
