use alloc::string::String;
use thiserror::Error;

use crate::object::ObjectWord;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("type mismatch at {position}: expected {expected}, found {found}")]
    TypeMismatch {
        position: String,
        expected: ObjectWord,
        found: ObjectWord,
    },

    #[error("expected a scalar I -> I, found {dom} -> {cod}")]
    NotAScalar { dom: ObjectWord, cod: ObjectWord },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("no interpretation for `{0}`")]
    MissingInterpretation(String),

    #[error("shape mismatch for {what}: expected {expected_rows}x{expected_cols}, found {rows}x{cols}")]
    ShapeMismatch {
        what: String,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },

    #[error("copyable-vector extraction found {found} vectors, expected {expected}")]
    ExtractionFailed { found: usize, expected: usize },

    #[error("spectrum check failed: {law} residual {residual:e}")]
    SpectrumCheckFailed { law: String, residual: f64 },

    #[error("invalid projector family: {law} residual {residual:e}")]
    InvalidFamily { law: String, residual: f64 },

    #[error("not an isometry: residual {0:e}")]
    NotAnIsometry(f64),

    #[error("family member {index} is not unitary: residual {residual:e}")]
    NotUnitary { index: usize, residual: f64 },

    #[error("not X-unitary: residual {0:e}")]
    NotXUnitary(f64),

    #[error("degenerate dimensions: classical object has dim {x}, expected {a}^2")]
    DegenerateDimensions { x: usize, a: usize },

    #[error("Bell measurement is not unitary: residual {0:e}")]
    UnitarityFailed(f64),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
