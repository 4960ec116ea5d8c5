//! Front end for `frobenius-core`: the diagram language, JSON
//! interpretation files and the subcommands behind the `frobenius` binary.

pub mod commands;
pub mod error;
pub mod interp;
pub mod program;
pub mod render;
pub mod syntax;

pub use error::InputError;
pub use program::{Assertion, Program};
