//! Memoryless computation: rewriting a finite register file in place.
//!
//! A register file holds `n` values from a finite alphabet of size `q`. The
//! only allowed operation is an *instruction*, which rewrites a single
//! register as an arbitrary function of the whole file — the classic example
//! being the three XOR updates that swap two registers without a buffer. A
//! *program* is a sequence of instructions, and the cost of a function is
//! the shortest program computing it.
//!
//! This crate provides:
//!
//! - the data model: [`Context`], [`Transformation`], [`Instruction`],
//!   [`Program`], together with the domination machinery that drives every
//!   synthesizer ([`express_through`]);
//! - synthesizers meeting tight length bounds: `2n - 1` steps for any
//!   permutation, `4n - 3` for any transformation, exact lengths for
//!   shuffles of variables, `2n - 1` row updates for invertible matrices
//!   over `GF(q)`, and shorter constructions when scratch registers are
//!   allowed (see [`synth`]);
//! - an exact complexity [`oracle`] (breadth-first and bounded search over
//!   instruction generators) that certifies the synthesized lengths at
//!   small sizes;
//! - text [`files`] formats and a command-line front end ([`cli`]).
//!
//! Run `cargo run --example swap` for a first tour; each major capability
//! has a runnable example.

mod context;
mod instruction;
mod program;
mod transform;

pub mod cli;
pub mod files;
pub mod gf;
pub mod oracle;
pub mod synth;

pub use context::Context;
pub use instruction::Instruction;
pub use program::Program;
pub use transform::{express_through, is_balanced, Transformation};

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("target coordinate function is not determined by the current register contents")]
    NotExpressible,
    #[error("black-box moves cannot compute a non-identity permutation of variables")]
    NotBlackBoxComputable,
    #[error("program output depends on the initial content of the scratch registers")]
    ScratchDependent,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
