//! Exact computational model of the equivariant graded star product on the
//! symbol algebra of a flag manifold of `SL_n`.
//!
//! The crate realizes the twisted differential-operator algebra on the big
//! cell, computes the invariant trace and positive-definite Gram form,
//! derives the orthogonal-splitting quantization map, and verifies the
//! algebraic identities of the construction with zero-tolerance certificates.
//! All arithmetic is exact over the Gaussian rationals.

use std::fmt;

pub mod scalar;
pub mod mono;
pub mod poly;
pub mod linalg;
pub mod weyl;
pub mod lie;
pub mod flag;
pub mod classical;
pub mod dmodule;
pub mod quant;
pub mod verify;
pub mod exprs;

pub use flag::{FlagConfig, FlagModel};
pub use quant::QuantEngine;
pub use scalar::GaussianRational;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Invalid run or flag configuration.
    Config(String),
    /// Mismatched variable counts or degrees.
    Dimension(String),
    /// Operator order violates a stated bound.
    Order(String),
    /// Bad text input.
    Parse(String),
    /// An exact identity the construction guarantees failed to hold; `anchor`
    /// names the violated identity.
    Consistency { anchor: String, detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Config(s) => write!(f, "configuration error: {s}"),
            Error::Dimension(s) => write!(f, "dimension error: {s}"),
            Error::Order(s) => write!(f, "order violation: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
            Error::Consistency { anchor, detail } => {
                write!(f, "consistency violation [{anchor}]: {detail}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
