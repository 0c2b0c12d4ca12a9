//! Exact symbolic algebra for supercommutative Laurent polynomials, finite
//! dimensional Lie superalgebras, universal enveloping algebras in PBW normal
//! form, point-supported distributions on affine supergroups, and the
//! reconstruction of a supergroup (and of its actions) from the pair
//! `(reduced group, Lie superalgebra)`.
//!
//! All coefficients are exact rationals with arbitrary precision integers, so
//! every identity in the test suites is an equality check, never a tolerance.

pub mod actions;
pub mod checks;
pub mod distributions;
pub mod enveloping;
pub mod group;
pub mod liesuper;
pub mod parse;
mod qmatrix;
mod rational;
pub mod sampling;
pub mod shcp;
pub mod superpoly;

pub use rational::{fact, q, qi, Q};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch")]
    SignatureMismatch,
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("parity mismatch for `{0}`")]
    ParityMismatch(String),
    #[error("zero assigned to invertible generator `{0}`")]
    ZeroAtInvertible(String),
    #[error("negative exponent on non-invertible generator `{0}`")]
    NegativeExponent(String),
    #[error("odd generators present where an even element is required")]
    OddPresent,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("singular matrix")]
    Singular,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("unsupported instance: {0}")]
    Unsupported(String),
    #[error("distribution must have single-point support")]
    MultiPointSupport,
    #[error("structure constants violate {0}")]
    BadStructure(String),
    #[error("compatibility relation failed: {0}")]
    Compatibility(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
