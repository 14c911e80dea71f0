//! Painlevé test engine for PT-symmetrically deformed nonlinear evolution
//! equations.

pub mod analysis;
pub mod deform;
pub mod frontend;
pub mod painleve;
pub mod symcore;

pub use symcore::{GaussRational, SymError};

/// Exact expression over Gaussian rationals.
pub type Expr = symcore::Expr<GaussRational>;

/// Double-double scalar used where f64 runs out of digits.
pub type Extended = twofloat::TwoFloat;
pub type Tolerances = analysis::Tolerances<f64>;
pub type ExtendedTolerances = analysis::Tolerances<Extended>;
pub type CompareOptions = analysis::CompareOptions<f64>;
pub type ExtendedCompareOptions = analysis::CompareOptions<Extended>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Sym(#[from] SymError),
    #[error(transparent)]
    Parse(#[from] frontend::ParseError),
    #[error("unsupported deformation: {0}")]
    UnsupportedDeformation(String),
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),
    #[error("integration failed at z = {z}: {message}")]
    Integration { z: f64, message: String },
}
