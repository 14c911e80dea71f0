//! Exact arithmetic and canonical symbolic expressions.

pub mod collect;
pub mod diff;
pub mod exponent;
pub mod expr;
pub mod gauss;
pub mod subst;
pub mod symbol;

pub use collect::{collect_phi_powers, PhiPowers};
pub use diff::{differentiate, DiffMode};
pub use exponent::Exponent;
pub use expr::{normalize, Expr, Monomial, RawExpr};
pub use gauss::{rational_to_float, Coefficient, GaussRational};
pub use subst::{substitute, substitute_field, Bindings};
pub use symbol::{Jet, Name, Slot, Symbol, Var};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymError {
    #[error("unsupported exponent form: {0}")]
    UnsupportedExponentForm(String),
    #[error("cyclic substitution: {0}")]
    CyclicSubstitution(String),
    #[error("ambiguous ordering of exponents: {0}")]
    AmbiguousOrdering(String),
    #[error("not invertible: {0}")]
    NonInvertible(String),
    #[error("unsupported derivative: {0}")]
    UnsupportedDerivative(String),
    #[error("parse error: {0}")]
    Parse(String),
}
