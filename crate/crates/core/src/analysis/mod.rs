//! Convergence diagnostics, travelling-wave reduction and numeric
//! cross-validation of truncated expansions.

pub mod compare;
pub mod convergence;
pub mod magnitude;
pub mod ode;
pub mod travelling;

pub use compare::{numeric_compare, CompareOptions, Comparison};
pub use convergence::{
    bound_check, csv_rows, root_test, stirling_ratio, BoundEntry, BoundReport, CoefficientSequence, RootTest,
    RootVerdict, DEFAULT_PREC,
};
pub use magnitude::{magnitude, BigFloat};
pub use ode::{complex_div, integrate, refined_div, Tolerances};
pub use travelling::{integrate_once, reduce_travelling, solve_highest, zeta, Integrated, TravellingWaveODE, ZETA};
