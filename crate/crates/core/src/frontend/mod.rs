//! Model definitions: parsing, builtin templates, printing and reports.

pub mod builtins;
pub mod parser;
pub mod report;
pub mod source;
pub mod system;

pub use builtins::builtin;
pub use parser::{parse_expr, parse_system, ParseError};
pub use report::{coefficient_records, BalanceRecord, CoefficientRecord, DiagnosticRow, Diagnostics, Provenance, Report, ResonanceRecord};
pub use source::{expr_source, to_source};
pub use system::{DeformValue, PDESystem, Param, ParamDomain};
