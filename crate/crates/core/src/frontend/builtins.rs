//! Model templates shipped with the tool.

use super::parser::parse_system;
use super::system::PDESystem;

pub const BURGERS: &str = r#"pde burgers {
  description "deformed Burgers equation u_t + u u_{x;eps} = i kappa u_{xx;mu}"
  field u(x, t)
  param kappa: real
  param eps: int
  param mu: int
  equation: dt(u) + u*D(u; eps) = i*kappa*D2(u; mu)
}
"#;

pub const KDV: &str = r#"pde kdv {
  description "deformed KdV equation u_t - 6 u u_{x;eps} + u_{xxx;mu} = 0"
  field u(x, t)
  param eps: int
  param mu: int
  equation: dt(u) - 6*u*D(u; eps) + D3(u; mu) = 0
}
"#;

pub const NAMES: [&str; 2] = ["burgers", "kdv"];

/// Template by name, with symbolic deformation parameters.
pub fn builtin(name: &str) -> Option<PDESystem> {
    let src = match name {
        "burgers" => BURGERS,
        "kdv" => KDV,
        _ => return None,
    };
    Some(parse_system(src).expect("builtin templates are well formed"))
}
