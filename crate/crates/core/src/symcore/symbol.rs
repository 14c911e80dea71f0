//! Symbols of the expression algebra. The kind of a symbol fixes how it
//! behaves under differentiation.

use std::fmt;
use std::sync::Arc;

use super::exponent::Exponent;

pub type Name = Arc<str>;

/// Independent variables.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    X,
    T,
    Z,
}

impl Var {
    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::T => 1,
            Var::Z => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::T => "t",
            Var::Z => "z",
        }
    }
}

/// A field together with a multi-index of partial derivatives in (x, t, z).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Jet {
    pub field: Name,
    pub orders: [u32; 3],
}

impl Jet {
    pub fn new(field: &str, dx: u32, dt: u32) -> Self {
        Self { field: field.into(), orders: [dx, dt, 0] }
    }

    pub fn z(field: &str, dz: u32) -> Self {
        Self { field: field.into(), orders: [0, 0, dz] }
    }

    pub fn derived(&self, v: Var) -> Self {
        let mut orders = self.orders;
        orders[v.index()] += 1;
        Self { field: self.field.clone(), orders }
    }

    pub fn total_order(&self) -> u32 {
        self.orders.iter().sum()
    }
}

/// A deformed-derivative slot `D_n(field; exponent)` of a model template.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Slot {
    pub field: Name,
    pub order: u32,
    pub exponent: Exponent,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Symbol {
    /// The imaginary unit; only ever stored with a symbolic exponent.
    Imag,
    Var(Var),
    Param(Name),
    /// Symbolic exponent such as ε, μ, α or r.
    ExpVar(Name),
    /// `name^(order)(t)`, e.g. ξ′ for order 1.
    TimeFn { name: Name, order: u32 },
    Jet(Jet),
    /// Expansion coefficient λ_index and its x/t derivatives.
    Coef { index: u32, dx: u32, dt: u32 },
    /// Resonance probe amplitude ϑ.
    Probe,
    Slot(Slot),
    /// Engine-internal placeholder (never appears in results).
    Aux(Name),
}

impl Symbol {
    pub fn param(name: &str) -> Self {
        Symbol::Param(name.into())
    }

    pub fn exp_var(name: &str) -> Self {
        Symbol::ExpVar(name.into())
    }

    pub fn jet(field: &str, dx: u32, dt: u32) -> Self {
        Symbol::Jet(Jet::new(field, dx, dt))
    }

    pub fn time_fn(name: &str, order: u32) -> Self {
        Symbol::TimeFn { name: name.into(), order }
    }

    pub fn coef(index: u32) -> Self {
        Symbol::Coef { index, dx: 0, dt: 0 }
    }

    pub fn as_jet(&self) -> Option<&Jet> {
        match self {
            Symbol::Jet(j) => Some(j),
            _ => None,
        }
    }

    pub fn is_jet_of(&self, field: &str) -> bool {
        matches!(self, Symbol::Jet(j) if &*j.field == field)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Imag => write!(f, "i"),
            Symbol::Var(v) => write!(f, "{}", v.name()),
            Symbol::Param(n) | Symbol::ExpVar(n) | Symbol::Aux(n) => write!(f, "{n}"),
            Symbol::TimeFn { name, order } => match order {
                0 => write!(f, "{name}"),
                1..=3 => write!(f, "{name}{}", "'".repeat(*order as usize)),
                _ => write!(f, "{name}^({order})"),
            },
            Symbol::Jet(j) => {
                write!(f, "{}", j.field)?;
                if j.total_order() > 0 {
                    write!(f, "_")?;
                    for (k, v) in ["x", "t", "z"].iter().enumerate() {
                        for _ in 0..j.orders[k] {
                            write!(f, "{v}")?;
                        }
                    }
                }
                Ok(())
            }
            Symbol::Coef { index, dx, dt } => {
                write!(f, "lambda{index}")?;
                if dx + dt > 0 {
                    write!(f, "_{}{}", "x".repeat(*dx as usize), "t".repeat(*dt as usize))?;
                }
                Ok(())
            }
            Symbol::Probe => write!(f, "theta"),
            Symbol::Slot(s) => {
                let head = if s.order == 1 { "D".to_string() } else { format!("D{}", s.order) };
                write!(f, "{head}({}; {})", s.field, s.exponent)
            }
        }
    }
}
