//! Parsed evolution equations.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::symcore::{Exponent, Symbol, Var};
use crate::{Error, Expr};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamDomain {
    Real,
    #[serde(rename = "int")]
    Integer,
    Complex,
}

impl fmt::Display for ParamDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParamDomain::Real => "real",
            ParamDomain::Integer => "int",
            ParamDomain::Complex => "complex",
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub domain: ParamDomain,
}

/// Value of a deformation parameter.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DeformValue {
    Symbolic,
    Int(i64),
}

impl fmt::Display for DeformValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeformValue::Symbolic => f.write_str("generic"),
            DeformValue::Int(k) => write!(f, "{k}"),
        }
    }
}

/// An evolution equation `equation = 0` in one field u(x, t).
///
/// Integer parameters are symbolic exponents; those used inside deformation
/// slots are the deformation parameters, listed in `deformation` in
/// declaration order.
#[derive(Clone, PartialEq, Debug)]
pub struct PDESystem {
    pub name: String,
    pub field: String,
    pub vars: [String; 2],
    pub params: Vec<Param>,
    pub equation: Expr,
    pub deformation: Vec<(String, DeformValue)>,
    pub description: String,
}

impl PDESystem {
    pub fn param(&self, name: &str) -> Option<&Param> {
        self.params.iter().find(|p| p.name == name)
    }

    pub fn deformation_value(&self, name: &str) -> Option<DeformValue> {
        self.deformation.iter().find(|(n, _)| n == name).map(|(_, v)| *v)
    }

    /// Concrete deformation exponents, if every one is fixed.
    pub fn concrete_deformation(&self) -> Option<Vec<i64>> {
        self.deformation
            .iter()
            .map(|(_, v)| match v {
                DeformValue::Int(k) => Some(*k),
                DeformValue::Symbolic => None,
            })
            .collect()
    }

    pub fn has_slots(&self) -> bool {
        self.equation.contains_where(|s| matches!(s, Symbol::Slot(_)))
    }

    /// Highest total derivative order of the field, counting a slot
    /// `Dn` as order n.
    pub fn order(&self) -> u32 {
        let mut best = 0;
        for (m, _) in self.equation.terms() {
            for (s, _) in m.factors() {
                match s {
                    Symbol::Jet(j) if *j.field == *self.field => best = best.max(j.total_order()),
                    Symbol::Slot(sl) if *sl.field == *self.field => best = best.max(sl.order),
                    _ => {}
                }
            }
        }
        best
    }

    /// Spatial order (ignoring the time derivative).
    pub fn spatial_order(&self) -> u32 {
        let mut best = 0;
        for (m, _) in self.equation.terms() {
            for (s, _) in m.factors() {
                match s {
                    Symbol::Jet(j) if *j.field == *self.field => best = best.max(j.orders[0]),
                    Symbol::Slot(sl) if *sl.field == *self.field => best = best.max(sl.order),
                    _ => {}
                }
            }
        }
        best
    }

    /// Checks the declared-symbol and evolution-form invariants.
    pub fn validate(&self) -> Result<(), Error> {
        let declared = |s: &Symbol| -> bool {
            match s {
                Symbol::Imag => true,
                Symbol::Var(v) => matches!(v, Var::X | Var::T),
                Symbol::Param(n) => self.param(n).is_some_and(|p| p.domain != ParamDomain::Integer),
                Symbol::ExpVar(n) => self.param(n).is_some_and(|p| p.domain == ParamDomain::Integer),
                Symbol::Jet(j) => *j.field == *self.field && j.orders[2] == 0,
                Symbol::Slot(sl) => {
                    *sl.field == *self.field
                        && sl.order >= 1
                        && sl
                            .exponent
                            .vars()
                            .iter()
                            .all(|n| self.param(n).is_some_and(|p| p.domain == ParamDomain::Integer))
                }
                _ => false,
            }
        };
        for s in self.equation.symbols() {
            if !declared(&s) {
                return Err(Error::InvalidSystem(format!("undeclared symbol {s}")));
            }
        }
        let mut time_terms = 0;
        for (m, _) in self.equation.terms() {
            let has_t = m.factors().iter().any(|(s, _)| matches!(s, Symbol::Jet(j) if j.orders[1] > 0));
            if !has_t {
                continue;
            }
            time_terms += 1;
            let ut = Symbol::jet(&self.field, 0, 1);
            let ok = m.factors().len() == 1 && m.factors()[0] == (ut, Exponent::Int(1));
            if !ok {
                return Err(Error::InvalidSystem(format!(
                    "equation is not in evolution form: time derivatives may only appear as a linear {}_t term",
                    self.field
                )));
            }
        }
        if time_terms != 1 {
            return Err(Error::InvalidSystem(format!(
                "equation is not in evolution form: expected one {}_t term, found {time_terms}",
                self.field
            )));
        }
        Ok(())
    }

    /// Deformation bindings as a name map.
    pub fn deformation_map(&self) -> BTreeMap<String, DeformValue> {
        self.deformation.iter().cloned().collect()
    }
}
