//! Independent check of an expansion: substitute the truncated series into
//! the full equation and confirm that every order up to the truncation
//! vanishes.

use super::series::{reduce_phi, PainleveExpansion};
use crate::frontend::PDESystem;
use crate::symcore::{collect_phi_powers, substitute_field};
use crate::{Error, Expr};

#[derive(Clone, Debug, PartialEq)]
pub struct ResidualReport {
    /// Powers of φ checked, from the dominant order up to lead + N.
    pub checked: std::ops::RangeInclusive<i64>,
    /// Orders in that range with a nonzero coefficient.
    pub nonzero: Vec<(i64, Expr)>,
}

impl ResidualReport {
    pub fn vanishes(&self) -> bool {
        self.nonzero.is_empty()
    }
}

pub fn residual_check(system: &PDESystem, exp: &PainleveExpansion) -> Result<ResidualReport, Error> {
    let u = exp.truncated();
    let sub = substitute_field(&system.equation, &system.field, &u, exp.ansatz.diff_mode())?;
    let sub = reduce_phi(&sub, exp.ansatz)?;
    let powers = collect_phi_powers(&sub);
    let top = exp.lead + exp.coefficients.len() as i64 - 1;
    let mut nonzero = Vec::new();
    for k in exp.lead..=top {
        let c = powers.at(k);
        if !c.is_zero() {
            nonzero.push((k, c));
        }
    }
    // nothing may sit below the dominant order
    for e in powers.exponents() {
        match e.as_int() {
            Some(k) if k < exp.lead => nonzero.push((k, powers.at(k))),
            Some(_) => {}
            None => return Err(Error::InternalInvariantViolation(format!("symbolic power {e} in the residual"))),
        }
    }
    Ok(ResidualReport { checked: exp.lead..=top, nonzero })
}
