//! Grouping of an expression by powers of the singular manifold φ.

use std::collections::BTreeMap;

use super::exponent::Exponent;
use super::expr::Expr;
use super::gauss::Coefficient;
use super::symbol::Symbol;
use super::SymError;

/// Partition of an expression by the exponent of φ. The parts carry no φ
/// factor; `sum()` restores the input.
#[derive(Clone, Debug, PartialEq)]
pub struct PhiPowers<C: Coefficient> {
    phi: Symbol,
    parts: BTreeMap<Exponent, Expr<C>>,
}

impl<C: Coefficient> PhiPowers<C> {
    pub fn parts(&self) -> &BTreeMap<Exponent, Expr<C>> {
        &self.parts
    }

    pub fn exponents(&self) -> Vec<Exponent> {
        self.parts.keys().cloned().collect()
    }

    pub fn get(&self, e: &Exponent) -> Option<&Expr<C>> {
        self.parts.get(e)
    }

    /// Coefficient of φ^k for integer k (zero when absent).
    pub fn at(&self, k: i64) -> Expr<C> {
        self.parts.get(&Exponent::Int(k)).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn sum(&self) -> Expr<C> {
        let mut acc = Expr::zero();
        for (e, part) in &self.parts {
            acc = acc + part * &Expr::symbol_pow(self.phi.clone(), e.clone());
        }
        acc
    }

    /// The most singular exponent. All exponents must differ by integers.
    pub fn leading(&self) -> Result<Option<(Exponent, Expr<C>)>, SymError> {
        let mut best: Option<&Exponent> = None;
        for e in self.parts.keys() {
            best = match best {
                None => Some(e),
                Some(b) => match (e.clone() - b.clone()).as_int() {
                    Some(d) if d < 0 => Some(e),
                    Some(_) => Some(b),
                    None => return Err(SymError::AmbiguousOrdering(format!("φ^({e}) versus φ^({b})"))),
                },
            };
        }
        Ok(best.map(|b| (b.clone(), self.parts[b].clone())))
    }
}

/// Splits `e` by the exponent of `phi` (the undifferentiated jet `phi`).
pub fn collect_phi_powers<C: Coefficient>(e: &Expr<C>) -> PhiPowers<C> {
    collect_powers_of(e, &Symbol::jet("phi", 0, 0))
}

pub fn collect_powers_of<C: Coefficient>(e: &Expr<C>, phi: &Symbol) -> PhiPowers<C> {
    PhiPowers { phi: phi.clone(), parts: e.by_power_of(phi) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::GaussRational;

    type E = Expr<GaussRational>;

    #[test]
    fn splits_and_restores() {
        let phi = Symbol::jet("phi", 0, 0);
        let e = &(&E::symbol(Symbol::coef(0)) * &E::symbol_pow(phi.clone(), Exponent::Int(-1)))
            + &E::symbol(Symbol::coef(1));
        let p = collect_phi_powers(&e);
        assert_eq!(p.at(-1), E::symbol(Symbol::coef(0)));
        assert_eq!(p.at(0), E::symbol(Symbol::coef(1)));
        assert_eq!(p.sum(), e);
        assert_eq!(p.leading().unwrap().unwrap().0, Exponent::Int(-1));
    }

    #[test]
    fn incomparable_exponents() {
        let phi = Symbol::jet("phi", 0, 0);
        let a = Exponent::var("alpha");
        let e = E::symbol_pow(phi.clone(), a.clone() - Exponent::Int(1))
            + E::symbol_pow(phi.clone(), a.clone() * Exponent::var("eps"));
        assert!(matches!(collect_phi_powers(&e).leading(), Err(SymError::AmbiguousOrdering(_))));
        let e = E::symbol_pow(phi.clone(), a.clone() - Exponent::Int(1)) + E::symbol_pow(phi, a.clone());
        assert_eq!(collect_phi_powers(&e).leading().unwrap().unwrap().0, a - Exponent::Int(1));
    }
}
