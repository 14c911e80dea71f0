//! Total derivatives driven by symbol kind.

use serde::{Deserialize, Serialize};

use super::exponent::Exponent;
use super::expr::{Expr, Monomial};
use super::gauss::Coefficient;
use super::symbol::{Slot, Symbol, Var};
use super::SymError;

/// Whether expansion coefficients λ_k depend on x.
///
/// `General`: λ_k(x, t) with arbitrary singular manifold φ.
/// `Reduced`: λ_k(t) only, used together with φ = x − ξ(t).
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum DiffMode {
    #[default]
    General,
    Reduced,
}

fn symbol_derivative<C: Coefficient>(s: &Symbol, v: Var, mode: DiffMode) -> Result<Option<Expr<C>>, SymError> {
    Ok(match s {
        Symbol::Imag | Symbol::Param(_) | Symbol::ExpVar(_) | Symbol::Probe | Symbol::Aux(_) => None,
        Symbol::Var(w) => (*w == v).then(Expr::one),
        Symbol::TimeFn { name, order } => (v == Var::T).then(|| {
            Expr::symbol(Symbol::TimeFn { name: name.clone(), order: order + 1 })
        }),
        Symbol::Jet(j) => Some(Expr::symbol(Symbol::Jet(j.derived(v)))),
        Symbol::Coef { index, dx, dt } => match (v, mode) {
            (Var::X, DiffMode::General) => Some(Expr::symbol(Symbol::Coef { index: *index, dx: dx + 1, dt: *dt })),
            (Var::T, _) => Some(Expr::symbol(Symbol::Coef { index: *index, dx: *dx, dt: dt + 1 })),
            _ => None,
        },
        Symbol::Slot(slot) => match v {
            Var::X => Some(Expr::symbol(Symbol::Slot(Slot {
                field: slot.field.clone(),
                order: slot.order + 1,
                exponent: slot.exponent.clone(),
            }))),
            _ => {
                return Err(SymError::UnsupportedDerivative(format!(
                    "deformed slot {s} has no {} derivative",
                    v.name()
                )))
            }
        },
    })
}

fn derivative_once<C: Coefficient>(e: &Expr<C>, v: Var, mode: DiffMode) -> Result<Expr<C>, SymError> {
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        let factors = m.factors();
        for (k, (s, ex)) in factors.iter().enumerate() {
            let ds = match symbol_derivative::<C>(s, v, mode)? {
                Some(d) => d,
                None => continue,
            };
            let mut rest: Vec<(Symbol, Exponent)> = factors.to_vec();
            rest[k].1 = ex.clone() - Exponent::Int(1);
            let (rm, ip) = Monomial::from_factors(rest);
            let lead = Expr::from_exponent(ex).scale(&(c.clone() * C::i_pow(ip)));
            out = out + (&lead * &ds).mul_monomial(&C::one(), &rm);
        }
    }
    Ok(out)
}

/// n-th total derivative with respect to `v`.
pub fn differentiate<C: Coefficient>(e: &Expr<C>, v: Var, n: u32, mode: DiffMode) -> Result<Expr<C>, SymError> {
    let mut cur = e.clone();
    for _ in 0..n {
        cur = derivative_once(&cur, v, mode)?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symcore::GaussRational;

    type E = Expr<GaussRational>;

    #[test]
    fn power_rule_on_phi() {
        let phi = E::jet("phi", 0, 0);
        let d = differentiate(&phi.pow(2).unwrap(), Var::X, 1, DiffMode::General).unwrap();
        assert_eq!(d, &(&E::int(2) * &phi) * &E::jet("phi", 1, 0));
    }

    #[test]
    fn square_of_slope() {
        let ux = E::jet("u", 1, 0);
        let d1 = differentiate(&ux.pow(2).unwrap(), Var::X, 1, DiffMode::General).unwrap();
        assert_eq!(d1, &(&E::int(2) * &ux) * &E::jet("u", 2, 0));
        let d2 = differentiate(&ux.pow(2).unwrap(), Var::X, 2, DiffMode::General).unwrap();
        let expect = &(&E::int(2) * &E::jet("u", 2, 0).pow(2).unwrap()) + &(&(&E::int(2) * &ux) * &E::jet("u", 3, 0));
        assert_eq!(d2, expect);
    }

    #[test]
    fn symbolic_exponent_brings_down_polynomial() {
        // d/dx phi^(r-1) = (r-1) phi^(r-2) phi_x
        let e = Exponent::var("r") - Exponent::Int(1);
        let p = E::symbol_pow(Symbol::jet("phi", 0, 0), e.clone());
        let d = differentiate(&p, Var::X, 1, DiffMode::General).unwrap();
        let expect = &(&E::from_exponent(&e) * &E::symbol_pow(Symbol::jet("phi", 0, 0), e - Exponent::Int(1)))
            * &E::jet("phi", 1, 0);
        assert_eq!(d, expect);
    }

    #[test]
    fn mode_controls_coefficients() {
        let lam = E::symbol(Symbol::coef(3));
        assert!(differentiate(&lam, Var::X, 1, DiffMode::Reduced).unwrap().is_zero());
        assert_eq!(
            differentiate(&lam, Var::X, 1, DiffMode::General).unwrap(),
            E::symbol(Symbol::Coef { index: 3, dx: 1, dt: 0 })
        );
        let xi = E::symbol(Symbol::time_fn("xi", 1));
        assert_eq!(differentiate(&xi, Var::T, 2, DiffMode::Reduced).unwrap(), E::symbol(Symbol::time_fn("xi", 3)));
        assert!(differentiate(&xi, Var::X, 1, DiffMode::Reduced).unwrap().is_zero());
    }
}
