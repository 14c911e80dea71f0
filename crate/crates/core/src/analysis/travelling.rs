//! Travelling-wave reduction u(x, t) = ζ(z), z = x − vt.

use crate::frontend::PDESystem;
use crate::symcore::{differentiate, substitute, Bindings, DiffMode, Exponent, Jet, Monomial, Symbol, Var};
use crate::{Error, Expr, GaussRational};

pub const ZETA: &str = "zeta";

pub fn zeta(k: u32) -> Expr {
    Expr::symbol(Symbol::Jet(Jet::z(ZETA, k)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct TravellingWaveODE {
    pub speed: Expr,
    /// Expression in ζ and its z-derivatives that must vanish.
    pub ode: Expr,
    pub order: u32,
    /// ODE = factor · d/dz(potential) when it integrates once.
    pub integrated: Option<Integrated>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Integrated {
    pub factor: Expr,
    /// Includes the integration constant `c`.
    pub potential: Expr,
}

/// u_{a,b} → (−v)^b ζ^(a+b).
pub fn reduce_travelling(system: &PDESystem, speed: &Expr) -> Result<TravellingWaveODE, Error> {
    if system.has_slots() {
        return Err(Error::Unsupported("travelling-wave reduction needs a concrete deformation".into()));
    }
    let mut b = Bindings::new();
    let mut order = 0;
    for s in system.equation.symbols() {
        if let Symbol::Jet(j) = &s {
            if *j.field == *system.field {
                let (a, t) = (j.orders[0], j.orders[1]);
                order = order.max(a + t);
                b.insert(s.clone(), &(-speed.clone()).pow(t as i64)? * &zeta(a + t));
            }
        }
        if matches!(s, Symbol::Var(_)) {
            return Err(Error::Unsupported("explicit x or t dependence".into()));
        }
    }
    let ode = substitute(&system.equation, &b)?;
    let integrated = integrate_once(&ode)?;
    Ok(TravellingWaveODE { speed: speed.clone(), ode, order, integrated })
}

fn zeta_order(s: &Symbol) -> Option<u32> {
    match s {
        Symbol::Jet(j) if &*j.field == ZETA => Some(j.orders[2]),
        _ => None,
    }
}

/// Inverse total z-derivative of an expression whose highest jet enters
/// linearly, if it exists.
pub fn antiderivative(e: &Expr) -> Result<Option<Expr>, Error> {
    let mut rest = e.clone();
    let mut acc = Expr::zero();
    for _ in 0..64 {
        if rest.is_zero() {
            return Ok(Some(acc));
        }
        let top = rest.symbols().iter().filter_map(zeta_order).max();
        let Some(k) = top else {
            // constants integrate to c·z
            return Ok(Some(acc + &rest * &Expr::symbol(Symbol::Var(Var::Z))));
        };
        if k == 0 {
            return Ok(None);
        }
        let hi = Symbol::Jet(Jet::z(ZETA, k));
        let lo = Symbol::Jet(Jet::z(ZETA, k - 1));
        let parts = rest.by_power_of(&hi);
        if parts.keys().any(|p| *p != Exponent::Int(0) && *p != Exponent::Int(1)) {
            return Ok(None);
        }
        let a = parts.get(&Exponent::Int(1)).cloned().unwrap_or_default();
        let mut piece = Expr::zero();
        for (m, c) in a.terms() {
            let p = m.exponent_of(&lo).as_int().ok_or_else(|| Error::Unsupported("symbolic power".into()))?;
            if p == -1 {
                return Ok(None);
            }
            let (mono, ip) = m.mul(&Monomial::from_factors(vec![(lo.clone(), Exponent::Int(1))]).0);
            let c = c.clone() * GaussRational::from_ints(1, 0).scale(&num_rational::BigRational::new(1.into(), (p + 1).into()));
            piece.add_term(c * crate::symcore::Coefficient::i_pow(ip), mono);
        }
        acc = acc + piece.clone();
        rest = rest - differentiate(&piece, Var::Z, 1, DiffMode::Reduced)?;
    }
    Ok(None)
}

/// Divides out the common ζ-jet content and integrates the rest once.
pub fn integrate_once(ode: &Expr) -> Result<Option<Integrated>, Error> {
    let content = ode.monomial_content();
    let factors: Vec<(Symbol, Exponent)> =
        content.factors().iter().filter(|(s, _)| zeta_order(s).is_some()).cloned().collect();
    let (fm, _) = Monomial::from_factors(factors);
    let factor = Expr::term(GaussRational::from_ints(1, 0), fm);
    let reduced = ode * &factor.inverse()?;
    Ok(antiderivative(&reduced)?.map(|p| Integrated { factor, potential: p + Expr::param("c") }))
}

/// Highest-derivative form ζ^(k) = −B/A of `A ζ^(k) + B = 0`.
pub fn solve_highest(ode: &Expr, order: u32) -> Result<(Expr, Expr), Error> {
    let hi = Symbol::Jet(Jet::z(ZETA, order));
    let parts = ode.by_power_of(&hi);
    if parts.keys().any(|p| *p != Exponent::Int(0) && *p != Exponent::Int(1)) {
        return Err(Error::Unsupported("ODE is nonlinear in its highest derivative".into()));
    }
    Ok((parts.get(&Exponent::Int(1)).cloned().unwrap_or_default(), parts.get(&Exponent::Int(0)).cloned().unwrap_or_default()))
}
