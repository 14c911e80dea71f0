//! PT-symmetric deformation of derivative slots:
//! `∂ₓf → −i(i fₓ)^ε`, and `∂ₓⁿf → i^(ε−1) ∂ₓ^(n−1)(fₓ)^ε`.

use crate::frontend::{DeformValue, PDESystem};
use crate::symcore::{differentiate, Bindings, Coefficient, DiffMode, Exponent, Monomial, Slot, Symbol, Var};
use crate::{Error, Expr};

/// A deformed derivative: fully expanded for a concrete exponent, otherwise
/// the slot itself (leading-order data is read off from it).
#[derive(Clone, Debug, PartialEq)]
pub enum Deformed {
    Expanded(Expr),
    Symbolic(Slot),
}

impl Deformed {
    pub fn expanded(&self) -> Option<&Expr> {
        match self {
            Deformed::Expanded(e) => Some(e),
            Deformed::Symbolic(_) => None,
        }
    }
}

/// `−i(i fₓ)^ε`.
pub fn deform_first(field: &str, eps: &Exponent) -> Result<Deformed, Error> {
    deform_nth(field, 1, eps)
}

/// `i^(ε−1) ∂ₓ^(n−1)((fₓ)^ε)`; one deformation only, the remaining
/// derivatives are ordinary.
pub fn deform_nth(field: &str, n: u32, eps: &Exponent) -> Result<Deformed, Error> {
    if n == 0 {
        return Err(Error::UnsupportedDeformation("derivative order must be at least 1".into()));
    }
    let k = match eps.as_int() {
        Some(k) => k,
        None => return Ok(Deformed::Symbolic(Slot { field: field.into(), order: n, exponent: eps.clone() })),
    };
    if k <= 0 {
        return Err(Error::UnsupportedDeformation(format!("deformation exponent {k} must be positive")));
    }
    let inner = Expr::jet(field, 1, 0).pow(k)?;
    let d = differentiate(&inner, Var::X, n - 1, DiffMode::General)?;
    Ok(Deformed::Expanded(&Expr::symbol_pow(Symbol::Imag, Exponent::Int(k - 1)) * &d))
}

/// Replaces every slot with a concrete exponent by its expansion.
pub fn expand_slots(e: &Expr) -> Result<Expr, Error> {
    let mut b = Bindings::new();
    for s in e.symbols() {
        if let Symbol::Slot(sl) = &s {
            if let Deformed::Expanded(x) = deform_nth(&sl.field, sl.order, &sl.exponent)? {
                b.insert(s.clone(), x);
            }
        }
    }
    Ok(crate::symcore::substitute(e, &b)?)
}

/// Binds the deformation parameters (first two in declaration order, usually
/// ε and μ) and expands the slots that became concrete.
pub fn apply_deformation(template: &PDESystem, eps: DeformValue, mu: DeformValue) -> Result<PDESystem, Error> {
    let values = [eps, mu];
    if template.deformation.is_empty() {
        return Err(Error::SlotMismatch(format!("{} has no deformation slots", template.name)));
    }
    let mut b = Bindings::new();
    let mut deformation = template.deformation.clone();
    for (k, (name, current)) in deformation.iter_mut().enumerate() {
        let v = *values.get(k).unwrap_or(&DeformValue::Symbolic);
        match (*current, v) {
            (DeformValue::Int(a), DeformValue::Int(b)) if a != b => {
                return Err(Error::SlotMismatch(format!("{name} is already fixed to {a}")));
            }
            (_, DeformValue::Int(x)) => {
                if x <= 0 {
                    return Err(Error::UnsupportedDeformation(format!("{name} = {x} must be positive")));
                }
                b.insert(Symbol::exp_var(name), Expr::int(x));
                *current = DeformValue::Int(x);
            }
            _ => {}
        }
    }
    let bound = crate::symcore::substitute(&template.equation, &b)?;
    for s in bound.symbols() {
        if let Symbol::Slot(sl) = &s {
            if *sl.field != *template.field {
                return Err(Error::SlotMismatch(format!("slot {s} does not act on {}", template.field)));
            }
        }
    }
    let equation = expand_slots(&bound)?;
    Ok(PDESystem { equation, deformation, ..template.clone() })
}

/// Image under x → −x, t → −t, i → −i with u → u. Parameters are taken real.
pub fn pt_transform(e: &Expr) -> Result<Expr, Error> {
    if e.contains_where(|s| matches!(s, Symbol::Slot(_))) {
        return Err(Error::UnsupportedDeformation("PT image of an unexpanded slot".into()));
    }
    let mut out = Expr::zero();
    for (m, c) in e.conj().terms() {
        let mut sign = 1i64;
        for (s, ex) in m.factors() {
            let flips = match s {
                Symbol::Jet(j) => (j.orders[0] + j.orders[1]) as i64,
                Symbol::Var(Var::X | Var::T) => 1,
                Symbol::TimeFn { order, .. } => *order as i64 + 1,
                _ => 0,
            };
            if flips % 2 == 1 {
                let k = ex.as_int().ok_or_else(|| {
                    Error::UnsupportedDeformation(format!("sign of {s} raised to a symbolic power"))
                })?;
                if k % 2 != 0 {
                    sign = -sign;
                }
            }
        }
        out.add_term(c.clone() * crate::GaussRational::from_ints(sign, 0), m.clone());
    }
    Ok(out)
}

/// Whether `pt_transform(E)` equals `E` up to the overall constant fixed by
/// the time-derivative term.
pub fn is_pt_invariant(sys: &PDESystem) -> Result<bool, Error> {
    let e = &sys.equation;
    let image = pt_transform(e)?;
    let ut = Monomial::from_factors(vec![(Symbol::jet(&sys.field, 0, 1), Exponent::Int(1))]).0;
    let coeff = |x: &Expr| x.terms().find(|(m, _)| **m == ut).map(|(_, c)| c.clone());
    let (a, b) = match (coeff(e), coeff(&image)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(false),
    };
    let k = a * b.inverse().expect("nonzero");
    Ok(image.scale(&k) == *e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(d: Deformed) -> Expr {
        d.expanded().unwrap().clone()
    }

    #[test]
    fn first_order() {
        assert_eq!(ex(deform_first("u", &Exponent::Int(1)).unwrap()), Expr::jet("u", 1, 0));
        let two = &Expr::i() * &Expr::jet("u", 1, 0).pow(2).unwrap();
        assert_eq!(ex(deform_first("u", &Exponent::Int(2)).unwrap()), two);
        // −i·i³ = −1
        assert_eq!(ex(deform_first("u", &Exponent::Int(3)).unwrap()), -Expr::jet("u", 1, 0).pow(3).unwrap());
        assert!(matches!(deform_first("u", &Exponent::Int(0)), Err(Error::UnsupportedDeformation(_))));
        assert!(matches!(deform_first("u", &Exponent::var("eps")).unwrap(), Deformed::Symbolic(_)));
    }

    #[test]
    fn higher_orders() {
        let (ux, uxx, uxxx) = (Expr::jet("u", 1, 0), Expr::jet("u", 2, 0), Expr::jet("u", 3, 0));
        let two_i = Expr::constant(crate::GaussRational::from_ints(0, 2));
        assert_eq!(ex(deform_nth("u", 2, &Exponent::Int(2)).unwrap()), &two_i * &(&ux * &uxx));
        let expect = &two_i * &(&uxx.pow(2).unwrap() + &(&ux * &uxxx));
        assert_eq!(ex(deform_nth("u", 3, &Exponent::Int(2)).unwrap()), expect);
        assert_eq!(ex(deform_nth("u", 2, &Exponent::Int(1)).unwrap()), uxx);
    }
}
