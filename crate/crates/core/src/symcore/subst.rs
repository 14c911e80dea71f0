//! Simultaneous substitution.

use std::collections::{BTreeMap, BTreeSet};

use super::diff::{differentiate, DiffMode};
use super::exponent::Exponent;
use super::expr::{Expr, Monomial};
use super::gauss::Coefficient;
use super::symbol::{Jet, Symbol, Var};
use super::SymError;

pub type Bindings<C> = BTreeMap<Symbol, Expr<C>>;

/// Exponent form of an expression built from integers and `ExpVar` symbols.
pub fn expr_to_exponent<C: Coefficient>(e: &Expr<C>) -> Result<Exponent, SymError> {
    let mut acc = Exponent::Int(0);
    for (m, c) in e.terms() {
        let n = (-10_000..=10_000)
            .find(|k| C::from_i64(*k) == *c)
            .ok_or_else(|| SymError::UnsupportedExponentForm(format!("non-integer exponent coefficient in {e}")))?;
        let mut t = Exponent::Int(n);
        for (s, d) in m.factors() {
            let (name, d) = match (s, d.as_int()) {
                (Symbol::ExpVar(name), Some(d)) if d > 0 => (name.clone(), d),
                _ => return Err(SymError::UnsupportedExponentForm(format!("cannot use {e} as an exponent"))),
            };
            for _ in 0..d {
                t = t * Exponent::var_named(name.clone());
            }
        }
        acc = acc + t;
    }
    Ok(acc)
}

fn check_acyclic<C: Coefficient>(b: &Bindings<C>) -> Result<(), SymError> {
    // edges s -> t when t is bound and occurs in the value bound to s
    let edges: BTreeMap<&Symbol, Vec<&Symbol>> = b
        .iter()
        .map(|(s, v)| {
            let is_identity = *v == Expr::symbol(s.clone());
            let targets = if is_identity {
                Vec::new()
            } else {
                b.keys().filter(|t| v.contains(t) || exponent_mentions(v, t)).collect()
            };
            (s, targets)
        })
        .collect();
    let mut done: BTreeSet<&Symbol> = BTreeSet::new();
    for start in b.keys() {
        let mut stack: Vec<(&Symbol, usize)> = vec![(start, 0)];
        let mut on_path: BTreeSet<&Symbol> = BTreeSet::from([start]);
        while let Some((node, idx)) = stack.pop() {
            if done.contains(node) {
                on_path.remove(node);
                continue;
            }
            let next = edges.get(node).and_then(|v| v.get(idx)).copied();
            match next {
                Some(t) => {
                    stack.push((node, idx + 1));
                    if on_path.contains(t) {
                        return Err(SymError::CyclicSubstitution(format!("{node} -> {t}")));
                    }
                    if !done.contains(t) {
                        on_path.insert(t);
                        stack.push((t, 0));
                    }
                }
                None => {
                    done.insert(node);
                    on_path.remove(node);
                }
            }
        }
    }
    Ok(())
}

fn exponent_mentions<C: Coefficient>(v: &Expr<C>, t: &Symbol) -> bool {
    match t {
        Symbol::ExpVar(name) => {
            v.terms().any(|(m, _)| m.factors().iter().any(|(_, e)| e.mentions(name)))
        }
        _ => false,
    }
}

/// Replaces every bound symbol simultaneously. Bindings of `ExpVar` symbols
/// also act inside exponents.
pub fn substitute<C: Coefficient>(e: &Expr<C>, bindings: &Bindings<C>) -> Result<Expr<C>, SymError> {
    if bindings.is_empty() {
        return Ok(e.clone());
    }
    check_acyclic(bindings)?;
    let mut exp_bindings: Vec<(String, Exponent)> = Vec::new();
    for (s, v) in bindings {
        if let Symbol::ExpVar(name) = s {
            exp_bindings.push((name.to_string(), expr_to_exponent(v)?));
        }
    }
    let subst_exp = |ex: &Exponent| -> Exponent {
        if !ex.is_symbolic() {
            return ex.clone();
        }
        // simultaneous: rename first, then bind
        let mut cur = ex.clone();
        for (k, (name, _)) in exp_bindings.iter().enumerate() {
            cur = cur.substitute(name, &Exponent::var(&format!("\u{0}{k}")));
        }
        for (k, (_, val)) in exp_bindings.iter().enumerate() {
            cur = cur.substitute(&format!("\u{0}{k}"), val);
        }
        cur
    };
    let mut cache: BTreeMap<(Symbol, Exponent), Expr<C>> = BTreeMap::new();
    let mut out = Expr::zero();
    for (m, c) in e.terms() {
        let mut keep: Vec<(Symbol, Exponent)> = Vec::new();
        let mut product = Expr::constant(c.clone());
        for (s, ex) in m.factors() {
            let ex = subst_exp(ex);
            match bindings.get(s) {
                Some(v) => {
                    let key = (s.clone(), ex.clone());
                    let p = match cache.get(&key) {
                        Some(p) => p.clone(),
                        None => {
                            let p = v.pow_exponent(&ex)?;
                            cache.insert(key, p.clone());
                            p
                        }
                    };
                    product = &product * &p;
                }
                None => {
                    let s = match s {
                        Symbol::Slot(slot) => {
                            let mut slot = slot.clone();
                            slot.exponent = subst_exp(&slot.exponent);
                            Symbol::Slot(slot)
                        }
                        other => other.clone(),
                    };
                    keep.push((s, ex));
                }
            }
        }
        let (km, ip) = Monomial::from_factors(keep);
        out = out + product.mul_monomial(&C::i_pow(ip), &km);
    }
    Ok(out)
}

/// Substitutes a field by an expression, including all of the field's jets
/// present in `e` (their values obtained by differentiating `value`).
pub fn substitute_field<C: Coefficient>(
    e: &Expr<C>,
    field: &str,
    value: &Expr<C>,
    mode: DiffMode,
) -> Result<Expr<C>, SymError> {
    let jets: Vec<Jet> = e
        .symbols()
        .into_iter()
        .filter_map(|s| match s {
            Symbol::Jet(j) if &*j.field == field => Some(j),
            _ => None,
        })
        .collect();
    let mut b = Bindings::new();
    for j in jets {
        let mut v = value.clone();
        for (k, var) in [Var::X, Var::T, Var::Z].into_iter().enumerate() {
            v = differentiate(&v, var, j.orders[k], mode)?;
        }
        b.insert(Symbol::Jet(j), v);
    }
    substitute(e, &b)
}
