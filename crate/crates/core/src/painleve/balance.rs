//! Dominant balances u ≈ λ₀φ^α.

use std::fmt;

use num_integer::Integer;

use super::leading::{expand_w, shapes, solve_lambda0, strip_symbolic_content, TermShape, ALPHA};
use crate::frontend::PDESystem;
use crate::symcore::{substitute, Bindings, Exponent, Name, Symbol};
use crate::{Error, Expr};

/// Deepest pole order tried when the deformation exponents are symbolic.
pub const ALPHA_DEPTH: i64 = 16;

/// A relation between deformation exponents, `var = value`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    pub var: String,
    pub value: Exponent,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = match self.value.monomials().as_slice() {
            [(m, 1)] if m.len() == 1 && m[0].1 == 1 => Some(m[0].0.to_string()),
            _ => None,
        };
        match single {
            Some(other) => {
                let (a, b) = if other < self.var { (other, self.var.clone()) } else { (self.var.clone(), other) };
                write!(f, "{a} = {b}")
            }
            None => write!(f, "{} = {}", self.var, self.value),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Balance {
    pub alpha: i64,
    /// α as a function of the deformation exponents, before the constraint.
    pub alpha_formula: String,
    pub constraints: Vec<Constraint>,
    /// Power of φ shared by the dominant terms.
    pub leading_exponent: Exponent,
    /// The equation with the constraints applied.
    pub equation: Expr,
    pub terms: Vec<Expr>,
    pub lambda0: Expr,
}

impl Balance {
    pub fn constraint_bindings(&self) -> Bindings<crate::GaussRational> {
        constraint_bindings(&self.constraints)
    }

    /// Field-carrying shapes of the dominant terms.
    pub fn shapes(&self, field: &str) -> Result<Vec<TermShape>, Error> {
        let mut out = Vec::new();
        for t in &self.terms {
            out.extend(shapes(t, field)?);
        }
        Ok(out)
    }
}

fn constraint_bindings(cs: &[Constraint]) -> Bindings<crate::GaussRational> {
    cs.iter().map(|c| (Symbol::exp_var(&c.var), Expr::from_exponent(&c.value))).collect()
}

fn apply(e: &Exponent, cs: &[Constraint]) -> Exponent {
    cs.iter().fold(e.clone(), |acc, c| acc.substitute(&c.var, &c.value))
}

/// Sign of a polynomial for all variable values ≥ 1: `Some(true)` strictly
/// positive or zero only at the boundary, `Some(false)` identically zero,
/// `None` if negativity cannot be excluded.
fn nonneg_for_positive_vars(d: &Exponent) -> Option<bool> {
    if let Some(k) = d.as_int() {
        return match k.cmp(&0) {
            std::cmp::Ordering::Greater => Some(true),
            std::cmp::Ordering::Equal => Some(false),
            std::cmp::Ordering::Less => None,
        };
    }
    let mut at_one = 0i64;
    for (m, c) in d.monomials() {
        if !m.is_empty() && c < 0 {
            return None;
        }
        at_one += c;
    }
    (at_one >= 0).then_some(true)
}

/// Solves `diff = 0` (linear in the deformation variables) for one variable.
fn solve_constraint(diff: &Exponent) -> Option<Constraint> {
    let mut c0 = 0i64;
    let mut lin: Vec<(Name, i64)> = Vec::new();
    for (m, c) in diff.monomials() {
        match m.as_slice() {
            [] => c0 = c,
            [(n, 1)] => lin.push((n.clone(), c)),
            _ => return None,
        }
    }
    let g = lin.iter().fold(0i64, |g, (_, c)| g.gcd(c));
    if g == 0 || c0 % g != 0 {
        return None;
    }
    let c0 = c0 / g;
    let lin: Vec<(Name, i64)> = lin.into_iter().map(|(n, c)| (n, c / g)).collect();
    let k = lin.iter().rposition(|(_, c)| c.abs() == 1)?;
    let (var, cv) = lin[k].clone();
    let mut rest = Exponent::Int(c0);
    for (o, (n, c)) in lin.iter().enumerate() {
        if o != k {
            rest = rest + Exponent::var_named(n.clone()).scale(*c);
        }
    }
    let value = rest.scale(-cv);
    if matches!(value.as_int(), Some(v) if v < 1) {
        return None;
    }
    Some(Constraint { var: var.to_string(), value })
}

fn formula(ei: &Exponent, ej: &Exponent) -> String {
    let (Some((ai, bi)), Some((aj, bj))) = (ei.linear_in(ALPHA), ej.linear_in(ALPHA)) else {
        return "?".into();
    };
    let (mut num, mut den) = (bj - bi, ai - aj);
    let first_sign = den.monomials().iter().find(|(m, _)| !m.is_empty()).map(|(_, c)| *c).unwrap_or(0);
    if first_sign < 0 || matches!(den.as_int(), Some(d) if d < 0) {
        num = -num;
        den = -den;
    }
    match (num.as_int(), den.as_int()) {
        (Some(n), Some(d)) if d != 0 && n % d == 0 => (n / d).to_string(),
        (Some(n), Some(d)) => format!("{n}/{d}"),
        _ => {
            let wrap = |e: &Exponent| if e.is_symbolic() { format!("({e})") } else { e.to_string() };
            format!("{}/{}", wrap(&num), wrap(&den))
        }
    }
}

/// All admissible dominant balances with negative integer α.
///
/// With symbolic deformation exponents, α = −1, …, −ALPHA_DEPTH is tried
/// and each pairwise balance may impose one linear integer relation among
/// the exponents; the remaining terms must then be subdominant for every
/// admissible value (exponents ≥ 1).
pub fn dominant_balance(system: &PDESystem) -> Result<Vec<Balance>, Error> {
    let sh = shapes(&system.equation, &system.field)?;
    let a = Exponent::var(ALPHA);
    let exps: Vec<Exponent> = sh.iter().map(|s| s.exponent(&a)).collect();
    let symbolic = exps.iter().any(|e| e.vars().iter().any(|v| &**v != ALPHA));

    let mut candidates: Vec<(i64, Vec<Constraint>, usize, usize)> = Vec::new();
    for i in 0..exps.len() {
        for j in i + 1..exps.len() {
            if !symbolic {
                let (Some((ai, bi)), Some((aj, bj))) = (exps[i].linear_in(ALPHA), exps[j].linear_in(ALPHA)) else {
                    continue;
                };
                let (ai, bi, aj, bj) = (ai.as_int(), bi.as_int(), aj.as_int(), bj.as_int());
                let (Some(ai), Some(bi), Some(aj), Some(bj)) = (ai, bi, aj, bj) else { continue };
                if ai == aj || (bj - bi) % (ai - aj) != 0 {
                    continue;
                }
                let alpha = (bj - bi) / (ai - aj);
                if alpha < 0 {
                    candidates.push((alpha, Vec::new(), i, j));
                }
                continue;
            }
            for k in 1..=ALPHA_DEPTH {
                let at = |e: &Exponent| e.substitute(ALPHA, &Exponent::Int(-k));
                let diff = at(&exps[i]) - at(&exps[j]);
                if diff.is_zero() {
                    candidates.push((-k, Vec::new(), i, j));
                } else if let Some(c) = solve_constraint(&diff) {
                    candidates.push((-k, vec![c], i, j));
                }
            }
        }
    }

    let mut out: Vec<Balance> = Vec::new();
    let mut seen: Vec<(i64, Vec<Constraint>)> = Vec::new();
    for (alpha, cs, i, j) in candidates {
        if seen.contains(&(alpha, cs.clone())) {
            continue;
        }
        let at = |e: &Exponent| apply(&e.substitute(ALPHA, &Exponent::Int(alpha)), &cs);
        let base = at(&exps[i]);
        let mut members = 0usize;
        let mut dominant = true;
        for e in &exps {
            match nonneg_for_positive_vars(&(at(e) - base.clone())) {
                Some(false) => members += 1,
                Some(true) => {}
                None => {
                    dominant = false;
                    break;
                }
            }
        }
        if !dominant || members < 2 || !(sh[i].involves_field() || sh[j].involves_field()) {
            continue;
        }
        seen.push((alpha, cs.clone()));

        let equation = substitute(&system.equation, &constraint_bindings(&cs))?;
        let mut terms = Vec::new();
        let mut lead_sum = Expr::zero();
        for (m, c) in equation.terms() {
            let s = TermShape::new(m, c, &system.field)?;
            let e = apply(&s.exponent(&Exponent::Int(alpha)), &cs);
            if (e - base.clone()).is_zero() {
                terms.push(Expr::term(c.clone(), m.clone()));
                lead_sum = lead_sum + s.leading(alpha)?;
            }
        }
        if lead_sum.is_zero() {
            continue;
        }
        let poly = expand_w(&strip_symbolic_content(&lead_sum)?, alpha)?;
        for lambda0 in solve_lambda0(&poly)? {
            out.push(Balance {
                alpha,
                alpha_formula: formula(&exps[i], &exps[j]),
                constraints: cs.clone(),
                leading_exponent: base.clone(),
                equation: equation.clone(),
                terms: terms.clone(),
                lambda0,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_display() {
        let c = Constraint { var: "mu".into(), value: Exponent::var("eps") };
        assert_eq!(c.to_string(), "eps = mu");
        let c = Constraint { var: "mu".into(), value: Exponent::Int(3) };
        assert_eq!(c.to_string(), "mu = 3");
    }

    #[test]
    fn diophantine_constraints() {
        // 2(mu - eps) = 0 -> mu = eps
        let d = (Exponent::var("mu") - Exponent::var("eps")).scale(2);
        assert_eq!(solve_constraint(&d).unwrap().value, Exponent::var("eps"));
        // 2 eps - 2 mu = 1 has no integer solution
        let d = (Exponent::var("eps") - Exponent::var("mu")).scale(2) - Exponent::Int(1);
        assert!(solve_constraint(&d).is_none());
        // eps + 3 = 0 has no positive solution
        assert!(solve_constraint(&(Exponent::var("eps") + Exponent::Int(3))).is_none());
    }

    #[test]
    fn dominance_sign() {
        assert_eq!(nonneg_for_positive_vars(&Exponent::Int(0)), Some(false));
        assert_eq!(nonneg_for_positive_vars(&(Exponent::var("eps").scale(2) - Exponent::Int(1))), Some(true));
        assert_eq!(nonneg_for_positive_vars(&(Exponent::Int(1) - Exponent::var("eps"))), None);
    }
}
