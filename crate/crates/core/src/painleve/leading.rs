//! Leading-order data of single equation terms under u ≈ λ₀φ^α, and their
//! linear response to a probe ϑφ^(r+α).
//!
//! A deformed slot `Dn(u; e)` leads as
//! `i^(e−1) W^e ff(e(α−1), n−1) φₓ^(n−1) φ^(e(α−1)−(n−1))` with
//! `W = λ₀αφₓ`; W is kept as an opaque symbol until its exponents are
//! integers.

use std::collections::BTreeMap;

use crate::symcore::{substitute, Bindings, Exponent, GaussRational, Monomial, Slot, SymError, Symbol};
use crate::{Error, Expr};

pub const ALPHA: &str = "alpha";
pub const RES: &str = "r";

pub fn w_symbol() -> Symbol {
    Symbol::Aux("W".into())
}

pub fn lambda0() -> Symbol {
    Symbol::coef(0)
}

pub fn phi_x() -> Expr {
    Expr::jet("phi", 1, 0)
}

pub fn phi_t() -> Expr {
    Expr::jet("phi", 0, 1)
}

/// Falling factorial a(a−1)…(a−m+1) as an expression.
pub fn falling(a: &Exponent, m: u32) -> Expr {
    let mut acc = Expr::one();
    for q in 0..m as i64 {
        acc = &acc * &Expr::from_exponent(&(a.clone() - Exponent::Int(q)));
    }
    acc
}

/// A monomial of the equation split into field factors and the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct TermShape {
    pub coeff: GaussRational,
    /// Factors independent of the field (parameters, symbolic powers of i, …).
    pub rest: Monomial,
    /// `(dx, dt) → power` for the field jets.
    pub jets: BTreeMap<(u32, u32), i64>,
    pub slots: Vec<(Slot, i64)>,
}

impl TermShape {
    pub fn new(m: &Monomial, c: &GaussRational, field: &str) -> Result<Self, Error> {
        let mut jets = BTreeMap::new();
        let mut slots = Vec::new();
        let mut rest = Vec::new();
        for (s, e) in m.factors() {
            let power = || {
                e.as_int().filter(|k| *k > 0).ok_or_else(|| {
                    Error::Unsupported(format!("field factor {s} must carry a positive integer power, found {e}"))
                })
            };
            match s {
                Symbol::Jet(j) if *j.field == *field => {
                    *jets.entry((j.orders[0], j.orders[1])).or_insert(0) += power()?;
                }
                Symbol::Slot(sl) if *sl.field == *field => slots.push((sl.clone(), power()?)),
                Symbol::Var(_) | Symbol::Jet(_) | Symbol::TimeFn { .. } => {
                    return Err(Error::Unsupported(format!("explicit dependence on {s} in the equation")));
                }
                _ => rest.push((s.clone(), e.clone())),
            }
        }
        let (rest, ip) = Monomial::from_factors(rest);
        let coeff = c.clone() * <GaussRational as crate::symcore::Coefficient>::i_pow(ip);
        Ok(Self { coeff, rest, jets, slots })
    }

    pub fn prefactor(&self) -> Expr {
        Expr::term(self.coeff.clone(), self.rest.clone())
    }

    pub fn involves_field(&self) -> bool {
        !self.jets.is_empty() || !self.slots.is_empty()
    }

    /// φ-exponent of the leading contribution, as a polynomial in α and the
    /// deformation exponents.
    pub fn exponent(&self, alpha: &Exponent) -> Exponent {
        let mut e = Exponent::Int(0);
        for ((dx, dt), k) in &self.jets {
            e = e + (alpha.clone() - Exponent::Int((dx + dt) as i64)).scale(*k);
        }
        for (sl, k) in &self.slots {
            let x = sl.exponent.clone() * (alpha.clone() - Exponent::Int(1)) - Exponent::Int(sl.order as i64 - 1);
            e = e + x.scale(*k);
        }
        e
    }

    /// Whether an x-only model term carries time derivatives.
    pub fn has_time_derivative(&self) -> bool {
        self.jets.keys().any(|(_, dt)| *dt > 0)
    }

    fn jet_lead(dx: u32, dt: u32, alpha: i64) -> Expr {
        let ff = falling(&Exponent::Int(alpha), dx + dt);
        &(&(&Expr::symbol(lambda0()) * &ff) * &phi_x().pow(dx as i64).unwrap()) * &phi_t().pow(dt as i64).unwrap()
    }

    fn jet_probe(dx: u32, dt: u32, alpha: i64) -> Expr {
        let a = Exponent::var(RES) + Exponent::Int(alpha);
        &(&falling(&a, dx + dt) * &phi_x().pow(dx as i64).unwrap()) * &phi_t().pow(dt as i64).unwrap()
    }

    fn slot_lead(sl: &Slot, alpha: i64) -> Result<Expr, Error> {
        let e = &sl.exponent;
        let i_part = Expr::symbol_pow(Symbol::Imag, e.clone() - Exponent::Int(1));
        let w = Expr::symbol_pow(w_symbol(), e.clone());
        let ff = falling(&(e.clone() * Exponent::Int(alpha - 1)), sl.order - 1);
        Ok(&(&(&i_part * &w) * &ff) * &phi_x().pow(sl.order as i64 - 1)?)
    }

    fn slot_probe(sl: &Slot, alpha: i64) -> Result<Expr, Error> {
        let e = &sl.exponent;
        let i_part = Expr::symbol_pow(Symbol::Imag, e.clone() - Exponent::Int(1));
        let w = Expr::symbol_pow(w_symbol(), e.clone() - Exponent::Int(1));
        let shift = Exponent::var(RES) + Exponent::Int(alpha);
        let ff = falling(&(e.clone() * Exponent::Int(alpha - 1) + Exponent::var(RES)), sl.order - 1);
        let lin = &Expr::from_exponent(e) * &Expr::from_exponent(&shift);
        Ok(&(&(&(&i_part * &w) * &lin) * &ff) * &phi_x().pow(sl.order as i64)?)
    }

    /// Coefficient of the leading power of φ (including the prefactor).
    pub fn leading(&self, alpha: i64) -> Result<Expr, Error> {
        let mut acc = self.prefactor();
        for ((dx, dt), k) in &self.jets {
            acc = &acc * &Self::jet_lead(*dx, *dt, alpha).pow(*k)?;
        }
        for (sl, k) in &self.slots {
            acc = &acc * &Self::slot_lead(sl, alpha)?.pow(*k)?;
        }
        Ok(acc)
    }

    /// Coefficient of ϑ·φ^(leading exponent + r) in the response to the probe.
    pub fn probe(&self, alpha: i64) -> Result<Expr, Error> {
        let mut leads: Vec<(Expr, Expr, i64)> = Vec::new();
        for ((dx, dt), k) in &self.jets {
            leads.push((Self::jet_lead(*dx, *dt, alpha), Self::jet_probe(*dx, *dt, alpha), *k));
        }
        for (sl, k) in &self.slots {
            leads.push((Self::slot_lead(sl, alpha)?, Self::slot_probe(sl, alpha)?, *k));
        }
        let mut total = Expr::zero();
        for (idx, (l, d, k)) in leads.iter().enumerate() {
            let mut part = &(&Expr::int(*k) * &l.pow(k - 1)?) * d;
            for (o, (lo, _, ko)) in leads.iter().enumerate() {
                if o != idx {
                    part = &part * &lo.pow(*ko)?;
                }
            }
            total = total + part;
        }
        Ok(&total * &self.prefactor())
    }
}

/// Splits an equation into term shapes.
pub fn shapes(e: &Expr, field: &str) -> Result<Vec<TermShape>, Error> {
    e.terms().map(|(m, c)| TermShape::new(m, c, field)).collect()
}

/// Divides out the common power of every symbol that carries symbolic
/// exponents (W, i, …); the remaining exponents must differ by integers.
pub fn strip_symbolic_content(e: &Expr) -> Result<Expr, SymError> {
    let mut syms: Vec<Symbol> = Vec::new();
    for (m, _) in e.terms() {
        for (s, x) in m.factors() {
            if x.is_symbolic() && !syms.contains(s) {
                syms.push(s.clone());
            }
        }
    }
    let mut cur = e.clone();
    for s in syms {
        let exps: Vec<Exponent> = cur.terms().map(|(m, _)| m.exponent_of(&s)).collect();
        let base = exps[0].clone();
        let mut min = 0i64;
        for x in &exps {
            let d = (x.clone() - base.clone())
                .as_int()
                .ok_or_else(|| SymError::AmbiguousOrdering(format!("powers {x} and {base} of {s}")))?;
            min = min.min(d);
        }
        let divisor = base + Exponent::Int(min);
        let inv = Expr::symbol_pow(s.clone(), -divisor);
        cur = &cur * &inv;
    }
    Ok(cur)
}

/// Replaces W by λ₀αφₓ (W must only carry integer powers).
pub fn expand_w(e: &Expr, alpha: i64) -> Result<Expr, Error> {
    let mut b = Bindings::new();
    b.insert(w_symbol(), &(&Expr::symbol(lambda0()) * &Expr::int(alpha)) * &phi_x());
    Ok(substitute(e, &b)?)
}

/// Removes the monomial content, ignoring the symbols accepted by `keep`.
pub fn strip_content(e: &Expr, keep: impl Fn(&Symbol) -> bool) -> Result<Expr, Error> {
    let content = e.monomial_content();
    let factors: Vec<(Symbol, Exponent)> =
        content.factors().iter().filter(|(s, _)| !keep(s)).map(|(s, x)| (s.clone(), -x.clone())).collect();
    let (inv, ip) = Monomial::from_factors(factors);
    Ok(e.mul_monomial(&<GaussRational as crate::symcore::Coefficient>::i_pow(ip), &inv))
}

/// Nonzero roots of the leading-order polynomial in λ₀ (linear after
/// removing the λ₀ = 0 root; higher degrees are reported as unsupported).
pub fn solve_lambda0(poly: &Expr) -> Result<Vec<Expr>, Error> {
    let by = poly.by_power_of(&lambda0());
    let powers: Vec<i64> = by.keys().map(|k| k.as_int().expect("integer powers of λ₀")).collect();
    let lo = match powers.iter().min() {
        Some(lo) => *lo,
        None => return Ok(Vec::new()),
    };
    let hi = *powers.iter().max().unwrap();
    match hi - lo {
        0 => Ok(Vec::new()),
        1 => {
            let c1 = &by[&Exponent::Int(hi)];
            let c0 = by.get(&Exponent::Int(lo)).cloned().unwrap_or_default();
            if c0.is_zero() {
                return Ok(Vec::new());
            }
            let inv = c1.inverse().map_err(|e| Error::Unsupported(format!("leading coefficient: {e}")))?;
            Ok(vec![-(&c0 * &inv)])
        }
        d => Err(Error::Unsupported(format!("leading-order equation of degree {d} in lambda0"))),
    }
}
