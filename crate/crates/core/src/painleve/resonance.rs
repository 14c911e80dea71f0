//! Resonances: powers r at which the linearised recursion loses a
//! condition, read off from the probe u = λ₀φ^α + ϑφ^(r+α).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::balance::Balance;
use super::leading::{expand_w, lambda0, strip_content, strip_symbolic_content, RES};
use super::poly::{to_i64, BiPoly, RatPoly};
use crate::frontend::PDESystem;
use crate::symcore::{collect_phi_powers, substitute, substitute_field, Bindings, DiffMode, Exponent, Symbol};
use crate::{Error, Expr};

/// What is left of the resonance polynomial after removing the roots that
/// hold for every value of the deformation exponent.
#[derive(Clone, Debug, PartialEq)]
pub enum Remainder {
    None,
    Linear { root: Expr },
    /// `r² + linear·r + constant`, roots `−linear/2 ± √reduced_discriminant`.
    Quadratic { linear: Expr, constant: Expr, reduced_discriminant: Expr },
    Other(Expr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResonanceReport {
    /// Resonance polynomial in r (monic when possible), content removed.
    pub polynomial: Expr,
    /// Rational roots valid for all deformation values, with multiplicity.
    pub universal: Vec<BigRational>,
    pub remainder: Remainder,
    /// The deformation exponent the remainder depends on, if any.
    pub inner: Option<String>,
    bipoly: Option<BiPoly>,
}

impl ResonanceReport {
    /// Integer resonances, with multiplicity, at the given deformation value
    /// (ignored when the polynomial is concrete).
    pub fn integer_roots_at(&self, eps: Option<i64>) -> Vec<i64> {
        let Some(b) = &self.bipoly else {
            return self.universal.iter().filter_map(to_i64).collect();
        };
        let v = BigRational::from_integer(eps.unwrap_or(1).into());
        b.at(&v).rational_roots().iter().filter_map(to_i64).collect()
    }

    pub fn integer_roots(&self) -> Vec<i64> {
        let mut r: Vec<i64> = self.universal.iter().filter_map(to_i64).collect();
        if let Remainder::Linear { root } = &self.remainder {
            if let Some(k) = root.as_constant().and_then(|c| c.as_i64()) {
                r.push(k);
            }
        }
        r.sort();
        r
    }

    /// Smallest positive integer resonance.
    pub fn first_positive(&self, eps: Option<i64>) -> Option<i64> {
        self.integer_roots_at(eps).into_iter().filter(|r| *r > 0).min()
    }

    pub fn has_universal_minus_one(&self) -> bool {
        self.universal.contains(&BigRational::from_integer((-1).into()))
    }
}

/// Substitutes the probe into the expanded equation and reads off the
/// leading ϑ-linear coefficient. Only for concrete equations.
pub fn resonance_polynomial_direct(system: &PDESystem, b: &Balance) -> Result<Expr, Error> {
    if system.has_slots() {
        return Err(Error::Unsupported("direct probe needs an expanded equation".into()));
    }
    let phi = Symbol::jet("phi", 0, 0);
    let alpha = Exponent::Int(b.alpha);
    let lead = &b.lambda0 * &Expr::symbol_pow(phi.clone(), alpha.clone());
    let probe = &Expr::symbol(Symbol::Probe) * &Expr::symbol_pow(phi, Exponent::var(RES) + alpha);
    let u = lead + probe;
    let sub = substitute_field(&b.equation, &system.field, &u, DiffMode::General)?;
    let lin = sub.coefficient_of(&Symbol::Probe, &Exponent::Int(1));
    let (_, coeff) = collect_phi_powers(&lin)
        .leading()?
        .ok_or_else(|| Error::InternalInvariantViolation("probe has no ϑ-linear part".into()))?;
    strip_content(&coeff, is_res)
}

fn is_res(s: &Symbol) -> bool {
    matches!(s, Symbol::ExpVar(n) if &**n == RES)
}

/// Leading-order linear response built term by term from the dominant
/// terms; works with symbolic deformation exponents.
pub fn resonance_polynomial_symbolic(system: &PDESystem, b: &Balance) -> Result<Expr, Error> {
    let mut total = Expr::zero();
    for s in b.shapes(&system.field)? {
        total = total + s.probe(b.alpha)?;
    }
    let stripped = expand_w(&strip_symbolic_content(&total)?, b.alpha)?;
    let mut bind = Bindings::new();
    bind.insert(lambda0(), b.lambda0.clone());
    let p = substitute(&stripped, &bind)?;
    strip_content(&p, is_res)
}

fn normalise(p: &Expr) -> Expr {
    let by = p.by_power_of(&Symbol::exp_var(RES));
    match by.iter().next_back().and_then(|(_, c)| c.as_constant()) {
        Some(c) => match crate::symcore::Coefficient::inverse(&c) {
            Some(inv) => p.scale(&inv),
            None => p.clone(),
        },
        None => p.clone(),
    }
}

/// Resonance spectrum for a balance: polynomial, universal roots and the
/// deformation-dependent remainder.
pub fn resonance_spectrum(system: &PDESystem, b: &Balance) -> Result<ResonanceReport, Error> {
    let raw = if system.has_slots() || b.equation.contains_where(|s| matches!(s, Symbol::Slot(_))) {
        resonance_polynomial_symbolic(system, b)?
    } else {
        resonance_polynomial_direct(system, b)?
    };
    let raw = normalise(&raw);
    let Some(bp) = BiPoly::from_expr(&raw, RES) else {
        return Ok(ResonanceReport {
            polynomial: raw.clone(),
            universal: Vec::new(),
            remainder: Remainder::Other(raw),
            inner: None,
            bipoly: None,
        });
    };
    let bp = bp.monic();
    let polynomial = bp.to_expr(RES);
    let order = system.order() as isize;
    if bp.degree() > order {
        return Err(Error::InternalInvariantViolation(format!(
            "resonance polynomial of degree {} exceeds the order {order}",
            bp.degree()
        )));
    }

    // candidate roots from a sample value, kept when they hold identically
    let sample = bp.at(&BigRational::from_integer(1.into()));
    let mut universal = Vec::new();
    let mut rest = bp.clone();
    for r in sample.rational_roots() {
        if rest.degree() > 0 && rest.has_root(&r) {
            rest = rest.deflate(&r);
            universal.push(r);
        }
    }
    let inner = bp.inner.clone().filter(|_| !rest.is_constant_in_inner());
    let var = inner.clone().unwrap_or_else(|| "_".into());
    let remainder = match rest.degree() {
        d if d <= 0 => Remainder::None,
        1 => {
            let (c0, c1) = (&rest.coeffs[0], &rest.coeffs[1]);
            match c0.div_exact(c1) {
                Some(root) => Remainder::Linear { root: -root.to_expr(&var) },
                None => Remainder::Other(rest.to_expr(RES)),
            }
        }
        2 if rest.coeffs[2].as_constant().is_some() => {
            let m = rest.monic();
            let (b1, c0) = (&m.coeffs[1], &m.coeffs[0]);
            let half = b1.scale(&BigRational::new(1.into(), 2.into()));
            let disc = half.mul(&half).sub(c0);
            Remainder::Quadratic {
                linear: b1.to_expr(&var),
                constant: c0.to_expr(&var),
                reduced_discriminant: disc.to_expr(&var),
            }
        }
        _ => Remainder::Other(rest.to_expr(RES)),
    };
    Ok(ResonanceReport { polynomial, universal, remainder, inner, bipoly: Some(bp) })
}

/// Deformation values for which all resonances are integers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Integrality {
    /// Every admissible value.
    Always,
    /// Exactly these values; `n` is the square root of the reduced
    /// discriminant, `m` the shifted variable with m² − n² constant.
    Finite { solutions: Vec<IntegralSolution>, method: String },
    Unresolved { reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegralSolution {
    pub eps: i64,
    pub n: i64,
    pub m: Option<i64>,
}

/// Upper limit of the fallback search when no closed argument applies.
pub const SEARCH_LIMIT: i64 = 10_000;

fn poly_of(e: &Expr, var: &str) -> Option<RatPoly> {
    let bp = BiPoly::from_expr(e, var)?;
    if bp.inner.is_some() {
        return None;
    }
    Some(RatPoly::new(bp.coeffs.iter().map(|c| c.coeff(0)).collect()))
}

fn is_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// Decides for which positive integer exponents every resonance is an
/// integer. For a quadratic remainder with reduced discriminant
/// D = aε² + bε + c (integer coefficients, a a perfect square s²) the
/// condition D = n² becomes (X − 2sn)(X + 2sn) = b² − 4ac with X = 2aε + b,
/// a finite factor-pair enumeration.
pub fn integrality(report: &ResonanceReport) -> Integrality {
    let var = report.inner.clone().unwrap_or_else(|| "_".into());
    let integer_valued = |p: &RatPoly, e: i64| to_i64(&p.eval(&BigRational::from_integer(e.into()))).is_some();
    match &report.remainder {
        Remainder::None => Integrality::Always,
        Remainder::Linear { root } => match poly_of(root, &var) {
            Some(p) if p.coeffs().iter().all(|c| c.is_integer()) => Integrality::Always,
            _ => Integrality::Unresolved { reason: format!("linear remainder with root {root}") },
        },
        Remainder::Other(e) => Integrality::Unresolved { reason: format!("irreducible remainder {e}") },
        Remainder::Quadratic { linear, reduced_discriminant, .. } => {
            let (Some(d), Some(lin)) = (poly_of(reduced_discriminant, &var), poly_of(linear, &var)) else {
                return Integrality::Unresolved { reason: "non-polynomial discriminant".into() };
            };
            let centre = lin.scale(&BigRational::new((-1).into(), 2.into()));
            let ok = |e: i64, n: i64| e >= 1 && n >= 0 && integer_valued(&centre, e);
            if d.degree() <= 0 {
                let c = d.coeff(0);
                return match c.is_integer().then(|| is_square(&c.to_integer())).flatten() {
                    Some(_) => Integrality::Always,
                    None => Integrality::Finite { solutions: Vec::new(), method: "constant discriminant".into() },
                };
            }
            let all_int = d.coeffs().iter().all(|c| c.is_integer());
            let sq = (d.degree() == 2 && all_int).then(|| is_square(&d.coeff(2).to_integer())).flatten();
            if let Some(s) = sq {
                let (a, b, c) = (d.coeff(2).to_integer(), d.coeff(1).to_integer(), d.coeff(0).to_integer());
                let delta: BigInt = &b * &b - BigInt::from(4) * &a * &c;
                if delta.is_zero() {
                    return Integrality::Unresolved { reason: "discriminant is a perfect square polynomial".into() };
                }
                let mut solutions = Vec::new();
                let abs = delta.abs();
                let mut k = BigInt::from(1);
                while &k * &k <= abs {
                    if (&abs % &k).is_zero() {
                        for f in [k.clone(), &abs / &k] {
                            for f in [f.clone(), -f] {
                                let g = &delta / &f;
                                let xs = &f + &g;
                                let ns = &g - &f;
                                let four_s = BigInt::from(4) * &s;
                                if !(&xs % BigInt::from(2)).is_zero() || !(&ns % &four_s).is_zero() {
                                    continue;
                                }
                                let x = &xs / BigInt::from(2);
                                let n = &ns / &four_s;
                                let two_a = BigInt::from(2) * &a;
                                if !((&x - &b) % &two_a).is_zero() {
                                    continue;
                                }
                                let e = (&x - &b) / &two_a;
                                let (Some(e), Some(n)) = (e.to_i64(), n.to_i64()) else { continue };
                                if ok(e, n) && !solutions.iter().any(|s: &IntegralSolution| s.eps == e && s.n == n) {
                                    let two_s = BigInt::from(2) * &s;
                                    let m = (&x % &two_s).is_zero().then(|| (&x / &two_s).to_i64()).flatten();
                                    solutions.push(IntegralSolution { eps: e, n, m });
                                }
                            }
                        }
                    }
                    k += 1;
                }
                solutions.sort_by_key(|s| (s.eps, s.n));
                return Integrality::Finite { solutions, method: format!("factor pairs of {delta}") };
            }
            let mut solutions = Vec::new();
            for e in 1..=SEARCH_LIMIT {
                let v = d.eval(&BigRational::from_integer(e.into()));
                if !v.is_integer() {
                    continue;
                }
                if let Some(n) = is_square(&v.to_integer()).and_then(|n| n.to_i64()) {
                    if ok(e, n) {
                        solutions.push(IntegralSolution { eps: e, n, m: None });
                    }
                }
            }
            Integrality::Finite { solutions, method: format!("search up to {SEARCH_LIMIT}") }
        }
    }
}
