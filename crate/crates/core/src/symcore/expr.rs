//! Canonical sparse expressions: sums of coefficient × monomial with
//! integer or symbolic exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::exponent::Exponent;
use super::gauss::{Coefficient, GaussRational};
use super::symbol::Symbol;
use super::SymError;

/// Sorted product of `(symbol, exponent)` factors; exponents never zero.
/// The imaginary unit appears only with a purely symbolic exponent.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Monomial(SmallVec<[(Symbol, Exponent); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[(Symbol, Exponent)] {
        &self.0
    }

    pub fn exponent_of(&self, s: &Symbol) -> Exponent {
        self.0
            .binary_search_by(|(x, _)| x.cmp(s))
            .map(|k| self.0[k].1.clone())
            .unwrap_or_default()
    }

    /// Monomial with `s` removed.
    pub fn without(&self, s: &Symbol) -> Monomial {
        Monomial(self.0.iter().filter(|(x, _)| x != s).cloned().collect())
    }

    /// Builds from arbitrary factors; returns the monomial and the integer
    /// power of `i` that had to be moved into the coefficient.
    pub fn from_factors(mut factors: Vec<(Symbol, Exponent)>) -> (Monomial, i64) {
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: SmallVec<[(Symbol, Exponent); 4]> = SmallVec::new();
        for (s, e) in factors {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 = last.1.clone() + e,
                _ => out.push((s, e)),
            }
        }
        let mut i_power = 0;
        out.retain(|(s, e)| {
            if *s == Symbol::Imag {
                let c = e.constant_term();
                i_power += c;
                *e = e.clone() - Exponent::Int(c);
            }
            !e.is_zero()
        });
        (Monomial(out), i_power)
    }

    pub fn mul(&self, o: &Monomial) -> (Monomial, i64) {
        if o.is_one() {
            return (self.clone(), 0);
        }
        if self.is_one() {
            return (o.clone(), 0);
        }
        let (a, b) = (&self.0, &o.0);
        let mut out: SmallVec<[(Symbol, Exponent); 4]> = SmallVec::with_capacity(a.len() + b.len());
        let mut i_power = 0;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let mut e = a[i].1.clone() + b[j].1.clone();
                    if a[i].0 == Symbol::Imag {
                        let c = e.constant_term();
                        i_power += c;
                        e = e - Exponent::Int(c);
                    }
                    if !e.is_zero() {
                        out.push((a[i].0.clone(), e));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().cloned());
        (Monomial(out), i_power)
    }

    /// Raises every exponent to `k`·exponent.
    pub fn pow_exponent(&self, k: &Exponent) -> (Monomial, i64) {
        Monomial::from_factors(self.0.iter().map(|(s, e)| (s.clone(), e.clone() * k.clone())).collect())
    }

    /// Total integer degree over the factors accepted by `filter`.
    pub fn int_degree(&self, filter: impl Fn(&Symbol) -> bool) -> Option<i64> {
        let mut d = 0;
        for (s, e) in &self.0 {
            if filter(s) {
                d += e.as_int()?;
            }
        }
        Some(d)
    }
}

/// Canonical expression over the coefficient ring `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct Expr<C = GaussRational> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Coefficient> Default for Expr<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> Expr<C> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(C::from_i64(n))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::constant(C::from_ratio(num, den))
    }

    pub fn i() -> Self {
        Self::constant(C::imag_unit())
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::symbol_pow(s, Exponent::Int(1))
    }

    pub fn symbol_pow(s: Symbol, e: Exponent) -> Self {
        let (m, ip) = Monomial::from_factors(vec![(s, e)]);
        Self::term(C::i_pow(ip), m)
    }

    pub fn param(name: &str) -> Self {
        Self::symbol(Symbol::param(name))
    }

    pub fn jet(field: &str, dx: u32, dt: u32) -> Self {
        Self::symbol(Symbol::jet(field, dx, dt))
    }

    pub fn exp_var(name: &str) -> Self {
        Self::symbol(Symbol::exp_var(name))
    }

    /// Expression form of an exponent polynomial (exponent names become
    /// `ExpVar` symbols).
    pub fn from_exponent(e: &Exponent) -> Self {
        let mut acc = Self::zero();
        for (mono, c) in e.monomials() {
            let factors = mono.into_iter().map(|(n, d)| (Symbol::ExpVar(n), Exponent::Int(d as i64))).collect();
            let (m, _) = Monomial::from_factors(factors);
            acc.add_term(C::from_i64(c), m);
        }
        acc
    }

    pub fn term(c: C, m: Monomial) -> Self {
        let mut e = Self::zero();
        e.add_term(c, m);
        e
    }

    pub fn add_term(&mut self, c: C, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    fn add_term_ipow(&mut self, c: C, m: Monomial, i_power: i64) {
        if i_power.rem_euclid(4) == 0 {
            self.add_term(c, m)
        } else {
            self.add_term(c * C::i_pow(i_power), m)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, C)> {
        self.terms.into_iter()
    }

    pub fn from_term_list(list: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in list {
            e.add_term(c, m);
        }
        e
    }

    /// Constant value if the expression has no symbols.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single `(coefficient, monomial)` pair of a one-term expression.
    pub fn as_monomial(&self) -> Option<(&C, &Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c, m))
        } else {
            None
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self::from_term_list(self.terms.iter().map(|(m, c)| (m.clone(), c.clone() * k.clone())))
    }

    pub fn mul_monomial(&self, k: &C, mono: &Monomial) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let (p, ip) = m.mul(mono);
            out.add_term_ipow(c.clone() * k.clone(), p, ip);
        }
        out
    }

    /// Integer power; negative powers require a single-term expression.
    pub fn pow(&self, k: i64) -> Result<Self, SymError> {
        if k < 0 {
            return self.inverse()?.pow(-k);
        }
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = k as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Inverse of a single-term expression.
    pub fn inverse(&self) -> Result<Self, SymError> {
        let (c, m) = self
            .as_monomial()
            .ok_or_else(|| SymError::NonInvertible(format!("cannot invert the sum {self}")))?;
        let inv = c.inverse().ok_or_else(|| SymError::NonInvertible("division by zero".into()))?;
        let (mi, ip) = m.pow_exponent(&Exponent::Int(-1));
        let mut out = Self::zero();
        out.add_term_ipow(inv, mi, ip);
        Ok(out)
    }

    /// Symbolic power; the base must be a single term whose coefficient is a
    /// unit `±1, ±i`.
    pub fn pow_exponent(&self, e: &Exponent) -> Result<Self, SymError> {
        if let Some(k) = e.as_int() {
            return self.pow(k);
        }
        let (c, m) = self.as_monomial().ok_or_else(|| {
            SymError::UnsupportedExponentForm(format!("symbolic power ({e}) of the sum {self}"))
        })?;
        let unit = [C::one(), C::imag_unit(), -C::one(), -C::imag_unit()]
            .iter()
            .position(|u| u == c)
            .ok_or_else(|| {
                SymError::UnsupportedExponentForm(format!("symbolic power ({e}) of the coefficient {c}"))
            })?;
        let (mut mp, ip) = m.pow_exponent(e);
        let mut coeff = C::i_pow(ip);
        if unit != 0 {
            let (im, ip2) = Monomial::from_factors(vec![(Symbol::Imag, e.scale(unit as i64))]);
            let (prod, ip3) = mp.mul(&im);
            mp = prod;
            coeff = coeff * C::i_pow(ip2 + ip3);
        }
        Ok(Self::term(coeff, mp))
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Expr<D> {
        Expr::from_term_list(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn conj(&self) -> Self {
        // i^e with symbolic e conjugates to i^(-e)
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            let factors = m
                .factors()
                .iter()
                .map(|(s, e)| if *s == Symbol::Imag { (s.clone(), -e.clone()) } else { (s.clone(), e.clone()) })
                .collect();
            let (mm, ip) = Monomial::from_factors(factors);
            out.add_term_ipow(c.conj(), mm, ip);
        }
        out
    }

    /// Sum of the terms whose exponent of `s` equals `power`, with `s` removed.
    pub fn coefficient_of(&self, s: &Symbol, power: &Exponent) -> Self {
        Self::from_term_list(
            self.terms
                .iter()
                .filter(|(m, _)| &m.exponent_of(s) == power)
                .map(|(m, c)| (m.without(s), c.clone())),
        )
    }

    /// Splits by the (integer) exponent of `s`.
    pub fn by_power_of(&self, s: &Symbol) -> BTreeMap<Exponent, Self> {
        let mut out: BTreeMap<Exponent, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.exponent_of(s)).or_default().add_term(c.clone(), m.without(s));
        }
        out
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.factors().iter().any(|(x, _)| x == s))
    }

    pub fn contains_where(&self, pred: impl Fn(&Symbol) -> bool) -> bool {
        self.terms.keys().any(|m| m.factors().iter().any(|(x, _)| pred(x)))
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v: Vec<Symbol> =
            self.terms.keys().flat_map(|m| m.factors().iter().map(|(s, _)| s.clone())).collect();
        v.sort();
        v.dedup();
        v
    }

    /// Greatest common monomial factor (minimum integer exponent per symbol
    /// present in every term). Symbolic exponents are left alone.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let first = match it.next() {
            Some(m) => m,
            None => return Monomial::one(),
        };
        let mut common: Vec<(Symbol, i64)> = first
            .factors()
            .iter()
            .filter(|(s, _)| *s != Symbol::Imag)
            .filter_map(|(s, e)| e.as_int().map(|k| (s.clone(), k)))
            .collect();
        for m in it {
            common.retain_mut(|(s, k)| match m.exponent_of(s).as_int() {
                Some(e) if m.factors().iter().any(|(x, _)| x == s) => {
                    *k = (*k).min(e);
                    true
                }
                _ => false,
            });
        }
        Monomial::from_factors(common.into_iter().map(|(s, k)| (s, Exponent::Int(k))).collect()).0
    }

    /// Evaluates numerically; `env` supplies a value for every symbol.
    pub fn eval_with(&self, env: &dyn Fn(&Symbol) -> Option<C>) -> Option<C> {
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.factors() {
                let v = env(s)?;
                t = t * v.pow_i64(e.as_int()?)?;
            }
            acc = acc + t;
        }
        Some(acc)
    }
}

impl Expr<GaussRational> {
    /// Numeric image of an exact expression.
    pub fn to_complex<T>(&self) -> Expr<num_complex::Complex<T>>
    where
        T: num_traits::Float + Send + Sync + fmt::Debug + fmt::Display,
    {
        self.map_coeffs(|c| c.to_complex::<T>())
    }
}

impl<C: Coefficient> Add for &Expr<C> {
    type Output = Expr<C>;
    fn add(self, o: &Expr<C>) -> Expr<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }
}

impl<C: Coefficient> Add for Expr<C> {
    type Output = Expr<C>;
    fn add(mut self, o: Expr<C>) -> Expr<C> {
        if self.terms.len() < o.terms.len() {
            return o + self;
        }
        for (m, c) in o.terms {
            self.add_term(c, m);
        }
        self
    }
}

impl<C: Coefficient> Sub for &Expr<C> {
    type Output = Expr<C>;
    fn sub(self, o: &Expr<C>) -> Expr<C> {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(-c.clone(), m.clone());
        }
        out
    }
}

impl<C: Coefficient> Sub for Expr<C> {
    type Output = Expr<C>;
    fn sub(mut self, o: Expr<C>) -> Expr<C> {
        for (m, c) in o.terms {
            self.add_term(-c, m);
        }
        self
    }
}

impl<C: Coefficient> Neg for Expr<C> {
    type Output = Expr<C>;
    fn neg(self) -> Expr<C> {
        Expr { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl<C: Coefficient> Neg for &Expr<C> {
    type Output = Expr<C>;
    fn neg(self) -> Expr<C> {
        -(self.clone())
    }
}

impl<C: Coefficient> Mul for &Expr<C> {
    type Output = Expr<C>;
    fn mul(self, o: &Expr<C>) -> Expr<C> {
        let mut out = Expr::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (m, ip) = ma.mul(mb);
                out.add_term_ipow(ca.clone() * cb.clone(), m, ip);
            }
        }
        out
    }
}

impl<C: Coefficient> Mul for Expr<C> {
    type Output = Expr<C>;
    fn mul(self, o: Expr<C>) -> Expr<C> {
        &self * &o
    }
}

impl<C: Coefficient> Add<C> for Expr<C> {
    type Output = Expr<C>;
    fn add(mut self, c: C) -> Expr<C> {
        self.add_term(c, Monomial::one());
        self
    }
}

impl<C: Coefficient> Mul<C> for Expr<C> {
    type Output = Expr<C>;
    fn mul(self, c: C) -> Expr<C> {
        self.scale(&c)
    }
}

impl<C: Coefficient> From<Symbol> for Expr<C> {
    fn from(s: Symbol) -> Self {
        Expr::symbol(s)
    }
}

impl<C: Coefficient> Zero for Expr<C> {
    fn zero() -> Self {
        Expr::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Coefficient> One for Expr<C> {
    fn one() -> Self {
        Expr::one()
    }
}

fn fmt_factor(s: &Symbol, e: &Exponent) -> String {
    match e {
        Exponent::Int(1) => s.to_string(),
        Exponent::Int(n) if *n > 1 => format!("{s}^{n}"),
        _ => format!("{s}^({e})"),
    }
}

/// Splits the textual coefficient into a sign and a magnitude part that can
/// be written in front of a product.
fn coeff_parts<C: Coefficient>(c: &C) -> (bool, String) {
    if *c == C::one() {
        return (false, String::new());
    }
    if *c == -C::one() {
        return (true, String::new());
    }
    let s = c.to_string();
    let body = s.strip_prefix('-').unwrap_or(&s);
    let mixed = body.contains('+') || body.contains('-');
    if mixed {
        (false, format!("({s})"))
    } else {
        (s.starts_with('-'), body.to_string())
    }
}

impl<C: Coefficient> fmt::Display for Expr<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let (neg, mag) = coeff_parts(c);
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if !mag.is_empty() {
                parts.push(mag);
            }
            parts.extend(m.factors().iter().map(|(s, e)| fmt_factor(s, e)));
            if parts.is_empty() {
                write!(f, "1")?;
            } else {
                write!(f, "{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Unnormalized expression tree, as produced by parsers and builders.
#[derive(Clone, Debug, PartialEq)]
pub enum RawExpr<C = GaussRational> {
    Const(C),
    Sym(Symbol),
    Add(Vec<RawExpr<C>>),
    Mul(Vec<RawExpr<C>>),
    Pow(Box<RawExpr<C>>, Exponent),
    Neg(Box<RawExpr<C>>),
}

/// Brings a raw tree into canonical form.
pub fn normalize<C: Coefficient>(raw: &RawExpr<C>) -> Result<Expr<C>, SymError> {
    Ok(match raw {
        RawExpr::Const(c) => Expr::constant(c.clone()),
        RawExpr::Sym(s) => Expr::symbol(s.clone()),
        RawExpr::Add(items) => {
            let mut acc = Expr::zero();
            for it in items {
                acc = acc + normalize(it)?;
            }
            acc
        }
        RawExpr::Mul(items) => {
            let mut acc = Expr::one();
            for it in items {
                acc = &acc * &normalize(it)?;
            }
            acc
        }
        RawExpr::Pow(base, e) => normalize(base)?.pow_exponent(e)?,
        RawExpr::Neg(inner) => -normalize(inner)?,
    })
}

impl<C: Coefficient> Expr<C> {
    /// Tree form; `normalize(e.to_raw()) == e`.
    pub fn to_raw(&self) -> RawExpr<C> {
        RawExpr::Add(
            self.terms
                .iter()
                .map(|(m, c)| {
                    let mut items = vec![RawExpr::Const(c.clone())];
                    items.extend(
                        m.factors()
                            .iter()
                            .map(|(s, e)| RawExpr::Pow(Box::new(RawExpr::Sym(s.clone())), e.clone())),
                    );
                    RawExpr::Mul(items)
                })
                .collect(),
        )
    }
}
