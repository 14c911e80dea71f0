//! Dense univariate polynomials over ℚ, and polynomials in r whose
//! coefficients are polynomials in a deformation exponent.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::symcore::{Exponent, Symbol};
use crate::{Expr, GaussRational};

/// Ascending coefficients, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RatPoly(Vec<BigRational>);

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl RatPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(vec![c])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|k| q(*k)).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.0.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, −1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.0.len() as isize - 1
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        (self.0.len() <= 1).then(|| self.coeff(0))
    }

    pub fn lead(&self) -> BigRational {
        self.0.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.0.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&q(-1)))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::default();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient and remainder; `d` must be nonzero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut rem = self.0.clone();
        let dd = d.0.len() - 1;
        if rem.len() <= dd {
            return (Self::default(), self.clone());
        }
        let mut quo = vec![BigRational::zero(); rem.len() - dd];
        let lc = d.lead();
        for k in (0..quo.len()).rev() {
            let c = &rem[k + dd] / &lc;
            for (j, dj) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
            quo[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quo), Self::new(rem))
    }

    /// Exact quotient, if `d` divides `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (qq, r) = self.div_rem(d);
        r.is_zero().then_some(qq)
    }

    /// Primitive integer multiple (positive leading coefficient).
    pub fn integer_coeffs(&self) -> Vec<BigInt> {
        let l = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        let ints: Vec<BigInt> = self.0.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
        let sign = if self.lead().is_negative() { -BigInt::one() } else { BigInt::one() };
        ints.into_iter().map(|c| if g.is_zero() { c } else { &c / &g * &sign }).collect()
    }

    /// Rational roots with multiplicity, in increasing order.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let mut roots = Vec::new();
        let mut p = self.clone();
        while p.degree() > 0 && p.coeff(0).is_zero() {
            roots.push(BigRational::zero());
            p = Self::new(p.0[1..].to_vec());
        }
        if p.degree() <= 0 {
            roots.sort();
            return roots;
        }
        let ints = p.integer_coeffs();
        let (a0, an) = (ints[0].abs(), ints[ints.len() - 1].abs());
        let mut cands = Vec::new();
        for num in divisors(&a0) {
            for den in divisors(&an) {
                let r = BigRational::new(num.clone(), den.clone());
                cands.push(r.clone());
                cands.push(-r);
            }
        }
        cands.sort();
        cands.dedup();
        for r in cands {
            let lin = Self::new(vec![-r.clone(), BigRational::one()]);
            while let Some(qq) = p.div_exact(&lin) {
                roots.push(r.clone());
                p = qq;
                if p.degree() <= 0 {
                    break;
                }
            }
        }
        roots.sort();
        roots
    }

    /// Divides out the given roots (each once).
    pub fn deflate(&self, roots: &[BigRational]) -> Self {
        roots.iter().fold(self.clone(), |p, r| {
            p.div_exact(&Self::new(vec![-r.clone(), BigRational::one()])).expect("root divides")
        })
    }

    pub fn to_expr(&self, var: &str) -> Expr {
        let mut out = Expr::zero();
        for (k, c) in self.0.iter().enumerate() {
            let t = Expr::symbol_pow(Symbol::exp_var(var), Exponent::Int(k as i64));
            out = out + t.scale(&GaussRational::real(c.clone()));
        }
        out
    }
}

/// Positive divisors by trial division (inputs here are small).
fn divisors(n: &BigInt) -> Vec<BigInt> {
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            out.push(n / &d);
        }
        d += 1;
        if d > BigInt::from(10_000_000u64) {
            break;
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `Σ c_k(v) r^k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    pub coeffs: Vec<RatPoly>,
    /// Name of the inner variable, if any coefficient depends on it.
    pub inner: Option<String>,
}

impl BiPoly {
    fn trim(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    /// Reads a polynomial in the exponent variable `outer` whose
    /// coefficients are real polynomials in at most one other exponent
    /// variable.
    pub fn from_expr(e: &Expr, outer: &str) -> Option<Self> {
        let mut inner: Option<String> = None;
        let mut rows: Vec<Vec<BigRational>> = Vec::new();
        for (m, c) in e.terms() {
            if !c.im.is_zero() {
                return None;
            }
            let (mut dr, mut dv) = (0usize, 0usize);
            for (s, x) in m.factors() {
                let (Symbol::ExpVar(n), Some(k)) = (s, x.as_int()) else { return None };
                if k < 0 {
                    return None;
                }
                if &**n == outer {
                    dr = k as usize;
                } else {
                    match &inner {
                        Some(v) if v != &**n => return None,
                        _ => inner = Some(n.to_string()),
                    }
                    dv = k as usize;
                }
            }
            if rows.len() <= dr {
                rows.resize(dr + 1, Vec::new());
            }
            if rows[dr].len() <= dv {
                rows[dr].resize(dv + 1, BigRational::zero());
            }
            rows[dr][dv] += c.re.clone();
        }
        Some(Self { coeffs: rows.into_iter().map(RatPoly::new).collect(), inner }.trim())
    }

    pub fn to_expr(&self, outer: &str) -> Expr {
        let var = self.inner.clone().unwrap_or_else(|| "_".into());
        let mut out = Expr::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = Expr::symbol_pow(Symbol::exp_var(outer), Exponent::Int(k as i64));
            out = out + &t * &c.to_expr(&var);
        }
        out
    }

    /// Value at a fixed inner value.
    pub fn at(&self, v: &BigRational) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| c.eval(v)).collect())
    }

    /// Divides every coefficient by the leading one when exact.
    pub fn monic(&self) -> Self {
        let Some(lead) = self.coeffs.last() else { return self.clone() };
        let divided: Option<Vec<RatPoly>> = self.coeffs.iter().map(|c| c.div_exact(lead)).collect();
        match divided {
            Some(c) => Self { coeffs: c, inner: self.inner.clone() },
            None => self.clone(),
        }
    }

    /// Whether r = `root` (a constant) annihilates the polynomial identically.
    pub fn has_root(&self, root: &BigRational) -> bool {
        let mut acc = RatPoly::default();
        for c in self.coeffs.iter().rev() {
            acc = acc.scale(root).add(c);
        }
        acc.is_zero()
    }

    /// Synthetic division by (r − root).
    pub fn deflate(&self, root: &BigRational) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return self.clone();
        }
        let mut out = vec![RatPoly::default(); n - 1];
        let mut carry = RatPoly::default();
        for k in (1..n).rev() {
            carry = carry.scale(root).add(&self.coeffs[k]);
            out[k - 1] = carry.clone();
        }
        Self { coeffs: out, inner: self.inner.clone() }.trim()
    }

    pub fn is_constant_in_inner(&self) -> bool {
        self.coeffs.iter().all(|c| c.degree() <= 0)
    }
}

pub fn to_i64(r: &BigRational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}
