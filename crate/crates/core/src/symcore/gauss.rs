//! Exact Gaussian rationals and the coefficient trait shared by every
//! expression type in the crate.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

use super::SymError;

/// Scalar ring the expression engine is generic over.
///
/// Exact work uses [`GaussRational`]; numeric evaluation instantiates the
/// same machinery with `Complex<f64>` (or any `Complex<T: Float>`).
pub trait Coefficient:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Send
    + Sync
{
    fn from_i64(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;
    fn conj(&self) -> Self;

    /// `i^k` for integer `k`, reduced mod 4.
    fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => Self::one(),
            1 => Self::imag_unit(),
            2 => -Self::one(),
            _ => -Self::imag_unit(),
        }
    }

    fn pow_i64(&self, k: i64) -> Option<Self> {
        let base = if k < 0 { self.inverse()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}

/// Exact complex number `re + i·im` with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        Self { re, im: BigRational::zero() }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero()
    }

    /// Integer value if the number is a real integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    /// `re² + im²`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self { re: &self.re * r, im: &self.im * r }
    }

    /// Unit-modulus powers of `i` this number equals, if any: returns `k` with `self == i^k`.
    pub fn as_i_power(&self) -> Option<i64> {
        let one = BigRational::one();
        let zero = BigRational::zero();
        if self.im == zero && self.re == one {
            Some(0)
        } else if self.re == zero && self.im == one {
            Some(1)
        } else if self.im == zero && self.re == -one.clone() {
            Some(2)
        } else if self.re == zero && self.im == -one {
            Some(3)
        } else {
            None
        }
    }

    pub fn to_complex<T: Float>(&self) -> Complex<T> {
        Complex::new(rational_to_float(&self.re), rational_to_float(&self.im))
    }
}

/// Converts an exact rational to any `Float`, keeping as many bits as the
/// target type can carry (multi-limb types such as double-double included).
pub fn rational_to_float<T: Float>(r: &BigRational) -> T {
    if r.is_zero() {
        return T::zero();
    }
    let neg = r.is_negative();
    let num = r.numer().abs();
    let den = r.denom().clone();
    // scale so that the integer quotient carries ~160 significant bits
    let shift = 160i64 - (num.bits() as i64 - den.bits() as i64);
    let q = if shift >= 0 {
        (num << shift as usize) / den
    } else {
        num / (den << (-shift) as usize)
    };
    let mut acc = T::zero();
    let mut rest = q;
    let mut limb_exp = 0i64;
    let mask = (BigInt::one() << 48usize) - BigInt::one();
    while !rest.is_zero() {
        let limb = (&rest & &mask).to_u64().unwrap_or(0);
        let term = T::from(limb).unwrap() * pow2::<T>(limb_exp - shift);
        acc = acc + term;
        rest >>= 48usize;
        limb_exp += 48;
    }
    if neg {
        -acc
    } else {
        acc
    }
}

fn pow2<T: Float>(e: i64) -> T {
    let two = T::one() + T::one();
    two.powi(e as i32)
}

impl Zero for GaussRational {
    fn zero() -> Self {
        Self { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussRational {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl Add for GaussRational {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<'a> Add<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn add(self, o: &GaussRational) -> GaussRational {
        GaussRational { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl AddAssign<&GaussRational> for GaussRational {
    fn add_assign(&mut self, o: &GaussRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl Sub for GaussRational {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self { re: self.re - o.re, im: self.im - o.im }
    }
}

impl SubAssign<&GaussRational> for GaussRational {
    fn sub_assign(&mut self, o: &GaussRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl Mul for GaussRational {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<'a> Mul<&'a GaussRational> for &'a GaussRational {
    type Output = GaussRational;
    fn mul(self, o: &GaussRational) -> GaussRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussRational::real(&self.re * &o.re);
        }
        GaussRational {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl MulAssign<&GaussRational> for GaussRational {
    fn mul_assign(&mut self, o: &GaussRational) {
        *self = &*self * o;
    }
}

impl Div for GaussRational {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inverse().expect("division by zero GaussRational")
    }
}

impl Neg for GaussRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl Coefficient for GaussRational {
    fn from_i64(n: i64) -> Self {
        Self::from_ints(n, 0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(BigRational::new(num.into(), den.into()))
    }

    fn imag_unit() -> Self {
        Self::i()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Self::real(self.re.recip()));
        }
        let n = self.norm_sqr();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }
}

impl<T: Float + Send + Sync + fmt::Debug + fmt::Display> Coefficient for Complex<T> {
    fn from_i64(n: i64) -> Self {
        Complex::new(T::from(n).unwrap(), T::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(T::from(num).unwrap() / T::from(den).unwrap(), T::zero())
    }

    fn imag_unit() -> Self {
        Complex::new(T::zero(), T::one())
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.inv())
        }
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }
}

fn fmt_rational(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Decimal-free text form `p/q+r/s*i`; the inverse of [`FromStr`].
impl fmt::Display for GaussRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = BigRational::one();
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => fmt_rational(&self.re, f),
            (re_zero, false) => {
                if !re_zero {
                    fmt_rational(&self.re, f)?;
                    if self.im.is_positive() {
                        write!(f, "+")?;
                    }
                }
                if self.im == one {
                    write!(f, "i")
                } else if self.im == -one {
                    write!(f, "-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    write!(f, "*i")
                }
            }
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, SymError> {
    let bad = || SymError::Parse(format!("invalid rational literal '{s}'"));
    let s = s.trim();
    if s.is_empty() {
        return Err(bad());
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

impl FromStr for GaussRational {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Self, SymError> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(SymError::Parse("empty number".into()));
        }
        if !s.ends_with('i') {
            return Ok(Self::real(parse_rational(&s)?));
        }
        // split at the sign that separates the real and imaginary parts
        let body = &s[..s.len() - 1];
        let split = body
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_part, im_part) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let im_part = im_part.strip_suffix('*').unwrap_or(im_part);
        let im = match im_part {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            other => parse_rational(other.strip_prefix('+').unwrap_or(other))?,
        };
        let re = if re_part.is_empty() { BigRational::zero() } else { parse_rational(re_part)? };
        Ok(Self { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn i_squared_is_minus_one() {
        let i = GaussRational::i();
        assert_eq!(&i * &i, -GaussRational::one());
        assert_eq!(GaussRational::i_pow(-1), -GaussRational::i());
        assert_eq!(GaussRational::i_pow(7), -GaussRational::i());
    }

    #[test]
    fn lowest_terms() {
        let a = GaussRational::new(q(2, 4), q(-3, -9));
        assert_eq!(a.re.numer(), &BigInt::from(1));
        assert_eq!(a.re.denom(), &BigInt::from(2));
        assert_eq!(a.im.denom(), &BigInt::from(3));
        assert!(a.im.denom().is_positive());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = GaussRational::new(q(3, 7), q(-2, 5));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, GaussRational::one());
        assert!(GaussRational::zero().inverse().is_none());
    }

    #[test]
    fn text_forms() {
        let cases = [
            (GaussRational::zero(), "0"),
            (GaussRational::from_ints(-3, 0), "-3"),
            (GaussRational::i(), "i"),
            (GaussRational::from_ints(0, -1), "-i"),
            (GaussRational::new(q(1, 2), q(3, 4)), "1/2+3/4*i"),
            (GaussRational::new(q(1, 2), q(-3, 4)), "1/2-3/4*i"),
            (GaussRational::new(q(0, 1), q(-7, 4)), "-7/4*i"),
            (GaussRational::new(q(-5, 1), q(1, 1)), "-5+i"),
        ];
        for (value, text) in cases {
            assert_eq!(value.to_string(), text);
            assert_eq!(text.parse::<GaussRational>().unwrap(), value);
        }
        assert!("1/0".parse::<GaussRational>().is_err());
        assert!("abc".parse::<GaussRational>().is_err());
    }

    #[test]
    fn float_conversion_keeps_double_double_bits() {
        let third = q(1, 3);
        let x: twofloat::TwoFloat = rational_to_float(&third);
        let err = x * twofloat::TwoFloat::from(3.0) - twofloat::TwoFloat::from(1.0);
        assert!(err.abs() < twofloat::TwoFloat::from(1e-30));
        let y: f64 = rational_to_float(&q(-22, 7));
        assert!((y + 22.0 / 7.0).abs() < 1e-15);
    }
}
