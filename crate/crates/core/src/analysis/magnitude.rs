//! Binary floating point of configurable precision, used to turn exact
//! coefficients into magnitudes without an intermediate f64 rounding.

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::GaussRational;

/// `mantissa · 2^exp`, the mantissa carrying `prec` significant bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    pub mantissa: BigInt,
    pub exp: i64,
    pub prec: u32,
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        Self { mantissa: BigInt::zero(), exp: 0, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    /// Truncating conversion of a rational.
    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        let (num, den) = (r.numer(), r.denom());
        let shift = prec as i64 - (num.bits() as i64 - den.bits() as i64);
        let m = if shift >= 0 { (num << shift as usize) / den } else { num / (den << (-shift) as usize) };
        Self { mantissa: m, exp: -shift, prec }
    }

    /// Square root of a non-negative rational to `prec` bits.
    pub fn sqrt_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Self::zero(prec);
        }
        assert!(!r.is_negative(), "square root of a negative number");
        // scale by an even power of two so the integer root has prec bits
        let (num, den) = (r.numer(), r.denom());
        let mut shift = 2 * prec as i64 - (num.bits() as i64 - den.bits() as i64);
        if shift % 2 != 0 {
            shift += 1;
        }
        let scaled = if shift >= 0 { (num << shift as usize) / den } else { num / (den << (-shift) as usize) };
        Self { mantissa: scaled.sqrt(), exp: -shift / 2, prec }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi((self.exp + drop) as i32)
    }

    /// Natural logarithm, accurate to f64 even far outside the f64 range.
    pub fn ln(&self) -> f64 {
        let bits = self.mantissa.bits() as i64;
        let drop = (bits - 60).max(0);
        let top = (&self.mantissa >> drop as usize).to_f64().unwrap_or(f64::NAN);
        top.ln() + (self.exp + drop) as f64 * std::f64::consts::LN_2
    }

    pub fn to_rational(&self) -> BigRational {
        let one = BigInt::from(1);
        if self.exp >= 0 {
            BigRational::from_integer(&self.mantissa << self.exp as usize)
        } else {
            BigRational::new(self.mantissa.clone(), one << (-self.exp) as usize)
        }
    }

    /// Number of leading decimal digits on which two values agree.
    pub fn agreeing_digits(&self, other: &Self) -> f64 {
        let (a, b) = (self.to_rational(), other.to_rational());
        if a == b {
            return f64::INFINITY;
        }
        let diff = (&a - &b).abs();
        let scale = if a.abs() > b.abs() { a.abs() } else { b.abs() };
        let rel = Self::from_rational(&(diff / scale), 64);
        -rel.ln() / std::f64::consts::LN_10
    }

    pub fn sign(&self) -> Sign {
        self.mantissa.sign()
    }
}

/// |c| of a Gaussian rational.
pub fn magnitude(c: &GaussRational, prec: u32) -> BigFloat {
    BigFloat::sqrt_rational(&c.norm_sqr(), prec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_two() {
        let r = BigRational::from_integer(2.into());
        let s = BigFloat::sqrt_rational(&r, 150);
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let t = BigFloat::sqrt_rational(&r, 300);
        assert!(s.agreeing_digits(&t) > 44.0);
    }

    #[test]
    fn tiny_values_keep_their_logarithm() {
        let r = BigRational::new(1.into(), BigInt::from(1) << 2000usize);
        let f = BigFloat::from_rational(&r, 150);
        assert!((f.ln() + 2000.0 * std::f64::consts::LN_2).abs() < 1e-9);
        assert_eq!(f.to_f64(), 0.0);
    }

    #[test]
    fn magnitude_of_three_four() {
        let m = magnitude(&GaussRational::from_ints(3, 4), 150);
        assert!((m.to_f64() - 5.0).abs() < 1e-15);
    }
}
