//! Dormand–Prince 5(4) with embedded error control, for complex systems
//! along a real path, generic over the real scalar.

use num_complex::Complex;
use num_traits::Float;

use crate::Error;

#[derive(Clone, Copy, Debug)]
pub struct Tolerances<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
}

impl Default for Tolerances<f64> {
    fn default() -> Self {
        Self { rtol: 1e-10, atol: 1e-14, max_steps: 1_000_000 }
    }
}

impl Default for Tolerances<twofloat::TwoFloat> {
    fn default() -> Self {
        use twofloat::TwoFloat;
        Self { rtol: TwoFloat::from(1e-24), atol: TwoFloat::from(1e-30), max_steps: 1_000_000 }
    }
}

type Q = (i64, i64);

const C: [Q; 7] = [(0, 1), (1, 5), (3, 10), (4, 5), (8, 9), (1, 1), (1, 1)];
const A: [[Q; 6]; 7] = [
    [(0, 1); 6],
    [(1, 5), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(3, 40), (9, 40), (0, 1), (0, 1), (0, 1), (0, 1)],
    [(44, 45), (-56, 15), (32, 9), (0, 1), (0, 1), (0, 1)],
    [(19372, 6561), (-25360, 2187), (64448, 6561), (-212, 729), (0, 1), (0, 1)],
    [(9017, 3168), (-355, 33), (46732, 5247), (49, 176), (-5103, 18656), (0, 1)],
    [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84)],
];
const B5: [Q; 7] = [(35, 384), (0, 1), (500, 1113), (125, 192), (-2187, 6784), (11, 84), (0, 1)];
const B4: [Q; 7] =
    [(5179, 57600), (0, 1), (7571, 16695), (393, 640), (-92097, 339200), (187, 2100), (1, 40)];

/// Quotient refined by one correction step. Some double-double scalars only
/// round `/` to f64 accuracy while their products are exact enough.
pub fn refined_div<T: Float>(a: T, b: T) -> T {
    let q = a / b;
    q + (a - q * b) / b
}

/// `a / b` for complex values, going through [`refined_div`].
pub fn complex_div<T: Float>(a: Complex<T>, b: Complex<T>) -> Complex<T> {
    let n = b.norm_sqr();
    let p = a * b.conj();
    Complex::new(refined_div(p.re, n), refined_div(p.im, n))
}

/// Tableau entries are exact ratios, so extended-precision scalars get them
/// to full precision.
fn rat<T: Float>((n, d): Q) -> T {
    refined_div(T::from(n).unwrap(), T::from(d).unwrap())
}

struct Tableau<T> {
    c: [T; 7],
    a: [[T; 6]; 7],
    b5: [T; 7],
    e: [T; 7],
}

impl<T: Float> Tableau<T> {
    fn new() -> Self {
        let c = C.map(rat);
        let a = A.map(|row| row.map(rat));
        let b5 = B5.map(rat);
        let b4: [T; 7] = B4.map(rat);
        let mut e = [T::zero(); 7];
        for k in 0..7 {
            e[k] = b5[k] - b4[k];
        }
        Self { c, a, b5, e }
    }
}

/// Integrates y' = f(z, y) from z0 to z1, returning the state at z1.
pub fn integrate<T, F>(mut f: F, z0: T, y0: &[Complex<T>], z1: T, tol: &Tolerances<T>) -> Result<Vec<Complex<T>>, Error>
where
    T: Float,
    F: FnMut(T, &[Complex<T>]) -> Result<Vec<Complex<T>>, Error>,
{
    let tab = Tableau::<T>::new();
    let span = z1 - z0;
    if span == T::zero() {
        return Ok(y0.to_vec());
    }
    let dir = span.signum();
    let mut z = z0;
    let mut y = y0.to_vec();
    let mut h = span * T::from(1e-3).unwrap();
    let mut k: Vec<Vec<Complex<T>>> = Vec::with_capacity(7);
    let f64_of = |x: T| x.to_f64().unwrap_or(f64::NAN);
    for _ in 0..tol.max_steps {
        if (z1 - z) * dir <= T::zero() {
            return Ok(y);
        }
        if (z + h - z1) * dir > T::zero() {
            h = z1 - z;
        }
        k.clear();
        k.push(f(z, &y)?);
        for s in 1..7 {
            let ys: Vec<Complex<T>> = (0..y.len())
                .map(|i| {
                    let mut acc = y[i];
                    for (j, kj) in k.iter().enumerate() {
                        if tab.a[s][j] != T::zero() {
                            acc = acc + kj[i] * (h * tab.a[s][j]);
                        }
                    }
                    acc
                })
                .collect();
            k.push(f(z + h * tab.c[s], &ys)?);
        }
        let mut err = T::zero();
        let mut next = y.clone();
        for i in 0..y.len() {
            let mut d = Complex::new(T::zero(), T::zero());
            for s in 0..7 {
                next[i] = next[i] + k[s][i] * (h * tab.b5[s]);
                d = d + k[s][i] * (h * tab.e[s]);
            }
            let sc = tol.atol + tol.rtol * y[i].norm().max(next[i].norm());
            let r = d.norm() / sc;
            err = err + r * r;
        }
        let err = (err / T::from(y.len()).unwrap()).sqrt();
        if !err.is_finite() {
            return Err(Error::Integration { z: f64_of(z), message: "non-finite state".into() });
        }
        let safety = T::from(0.9).unwrap();
        let factor = if err == T::zero() {
            T::from(5.0).unwrap()
        } else {
            (safety * err.powf(T::from(-0.2).unwrap())).min(T::from(5.0).unwrap()).max(T::from(0.2).unwrap())
        };
        if err <= T::one() {
            z = z + h;
            y = next;
        }
        h = h * factor;
        if h.abs() < T::epsilon() * z.abs().max(T::one()) * T::from(16.0).unwrap() {
            return Err(Error::Integration { z: f64_of(z), message: "step size underflow".into() });
        }
    }
    Err(Error::Integration { z: f64_of(z), message: "too many steps".into() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use twofloat::TwoFloat;

    #[test]
    fn exponential_f64() {
        // y' = i y, y(0) = 1
        let f = |_: f64, y: &[Complex<f64>]| Ok(vec![y[0] * Complex::new(0.0, 1.0)]);
        let y = integrate(f, 0.0, &[Complex::new(1.0, 0.0)], 2.0, &Tolerances::default()).unwrap();
        let want = Complex::new(0.0, 2.0f64).exp();
        assert!((y[0] - want).norm() < 1e-9);
    }

    #[test]
    fn rational_solution_extended_precision() {
        // y' = -y², y(0) = 1 gives y(1) = 1/2 exactly
        let one = TwoFloat::from(1.0);
        let f = |_: TwoFloat, y: &[Complex<TwoFloat>]| Ok(vec![-y[0] * y[0]]);
        let tol = Tolerances { rtol: TwoFloat::from(1e-24), atol: TwoFloat::from(1e-30), max_steps: 1_000_000 };
        let y = integrate(f, TwoFloat::from(0.0), &[Complex::new(one, TwoFloat::from(0.0))], one, &tol).unwrap();
        let err = (y[0].re - TwoFloat::from(0.5)).abs();
        assert!(err < TwoFloat::from(1e-21), "{err:?}");
    }

    #[test]
    fn refined_division() {
        let third = refined_div(TwoFloat::from(1.0), TwoFloat::from(3.0));
        let r = third * TwoFloat::from(3.0) - TwoFloat::from(1.0);
        assert!(r.abs() < TwoFloat::from(1e-30), "{r:?}");
        let q = complex_div(Complex::new(1.0, 2.0), Complex::new(3.0, -1.0));
        assert!((q - Complex::new(0.1, 0.7)).norm() < 1e-15);
    }

    #[test]
    fn blow_up_is_reported() {
        // y' = y², y(0) = 1 explodes at z = 1
        let f = |_: f64, y: &[Complex<f64>]| Ok(vec![y[0] * y[0]]);
        let r = integrate(f, 0.0, &[Complex::new(1.0, 0.0)], 2.0, &Tolerances::default());
        assert!(matches!(r, Err(Error::Integration { z, .. }) if z > 0.9 && z <= 1.0));
    }
}
