//! Truncated travelling-wave series against direct integration of the
//! reduced ODE.

use std::collections::BTreeMap;

use num_complex::Complex;
use num_traits::Float;
use serde::Serialize;

use super::ode::{complex_div, integrate, refined_div, Tolerances};
use super::travelling::{reduce_travelling, solve_highest, ZETA};
use crate::painleve::{Ansatz, PainleveExpansion};
use crate::frontend::PDESystem;
use crate::symcore::Symbol;
use crate::{Error, Expr, GaussRational};

#[derive(Clone, Debug)]
pub struct CompareOptions<T> {
    /// Interval of φ = z on the real axis.
    pub window: (T, T),
    /// Points closer than this to the pole are refused.
    pub floor: T,
    /// Upper limit for |φ|, e.g. a radius estimate from the root test.
    pub radius: Option<T>,
    pub samples: usize,
    pub tol: Tolerances<T>,
    pub bindings: BTreeMap<String, GaussRational>,
}

impl CompareOptions<f64> {
    pub fn new(bindings: BTreeMap<String, GaussRational>) -> Self {
        Self { window: (0.1, 0.5), floor: 0.05, radius: None, samples: 40, tol: Tolerances::default(), bindings }
    }
}

impl CompareOptions<twofloat::TwoFloat> {
    /// Same window as the f64 defaults, with double-double tolerances.
    pub fn extended(bindings: BTreeMap<String, GaussRational>) -> Self {
        use twofloat::TwoFloat;
        Self {
            window: (TwoFloat::from(0.1), TwoFloat::from(0.5)),
            floor: TwoFloat::from(0.05),
            radius: None,
            samples: 40,
            tol: Tolerances::default(),
            bindings,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Comparison {
    pub max_rel_deviation: f64,
    /// (φ, relative deviation) at the sample points.
    pub samples: Vec<(f64, f64)>,
    pub order: usize,
}

fn to_c<T: Float>(g: &GaussRational) -> Complex<T> {
    g.to_complex()
}

/// A polynomial in ζ, ζ′, … with numeric coefficients.
struct Compiled<T> {
    terms: Vec<(Complex<T>, Vec<(usize, i32)>)>,
}

impl<T: Float> Compiled<T> {
    fn new(e: &Expr, bindings: &BTreeMap<String, GaussRational>) -> Result<Self, Error> {
        let mut terms = Vec::new();
        for (m, c) in e.terms() {
            let mut coeff = to_c::<T>(c);
            let mut vars = Vec::new();
            for (s, x) in m.factors() {
                let k = x.as_int().ok_or_else(|| Error::Unsupported(format!("symbolic power of {s}")))? as i32;
                match s {
                    Symbol::Jet(j) if &*j.field == ZETA => vars.push((j.orders[2] as usize, k)),
                    Symbol::Param(n) => {
                        let v = bindings.get(&**n).ok_or_else(|| Error::Unsupported(format!("no value for {n}")))?;
                        let pw = to_c::<T>(v).powi(k.abs());
                        coeff = if k >= 0 { coeff * pw } else { complex_div(coeff, pw) };
                    }
                    _ => return Err(Error::Unsupported(format!("cannot evaluate {s} numerically"))),
                }
            }
            terms.push((coeff, vars));
        }
        Ok(Self { terms })
    }

    fn eval(&self, y: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (c, vars) in &self.terms {
            let mut t = *c;
            for (i, k) in vars {
                t = t * y[*i].powi(*k);
            }
            acc = acc + t;
        }
        acc
    }
}

/// d^m/dφ^m of Σ c_k φ^(k+α).
fn series_derivative<T: Float>(c: &[Complex<T>], alpha: i64, m: u32, phi: T) -> Complex<T> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for (k, ck) in c.iter().enumerate() {
        let p = k as i64 + alpha;
        let mut f = T::one();
        for q in 0..m as i64 {
            f = f * T::from(p - q).unwrap();
        }
        if f != T::zero() {
            let e = p - m as i64;
            let pw = if e >= 0 { phi.powi(e as i32) } else { refined_div(T::one(), phi.powi(-e as i32)) };
            acc = acc + *ck * (f * pw);
        }
    }
    acc
}

/// Integrates the travelling-wave ODE across the window starting from the
/// truncated series and returns the largest relative deviation between the
/// two. Works at the precision of `T`.
///
/// Integration runs towards the pole: perturbations along resonant
/// directions behave like φ^r with r > 0 and would otherwise be amplified
/// by (b/a)^r across the window.
pub fn numeric_compare<T: Float>(
    expansion: &PainleveExpansion,
    system: &PDESystem,
    opts: &CompareOptions<T>,
) -> Result<Comparison, Error> {
    if expansion.ansatz != Ansatz::Travelling {
        return Err(Error::Unsupported("numeric comparison needs a travelling-wave expansion".into()));
    }
    let (a, b) = opts.window;
    let f = |x: T| x.to_f64().unwrap_or(f64::NAN);
    let order = expansion.coefficients.len() - 1;
    if a == b {
        return Ok(Comparison { max_rel_deviation: 0.0, samples: vec![(f(a), 0.0)], order });
    }
    for end in [a, b] {
        if end.abs() < opts.floor {
            return Err(Error::Unsupported(format!("window end {} is closer to the pole than {}", f(end), f(opts.floor))));
        }
        if opts.radius.is_some_and(|r| end.abs() >= r) {
            return Err(Error::Unsupported(format!("window end {} exceeds the convergence radius", f(end))));
        }
    }
    if a.signum() != b.signum() {
        return Err(Error::Unsupported("window crosses the pole".into()));
    }
    let ode = reduce_travelling(system, &Expr::param("omega"))?;
    let k = ode.order;
    let (lead, rest) = solve_highest(&ode.ode, k)?;
    let lead = Compiled::<T>::new(&lead, &opts.bindings)?;
    let rest = Compiled::<T>::new(&rest, &opts.bindings)?;

    let mut coeffs = Vec::new();
    for c in &expansion.coefficients {
        let v = c
            .eval_with(&|s| match s {
                Symbol::Param(n) => opts.bindings.get(&**n).cloned(),
                _ => None,
            })
            .ok_or_else(|| Error::Unsupported(format!("cannot evaluate coefficient {c}")))?;
        coeffs.push(to_c::<T>(&v));
    }
    let alpha = expansion.alpha;
    let state = |phi: T| -> Vec<Complex<T>> { (0..k).map(|m| series_derivative(&coeffs, alpha, m, phi)).collect() };

    let rhs = |_: T, y: &[Complex<T>]| -> Result<Vec<Complex<T>>, Error> {
        let mut d: Vec<Complex<T>> = y[1..].to_vec();
        let den = lead.eval(y);
        if den.norm() == T::zero() {
            return Err(Error::Integration { z: f64::NAN, message: "singular highest-derivative coefficient".into() });
        }
        d.push(-complex_div(rest.eval(y), den));
        Ok(d)
    };
    let mut rhs = rhs;
    let (a, b) = if a.abs() >= b.abs() { (a, b) } else { (b, a) };
    let mut y = state(a);
    let mut z = a;
    let n = opts.samples.max(1);
    let mut samples = vec![(f(a), 0.0)];
    let mut worst = 0.0f64;
    for s in 1..=n {
        let target = a + (b - a) * T::from(s).unwrap() / T::from(n).unwrap();
        y = integrate(&mut rhs, z, &y, target, &opts.tol)?;
        z = target;
        let want = series_derivative(&coeffs, alpha, 0, z);
        let dev = f(refined_div((y[0] - want).norm(), want.norm()));
        worst = worst.max(dev);
        samples.push((f(z), dev));
    }
    Ok(Comparison { max_rel_deviation: worst, samples, order })
}
