//! Convergence diagnostics for the coefficient sequence of
//! u = λ₀φ^α + … + φ Σ α_n φⁿ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::magnitude::{magnitude, BigFloat};
use crate::painleve::PainleveExpansion;
use crate::symcore::Symbol;
use num_traits::One;
use crate::{Error, Expr, GaussRational};

/// Default working precision (bits) of the numeric layer.
pub const DEFAULT_PREC: u32 = 150;

#[derive(Clone, Debug, PartialEq)]
pub struct SeqEntry {
    pub n: usize,
    /// Symbolic coefficient (monomial in the parameters for travelling waves).
    pub exact: Expr,
    /// Value at the bindings.
    pub value: GaussRational,
    pub magnitude: BigFloat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientSequence {
    pub entries: Vec<SeqEntry>,
    pub bindings: BTreeMap<String, GaussRational>,
    pub prec: u32,
}

fn evaluate(e: &Expr, bindings: &BTreeMap<String, GaussRational>) -> Result<GaussRational, Error> {
    e.eval_with(&|s| match s {
        Symbol::Param(n) => bindings.get(&**n).cloned(),
        Symbol::Imag => None,
        _ => None,
    })
    .ok_or_else(|| Error::Unsupported(format!("cannot evaluate {e} with the given bindings")))
}

impl CoefficientSequence {
    /// α_n is the coefficient of φ^(n+1), n ≥ 1, of the truncated series.
    pub fn from_expansion(
        x: &PainleveExpansion,
        bindings: &BTreeMap<String, GaussRational>,
        prec: u32,
    ) -> Result<Self, Error> {
        let mut entries = Vec::new();
        for n in 1.. {
            let k = n as i64 + 1 - x.alpha;
            let Some(c) = x.coefficients.get(k as usize) else { break };
            let value = evaluate(c, bindings)?;
            let magnitude = magnitude(&value, prec);
            entries.push(SeqEntry { n, exact: c.clone(), value, magnitude });
        }
        Ok(Self { entries, bindings: bindings.clone(), prec })
    }

    /// Sequence α_1, α_2, … of plain numbers.
    pub fn from_values(values: Vec<GaussRational>, prec: u32) -> Self {
        let entries = values
            .into_iter()
            .enumerate()
            .map(|(k, v)| SeqEntry {
                n: k + 1,
                exact: Expr::constant(v.clone()),
                magnitude: magnitude(&v, prec),
                value: v,
            })
            .collect();
        Self { entries, bindings: BTreeMap::new(), prec }
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &SeqEntry> {
        self.entries.iter().filter(|e| !e.value.is_zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum RootVerdict {
    ConvergentIndication,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootTest {
    /// (n, |α_n|^(1/n)) over the nonzero entries.
    pub values: Vec<(usize, f64)>,
    /// Least-squares slope over the second half of the values.
    pub tail_slope: f64,
    pub tail_estimate: f64,
    pub strictly_decreasing: bool,
    pub verdict: RootVerdict,
}

/// Minimum number of nonzero entries for a verdict.
pub const ROOT_TEST_MIN: usize = 10;

/// Cauchy root test on the nonzero entries. The verdict is an indication
/// only: convergent when the tail of |α_n|^(1/n) stays below 1 and does not
/// increase.
pub fn root_test(seq: &CoefficientSequence) -> RootTest {
    let values: Vec<(usize, f64)> = seq.nonzero().map(|e| (e.n, (e.magnitude.ln() / e.n as f64).exp())).collect();
    let strictly_decreasing = values.len() >= 2 && values.windows(2).all(|w| w[1].1 < w[0].1);
    let tail = &values[values.len() / 2..];
    let tail_slope = slope(tail);
    let tail_estimate = values.last().map_or(f64::NAN, |v| v.1);
    let scale = tail.iter().map(|v| v.1.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let flat = tail_slope <= 1e-9 * scale;
    let verdict = if values.len() >= ROOT_TEST_MIN && tail_estimate < 1.0 && flat {
        RootVerdict::ConvergentIndication
    } else {
        RootVerdict::Inconclusive
    };
    RootTest { values, tail_slope, tail_estimate, strictly_decreasing, verdict }
}

fn slope(pts: &[(usize, f64)]) -> f64 {
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 as f64 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    /// Index m = 3n − ν.
    pub index: usize,
    pub n: usize,
    pub nu: usize,
    pub re: String,
    pub im: String,
    /// Numerators p of the real and imaginary parts (parameter powers
    /// evaluated at the bindings).
    pub p_re: f64,
    pub p_im: f64,
    pub rhs_re: f64,
    pub rhs_im: f64,
    pub holds_re: bool,
    pub holds_im: bool,
}

impl BoundEntry {
    pub fn holds(&self) -> bool {
        self.holds_re && self.holds_im
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub entries: Vec<BoundEntry>,
    /// Largest index up to which every entry holds.
    pub holds_up_to: usize,
    pub all_hold: bool,
}

fn ln_abs(r: &BigRational) -> f64 {
    BigFloat::from_rational(&r.abs(), 64).ln()
}

/// Checks |Re α_m| ≤ |Re p_m| / (2^(3n+4−ν) Γ(m/2) |κ|^(2n−1)) for m = 3n − ν
/// (and the same with imaginary parts) up to index `order`. The numerator
/// p_m is read from the exact coefficient c·ω^a·κ^b as num(Re c)·|ω|^a.
pub fn bound_check(seq: &CoefficientSequence, order: usize) -> BoundReport {
    let kappa = seq.bindings.get("kappa").cloned().unwrap_or_else(GaussRational::one);
    let omega = seq.bindings.get("omega").cloned().unwrap_or_else(GaussRational::one);
    let ln_kappa = magnitude(&kappa, 64).ln();
    let ln_omega = magnitude(&omega, 64).ln();
    let mut entries = Vec::new();
    for e in seq.entries.iter().filter(|e| e.n <= order) {
        let m = e.n;
        let n = m.div_ceil(3);
        let nu = 3 * n - m;
        let (scalar, ln_params) = match e.exact.as_monomial() {
            Some((c, mono)) => {
                let a = mono.exponent_of(&Symbol::param("omega")).as_int().unwrap_or(0);
                (c.clone(), a as f64 * ln_omega)
            }
            None => (e.value.clone(), 0.0),
        };
        let denominator =
            (3 * n + 4 - nu) as f64 * std::f64::consts::LN_2 + ln_gamma(m as f64 / 2.0) + (2 * n - 1) as f64 * ln_kappa;
        let part = |exact: &BigRational, value: &BigRational| -> (f64, f64, bool) {
            if value.is_zero() {
                return (0.0, 0.0, true);
            }
            let p: BigInt = exact.numer().abs();
            let ln_p = ln_abs(&BigRational::from_integer(p)) + ln_params;
            let ln_rhs = ln_p - denominator;
            (ln_p.exp(), ln_rhs.exp(), ln_abs(value) <= ln_rhs)
        };
        let (p_re, rhs_re, holds_re) = part(&scalar.re, &e.value.re);
        let (p_im, rhs_im, holds_im) = part(&scalar.im, &e.value.im);
        entries.push(BoundEntry {
            index: m,
            n,
            nu,
            re: e.value.re.to_string(),
            im: e.value.im.to_string(),
            p_re,
            p_im,
            rhs_re,
            rhs_im,
            holds_re,
            holds_im,
        });
    }
    let holds_up_to = entries.iter().take_while(|e| e.holds()).last().map_or(0, |e| e.index);
    let all_hold = entries.iter().all(BoundEntry::holds);
    BoundReport { entries, holds_up_to, all_hold }
}

/// Γ(n/2) / (√(2π) e^(−n/2) (n/2)^((n−1)/2)).
pub fn stirling_ratio(n: f64) -> f64 {
    let z = n / 2.0;
    let ln_approx = 0.5 * (2.0 * std::f64::consts::PI).ln() - z + (n - 1.0) / 2.0 * z.ln();
    (ln_gamma(z) - ln_approx).exp()
}

/// One CSV row per entry: n, re_num, re_den, im_num, im_den, abs,
/// abs_nth_root, bound_rhs, holds.
pub fn csv_rows(seq: &CoefficientSequence, bound: &BoundReport) -> Vec<[String; 9]> {
    seq.entries
        .iter()
        .map(|e| {
            let b = bound.entries.iter().find(|b| b.index == e.n);
            let abs = e.magnitude.to_f64();
            let root = if e.magnitude.is_zero() { 0.0 } else { (e.magnitude.ln() / e.n as f64).exp() };
            let rhs = b.map_or(f64::NAN, |b| if e.value.re.is_zero() { b.rhs_im } else { b.rhs_re });
            [
                e.n.to_string(),
                e.value.re.numer().to_string(),
                e.value.re.denom().to_string(),
                e.value.im.numer().to_string(),
                e.value.im.denom().to_string(),
                format!("{abs:e}"),
                format!("{root:.12}"),
                format!("{rhs:e}"),
                b.map_or(true, BoundEntry::holds).to_string(),
            ]
        })
        .collect()
}
