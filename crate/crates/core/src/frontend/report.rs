//! Serializable run reports. Exact values are stored as strings so that no
//! float ever stands in for a coefficient.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::analysis::{BoundReport, CoefficientSequence, Comparison, RootTest, RootVerdict};
use crate::painleve::{Analysis, Balance, Integrality, PainleveExpansion, Remainder, ResonanceReport, Verdict};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub model: String,
    pub mode: String,
    pub balance: Vec<BalanceRecord>,
    pub resonances: Option<ResonanceRecord>,
    pub coefficients: Vec<CoefficientRecord>,
    pub verdict: Option<Verdict>,
    pub diagnostics: Option<Diagnostics>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalanceRecord {
    pub alpha: i64,
    pub alpha_formula: String,
    pub constraints: Vec<String>,
    pub leading_exponent: String,
    pub lambda0: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRecord {
    pub polynomial: String,
    pub integer_roots: Vec<i64>,
    /// Roots valid for every deformation value.
    pub universal: Vec<String>,
    /// Remaining factor, if any, with its reduced discriminant when quadratic.
    pub remainder: Option<String>,
    pub discriminant: Option<String>,
    pub universal_minus_one: bool,
    pub integrality: Option<Integrality>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRecord {
    pub index: usize,
    pub power: i64,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub bindings: Vec<(String, String)>,
    pub rows: Vec<DiagnosticRow>,
    pub root_verdict: RootVerdict,
    pub strictly_decreasing: bool,
    pub tail_estimate: Option<f64>,
    pub bound_holds_up_to: usize,
    pub bound_all_hold: bool,
    pub numeric_deviation: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRow {
    pub n: usize,
    pub value: String,
    pub abs: f64,
    pub abs_nth_root: f64,
    pub bound_rhs: Option<f64>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// SHA-256 of the model source, hex encoded.
    pub input_hash: String,
    pub engine_version: String,
    pub mode: String,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl BalanceRecord {
    pub fn from_balance(b: &Balance) -> Self {
        Self {
            alpha: b.alpha,
            alpha_formula: b.alpha_formula.clone(),
            constraints: b.constraints.iter().map(|c| c.to_string()).collect(),
            leading_exponent: b.leading_exponent.to_string(),
            lambda0: b.lambda0.to_string(),
        }
    }
}

impl ResonanceRecord {
    pub fn from_report(r: &ResonanceReport, integrality: Option<&Integrality>, eps: Option<i64>) -> Self {
        let (remainder, discriminant) = match &r.remainder {
            Remainder::None => (None, None),
            Remainder::Linear { root } => (Some(format!("r - ({root})")), None),
            Remainder::Quadratic { linear, constant, reduced_discriminant } => {
                (Some(format!("r^2 + ({linear})*r + ({constant})")), Some(reduced_discriminant.to_string()))
            }
            Remainder::Other(e) => (Some(e.to_string()), None),
        };
        let integer_roots = match eps {
            Some(_) => r.integer_roots_at(eps),
            None => r.integer_roots(),
        };
        Self {
            polynomial: r.polynomial.to_string(),
            integer_roots,
            universal: r.universal.iter().map(|q| q.to_string()).collect(),
            remainder,
            discriminant,
            universal_minus_one: r.has_universal_minus_one(),
            integrality: integrality.cloned(),
        }
    }
}

pub fn coefficient_records(x: &PainleveExpansion) -> Vec<CoefficientRecord> {
    x.coefficients
        .iter()
        .enumerate()
        .map(|(k, c)| CoefficientRecord { index: k, power: x.power(k), value: c.to_string() })
        .collect()
}

impl Diagnostics {
    pub fn new(seq: &CoefficientSequence, root: &RootTest, bound: &BoundReport, cmp: Option<&Comparison>) -> Self {
        let rows = seq
            .entries
            .iter()
            .map(|e| {
                let b = bound.entries.iter().find(|b| b.index == e.n);
                let abs_nth_root =
                    if e.magnitude.is_zero() { 0.0 } else { (e.magnitude.ln() / e.n as f64).exp() };
                DiagnosticRow {
                    n: e.n,
                    value: e.value.to_string(),
                    abs: e.magnitude.to_f64(),
                    abs_nth_root,
                    bound_rhs: b.and_then(|b| finite(if num_traits::Zero::is_zero(&e.value.re) { b.rhs_im } else { b.rhs_re })),
                    holds: b.map_or(true, |b| b.holds()),
                }
            })
            .collect();
        Self {
            bindings: seq.bindings.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            rows,
            root_verdict: root.verdict,
            strictly_decreasing: root.strictly_decreasing,
            tail_estimate: finite(root.tail_estimate),
            bound_holds_up_to: bound.holds_up_to,
            bound_all_hold: bound.all_hold,
            numeric_deviation: cmp.and_then(|c| finite(c.max_rel_deviation)),
        }
    }
}

impl Report {
    pub fn new(model: &str, mode: &str, source: &str) -> Self {
        let hash = Sha256::digest(source.as_bytes());
        let input_hash = hash.iter().fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        Self {
            model: model.to_string(),
            mode: mode.to_string(),
            balance: Vec::new(),
            resonances: None,
            coefficients: Vec::new(),
            verdict: None,
            diagnostics: None,
            provenance: Provenance {
                input_hash,
                engine_version: env!("CARGO_PKG_VERSION").to_string(),
                mode: mode.to_string(),
            },
        }
    }

    pub fn with_analysis(mut self, a: &Analysis, eps: Option<i64>) -> Self {
        self.balance = a.balances.iter().map(BalanceRecord::from_balance).collect();
        self.resonances = a.resonances.as_ref().map(|r| ResonanceRecord::from_report(r, a.integrality.as_ref(), eps));
        if let Some(x) = &a.expansion {
            self.coefficients = coefficient_records(x);
        }
        self.verdict = Some(a.verdict.clone());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    /// Plain-text rendering for terminals.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "model: {} ({})", self.model, self.mode);
        for b in &self.balance {
            let _ = writeln!(out, "balance: alpha = {} [{}]", b.alpha, b.alpha_formula);
            for c in &b.constraints {
                let _ = writeln!(out, "  constraint: {c}");
            }
            let _ = writeln!(out, "  lambda0 = {}", b.lambda0);
        }
        if self.balance.is_empty() && (self.mode == "balance" || self.verdict.is_some()) {
            let _ = writeln!(out, "balance: none");
        }
        if let Some(r) = &self.resonances {
            let _ = writeln!(out, "resonance polynomial: {}", r.polynomial);
            let roots: Vec<String> = r.integer_roots.iter().map(|k| k.to_string()).collect();
            let _ = writeln!(out, "integer resonances: {{{}}}", roots.join(", "));
            if let Some(rem) = &r.remainder {
                let _ = writeln!(out, "remaining factor: {rem}");
            }
            if let Some(d) = &r.discriminant {
                let _ = writeln!(out, "reduced discriminant: {d}");
            }
            match &r.integrality {
                Some(Integrality::Always) => {
                    let _ = writeln!(out, "integral for every deformation value");
                }
                Some(Integrality::Finite { solutions, method }) => {
                    let eps: Vec<String> = solutions.iter().map(|s| s.eps.to_string()).collect();
                    let list = if eps.is_empty() { "no value".to_string() } else { eps.join(", ") };
                    let _ = writeln!(out, "integral only for: {list} ({method})");
                }
                Some(Integrality::Unresolved { reason }) => {
                    let _ = writeln!(out, "integrality unresolved: {reason}");
                }
                None => {}
            }
        }
        for c in &self.coefficients {
            let _ = writeln!(out, "phi^{}: {}", c.power, c.value);
        }
        if let Some(d) = &self.diagnostics {
            let _ = writeln!(out, "root test: {:?}, strictly decreasing: {}", d.root_verdict, d.strictly_decreasing);
            let _ = writeln!(out, "bound holds up to n = {} (all: {})", d.bound_holds_up_to, d.bound_all_hold);
            if let Some(dev) = d.numeric_deviation {
                let _ = writeln!(out, "max relative deviation: {dev:e}");
            }
        }
        if let Some(v) = &self.verdict {
            let _ = writeln!(out, "verdict: {} ({} of {} arbitrary)", v.classification, v.arbitrary, v.order);
            for j in &v.justification {
                let _ = writeln!(out, "  {j}");
            }
        }
        out
    }
}
