//! Verdict of the Painlevé test.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::resonance::ResonanceReport;
use super::series::PainleveExpansion;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Classification {
    /// Single-valued expansion with as many arbitrary functions as the order.
    Passes,
    /// A consistent expansion exists but with too few arbitrary functions.
    Defective,
    /// No admissible balance or a failed compatibility condition.
    Fails,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Passes => "PASSES",
            Classification::Defective => "DEFECTIVE",
            Classification::Fails => "FAILS",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub classification: Classification,
    /// Arbitrary functions in the expansion (the manifold counts as one).
    pub arbitrary: usize,
    pub order: u32,
    pub justification: Vec<String>,
}

/// Combines the balance, resonance and expansion results. `order` is the
/// differential order of the equation.
pub fn classify(
    order: u32,
    has_balance: bool,
    resonances: Option<&ResonanceReport>,
    eps: Option<i64>,
    expansion: Option<&PainleveExpansion>,
) -> Verdict {
    let mut why = Vec::new();
    let fails = |mut why: Vec<String>, msg: String| {
        why.push(msg);
        Verdict { classification: Classification::Fails, arbitrary: 0, order, justification: why }
    };
    if !has_balance {
        return fails(why, "no admissible dominant balance".into());
    }
    let positive: Vec<i64> = resonances
        .map(|r| r.integer_roots_at(eps).into_iter().filter(|r| *r > 0).collect())
        .unwrap_or_default();
    if let Some(r) = resonances {
        if r.has_universal_minus_one() {
            why.push("resonance r = -1 present".into());
        }
        why.push(format!("positive integer resonances: {positive:?}"));
    }
    let Some(x) = expansion else {
        why.push("no expansion computed".into());
        return Verdict { classification: Classification::Defective, arbitrary: 1, order, justification: why };
    };
    if let Some(j) = x.failure {
        return fails(why, format!("compatibility condition at index {j} fails"));
    }
    let compatible = x.compatible_resonances();
    for j in &compatible {
        why.push(format!("compatibility condition at index {j} holds"));
    }
    let reached = x.coefficients.len() as i64 - 1;
    let pending: Vec<i64> = positive.iter().copied().filter(|r| *r > reached).collect();
    if !pending.is_empty() {
        why.push(format!("resonances {pending:?} lie beyond the computed order {reached}"));
    }
    let arbitrary = compatible.len() + 1;
    let classification = if arbitrary as u32 == order && pending.is_empty() {
        why.push(format!("{arbitrary} arbitrary functions for an equation of order {order}"));
        Classification::Passes
    } else {
        why.push(format!("only {arbitrary} arbitrary functions for an equation of order {order}"));
        Classification::Defective
    };
    Verdict { classification, arbitrary, order, justification: why }
}
