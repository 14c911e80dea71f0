//! Painlevé analysis: dominant balance, resonances, Laurent expansions
//! about a movable singular manifold, and classification.

pub mod balance;
pub mod classify;
pub mod leading;
pub mod poly;
pub mod resonance;
pub mod residual;
pub mod series;

pub use balance::{dominant_balance, Balance, Constraint};
pub use classify::{classify, Classification, Verdict};
pub use resonance::{integrality, resonance_spectrum, IntegralSolution, Integrality, Remainder, ResonanceReport};
pub use residual::{residual_check, ResidualReport};
pub use series::{expand_balance, reduce_phi, Ansatz, ExpandOptions, PainleveExpansion, Step};

use crate::frontend::PDESystem;
use crate::Error;

/// Lowest index beyond which general-manifold expansions are refused; past
/// the first resonance only the reduced ansatz is supported.
pub const GENERAL_MIN_CAP: usize = 4;

/// Expansion for the first admissible balance.
pub fn expand(system: &PDESystem, opts: &ExpandOptions) -> Result<PainleveExpansion, Error> {
    let balances = dominant_balance(system)?;
    let b = balances.first().ok_or_else(|| Error::InvalidSystem("no admissible dominant balance".into()))?;
    if opts.ansatz == Ansatz::General {
        let res = resonance_spectrum(system, b)?;
        let cap = res.first_positive(None).map_or(GENERAL_MIN_CAP, |r| (r as usize).max(GENERAL_MIN_CAP));
        if opts.order > cap {
            return Err(Error::Unsupported(format!(
                "general-manifold expansion is limited to order {cap}; use the reduced ansatz"
            )));
        }
    }
    expand_balance(system, b, opts)
}

/// Everything the test produces for one system.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub balances: Vec<Balance>,
    pub resonances: Option<ResonanceReport>,
    pub integrality: Option<Integrality>,
    pub expansion: Option<PainleveExpansion>,
    pub verdict: Verdict,
}

/// Runs balance, resonances and (for concrete systems) the expansion up to
/// the largest positive integer resonance or `opts.order`, whichever is
/// larger, then classifies.
pub fn analyse(system: &PDESystem, opts: &ExpandOptions) -> Result<Analysis, Error> {
    let balances = dominant_balance(system)?;
    let order = system.order();
    let Some(b) = balances.first() else {
        let verdict = classify(order, false, None, None, None);
        return Ok(Analysis { balances, resonances: None, integrality: None, expansion: None, verdict });
    };
    let res = resonance_spectrum(system, b)?;
    let integ = integrality(&res);
    let concrete = b.leading_exponent.as_int().is_some() && !system.has_slots();
    let expansion = if concrete {
        let top = res.integer_roots_at(None).into_iter().max().unwrap_or(0).max(0) as usize;
        let mut o = opts.clone();
        o.order = o.order.max(top);
        if o.ansatz == Ansatz::General {
            o.order = o.order.min(top.max(GENERAL_MIN_CAP));
        }
        Some(expand_balance(system, b, &o)?)
    } else {
        None
    };
    let verdict = classify(order, true, Some(&res), None, expansion.as_ref());
    Ok(Analysis { balances, resonances: Some(res), integrality: Some(integ), expansion, verdict })
}
