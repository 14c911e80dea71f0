//! Laurent expansion u = Σ λ_j φ^(j+α) about a movable singular manifold.
//!
//! Every field jet is carried as its own Laurent series; the jet of a jet is
//! obtained by the recurrence J[i] = ∂ᵥP[i−1] + (o_P + i)·φᵥ·P[i], so the
//! coefficient of φ^(lead+j) in the equation is assembled by convolution
//! without ever forming the full substituted expression.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::balance::Balance;
use super::leading::TermShape;
use crate::frontend::PDESystem;
use crate::symcore::{differentiate, substitute, Bindings, DiffMode, Exponent, Symbol, Var};
use crate::{Error, Expr};

/// Form of the singular manifold and of the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Ansatz {
    /// Arbitrary φ(x, t), λ_j(x, t).
    General,
    /// φ = x − ξ(t), λ_j(t).
    #[default]
    Reduced,
    /// φ = x − ωt, constant λ_j (apart from free resonance data).
    Travelling,
}

impl Ansatz {
    pub fn diff_mode(self) -> DiffMode {
        match self {
            Ansatz::General => DiffMode::General,
            _ => DiffMode::Reduced,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Ansatz::General => "general",
            Ansatz::Reduced => "reduced",
            Ansatz::Travelling => "travelling",
        }
    }

    /// ∂ᵥφ in this ansatz.
    pub fn phi_derivative(self, v: Var) -> Expr {
        match (self, v) {
            (Ansatz::General, Var::X) => Expr::jet("phi", 1, 0),
            (Ansatz::General, _) => Expr::jet("phi", 0, 1),
            (_, Var::X) => Expr::one(),
            (Ansatz::Reduced, _) => -Expr::symbol(Symbol::time_fn("xi", 1)),
            (Ansatz::Travelling, _) => -Expr::param("omega"),
        }
    }
}

/// Rewrites φ-jets (and ξ for travelling waves) according to the ansatz.
pub fn reduce_phi(e: &Expr, ansatz: Ansatz) -> Result<Expr, Error> {
    if ansatz == Ansatz::General {
        return Ok(e.clone());
    }
    let mut b = Bindings::new();
    for s in e.symbols() {
        let value = match &s {
            Symbol::Jet(j) if &*j.field == "phi" => match (j.orders[0], j.orders[1]) {
                (0, 0) => continue,
                (1, 0) => Expr::one(),
                (0, k) => match ansatz {
                    Ansatz::Travelling if k == 1 => -Expr::param("omega"),
                    Ansatz::Travelling => Expr::zero(),
                    _ => -Expr::symbol(Symbol::time_fn("xi", k)),
                },
                _ => Expr::zero(),
            },
            Symbol::TimeFn { name, order } if &**name == "xi" && ansatz == Ansatz::Travelling && *order >= 1 => {
                if *order == 1 {
                    Expr::param("omega")
                } else {
                    Expr::zero()
                }
            }
            _ => continue,
        };
        b.insert(s, value);
    }
    Ok(substitute(e, &b)?)
}

/// Settings for [`expand`].
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ExpandOptions {
    pub ansatz: Ansatz,
    /// Highest coefficient index N.
    pub order: usize,
    /// Values for coefficients at resonances; unlisted ones stay free.
    pub choices: BTreeMap<u32, Expr>,
}

/// One step of the recursion: g·λ_j + f = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Step {
    pub index: u32,
    pub g: Expr,
    /// Residue at a resonance (must vanish); zero otherwise.
    pub obstruction: Expr,
    pub resonant: bool,
}

impl Step {
    pub fn compatible(&self) -> bool {
        !self.resonant || self.obstruction.is_zero()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PainleveExpansion {
    pub ansatz: Ansatz,
    pub alpha: i64,
    /// Power of φ of the dominant terms of the equation.
    pub lead: i64,
    /// λ_0 … λ_N (fewer when a compatibility condition fails).
    pub coefficients: Vec<Expr>,
    pub steps: Vec<Step>,
    /// Resonance indices whose coefficient stayed arbitrary.
    pub free: Vec<u32>,
    /// Resonance indices fixed to a chosen value.
    pub bound: Vec<u32>,
    /// First index whose compatibility condition failed.
    pub failure: Option<u32>,
}

impl PainleveExpansion {
    pub fn power(&self, k: usize) -> i64 {
        k as i64 + self.alpha
    }

    /// The truncated series Σ λ_k φ^(k+α) with φ a plain symbol.
    pub fn truncated(&self) -> Expr {
        let phi = Symbol::jet("phi", 0, 0);
        let mut out = Expr::zero();
        for (k, c) in self.coefficients.iter().enumerate() {
            out = out + c * &Expr::symbol_pow(phi.clone(), Exponent::Int(self.power(k)));
        }
        out
    }

    /// Resonances that passed their compatibility condition.
    pub fn compatible_resonances(&self) -> Vec<u32> {
        self.steps.iter().filter(|s| s.resonant && s.compatible()).map(|s| s.index).collect()
    }
}

type JetKey = (u32, u32);

struct Engine {
    ansatz: Ansatz,
    alpha: i64,
    lead: i64,
    terms: Vec<(Expr, Vec<(JetKey, i64)>, i64)>,
    jets: Vec<(JetKey, Option<(JetKey, Var)>)>,
    series: BTreeMap<JetKey, Vec<Expr>>,
}

fn total(j: JetKey) -> i64 {
    (j.0 + j.1) as i64
}

impl Engine {
    fn new(system: &PDESystem, alpha: i64, lead: i64, ansatz: Ansatz) -> Result<Self, Error> {
        let mut terms = Vec::new();
        let mut needed: Vec<JetKey> = vec![(0, 0)];
        for (m, c) in system.equation.terms() {
            let s = TermShape::new(m, c, &system.field)?;
            if !s.slots.is_empty() {
                return Err(Error::Unsupported("series expansion needs a concrete deformation".into()));
            }
            let jets: Vec<(JetKey, i64)> = s.jets.iter().map(|(k, p)| (*k, *p)).collect();
            let offset = jets.iter().map(|(k, p)| p * (alpha - total(*k))).sum();
            for (k, _) in &jets {
                let mut cur = *k;
                loop {
                    if !needed.contains(&cur) {
                        needed.push(cur);
                    }
                    match cur {
                        (0, 0) => break,
                        (dx, 0) => cur = (dx - 1, 0),
                        (dx, dt) => cur = (dx, dt - 1),
                    }
                }
            }
            terms.push((s.prefactor(), jets, offset));
        }
        needed.sort_by_key(|k| (total(*k), k.1));
        let jets = needed
            .into_iter()
            .map(|k| {
                let parent = match k {
                    (0, 0) => None,
                    (dx, 0) => Some(((dx - 1, 0), Var::X)),
                    (dx, dt) => Some(((dx, dt - 1), Var::T)),
                };
                (k, parent)
            })
            .collect::<Vec<_>>();
        let series = jets.iter().map(|(k, _)| (*k, Vec::new())).collect();
        Ok(Self { ansatz, alpha, lead, terms, jets, series })
    }

    /// Fills index j of every jet series from u[j].
    fn fill(&mut self, j: usize, uj: Expr) -> Result<(), Error> {
        let mode = self.ansatz.diff_mode();
        for (k, parent) in self.jets.clone() {
            let value = match parent {
                None => uj.clone(),
                Some((p, v)) => {
                    let ps = &self.series[&p];
                    let o = self.alpha - total(p) + j as i64;
                    let mut val = &(&Expr::int(o) * &self.ansatz.phi_derivative(v)) * &ps[j];
                    if j >= 1 {
                        val = val + differentiate(&ps[j - 1], v, 1, mode)?;
                    }
                    val
                }
            };
            let s = self.series.get_mut(&k).expect("jet registered");
            s.truncate(j);
            s.push(value);
        }
        Ok(())
    }

    fn substitute_index(&mut self, j: usize, b: &Bindings<crate::GaussRational>) -> Result<(), Error> {
        for s in self.series.values_mut() {
            s[j] = substitute(&s[j], b)?;
        }
        Ok(())
    }

    /// Coefficient of φ^(lead+j) in the equation.
    fn residual(&self, j: usize) -> Expr {
        let mut out = Expr::zero();
        for (pre, jets, offset) in &self.terms {
            let t = self.lead + j as i64 - offset;
            if t < 0 {
                continue;
            }
            let t = t as usize;
            let mut factors: Vec<&Vec<Expr>> = Vec::new();
            for (k, p) in jets {
                for _ in 0..*p {
                    factors.push(&self.series[k]);
                }
            }
            let value = match factors.split_last() {
                None => {
                    if t == 0 {
                        Expr::one()
                    } else {
                        Expr::zero()
                    }
                }
                Some((last, init)) => {
                    let mut acc: Vec<Expr> = vec![Expr::zero(); t + 1];
                    acc[0] = Expr::one();
                    for f in init {
                        let mut next = vec![Expr::zero(); t + 1];
                        for (a, x) in acc.iter().enumerate() {
                            if x.is_zero() {
                                continue;
                            }
                            for b in 0..=t - a {
                                if !f[b].is_zero() {
                                    next[a + b] = &next[a + b] + &(x * &f[b]);
                                }
                            }
                        }
                        acc = next;
                    }
                    let mut v = Expr::zero();
                    for (a, x) in acc.iter().enumerate() {
                        if !x.is_zero() && !last[t - a].is_zero() {
                            v = v + x * &last[t - a];
                        }
                    }
                    v
                }
            };
            if !value.is_zero() {
                out = out + pre * &value;
            }
        }
        out
    }
}

/// Computes λ_0 … λ_N for a concrete equation and one balance.
pub fn expand_balance(system: &PDESystem, balance: &Balance, opts: &ExpandOptions) -> Result<PainleveExpansion, Error> {
    let lead = balance
        .leading_exponent
        .as_int()
        .ok_or_else(|| Error::Unsupported("series expansion needs a concrete deformation".into()))?;
    let ansatz = opts.ansatz;
    let mut eng = Engine::new(system, balance.alpha, lead, ansatz)?;
    let lambda0 = reduce_phi(&balance.lambda0, ansatz)?;
    eng.fill(0, lambda0.clone())?;
    let r0 = eng.residual(0);
    if !r0.is_zero() {
        return Err(Error::InternalInvariantViolation(format!("leading order does not cancel: {r0}")));
    }
    let mut out = PainleveExpansion {
        ansatz,
        alpha: balance.alpha,
        lead,
        coefficients: vec![lambda0],
        steps: Vec::new(),
        free: Vec::new(),
        bound: Vec::new(),
        failure: None,
    };
    for j in 1..=opts.order {
        let placeholder = Symbol::coef(j as u32);
        eng.fill(j, Expr::symbol(placeholder.clone()))?;
        let r = eng.residual(j);
        let by = r.by_power_of(&placeholder);
        if by.keys().any(|k| k.as_int().map_or(true, |k| k > 1)) {
            return Err(Error::InternalInvariantViolation(format!("recursion is nonlinear in λ_{j}")));
        }
        let g = by.get(&Exponent::Int(1)).cloned().unwrap_or_default();
        let f = by.get(&Exponent::Int(0)).cloned().unwrap_or_default();
        let value = if !g.is_zero() {
            let inv = g.inverse().map_err(|e| Error::Unsupported(format!("recursion factor at λ_{j}: {e}")))?;
            out.steps.push(Step { index: j as u32, g, obstruction: Expr::zero(), resonant: false });
            -(&f * &inv)
        } else {
            let ok = f.is_zero();
            out.steps.push(Step { index: j as u32, g, obstruction: f, resonant: true });
            if !ok {
                out.failure = Some(j as u32);
                break;
            }
            match opts.choices.get(&(j as u32)) {
                Some(v) => {
                    out.bound.push(j as u32);
                    v.clone()
                }
                None => {
                    out.free.push(j as u32);
                    out.coefficients.push(Expr::symbol(placeholder));
                    continue;
                }
            }
        };
        let mut b = Bindings::new();
        b.insert(placeholder, value.clone());
        eng.substitute_index(j, &b)?;
        out.coefficients.push(value);
    }
    Ok(out)
}
