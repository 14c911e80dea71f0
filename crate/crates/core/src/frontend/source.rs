//! Printing systems back into the definition grammar.

use std::fmt::Write;

use num_traits::{Signed, Zero};

use super::system::PDESystem;
use crate::symcore::{Exponent, GaussRational, Symbol, Var};
use crate::Expr;

fn rational(r: &num_rational::BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign and magnitude text of a coefficient; empty magnitude means one.
fn coefficient(c: &GaussRational) -> (bool, String) {
    let one = num_rational::BigRational::from_integer(1.into());
    if c.im.is_zero() {
        let neg = c.re.is_negative();
        let mag = c.re.abs();
        return (neg, if mag == one { String::new() } else { rational(&mag) });
    }
    if c.re.is_zero() {
        let neg = c.im.is_negative();
        let mag = c.im.abs();
        return (neg, if mag == one { "i".into() } else { format!("{}*i", rational(&mag)) });
    }
    let im = if c.im.is_negative() {
        format!(" - {}*i", rational(&c.im.abs()))
    } else {
        format!(" + {}*i", rational(&c.im))
    };
    (false, format!("({}{im})", rational(&c.re)))
}

fn exponent_suffix(e: &Exponent) -> String {
    match e {
        Exponent::Int(1) => String::new(),
        Exponent::Int(n) if *n > 0 => format!("^{n}"),
        other => format!("^({other})"),
    }
}

fn factor(s: &Symbol, sys: &PDESystem) -> String {
    match s {
        Symbol::Jet(j) => {
            if j.total_order() == 0 {
                j.field.to_string()
            } else {
                format!(
                    "{}_{}{}",
                    j.field,
                    sys.vars[0].repeat(j.orders[0] as usize),
                    sys.vars[1].repeat(j.orders[1] as usize)
                )
            }
        }
        Symbol::Var(Var::X) => sys.vars[0].clone(),
        Symbol::Var(Var::T) => sys.vars[1].clone(),
        Symbol::Slot(sl) => {
            let head = if sl.order == 1 { "D".to_string() } else { format!("D{}", sl.order) };
            format!("{head}({}; {})", sl.field, sl.exponent)
        }
        other => other.to_string(),
    }
}

/// The expression in definition-file syntax.
pub fn expr_source(e: &Expr, sys: &PDESystem) -> String {
    if e.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in e.terms().enumerate() {
        let (neg, mag) = coefficient(c);
        let sign = match (k, neg) {
            (0, true) => "-",
            (0, false) => "",
            (_, true) => " - ",
            (_, false) => " + ",
        };
        let mut parts: Vec<String> = Vec::new();
        if !mag.is_empty() {
            parts.push(mag);
        }
        for (s, ex) in m.factors() {
            parts.push(format!("{}{}", factor(s, sys), exponent_suffix(ex)));
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        let _ = write!(out, "{sign}{}", parts.join("*"));
    }
    out
}

/// Full `pde` block; parsing the result gives back an identical system.
pub fn to_source(sys: &PDESystem) -> String {
    let mut out = format!("pde {} {{\n", sys.name);
    if !sys.description.is_empty() {
        let escaped = sys.description.replace('\\', "\\\\").replace('"', "\\\"").replace('\n', "\\n");
        let _ = writeln!(out, "  description \"{escaped}\"");
    }
    let _ = writeln!(out, "  field {}({}, {})", sys.field, sys.vars[0], sys.vars[1]);
    for p in &sys.params {
        let _ = writeln!(out, "  param {}: {}", p.name, p.domain);
    }
    let _ = writeln!(out, "  equation: {} = 0", expr_source(&sys.equation, sys));
    out.push_str("}\n");
    out
}
