//! Exponents: integers or integer polynomials in symbolic-exponent names.
//!
//! Leading-order analysis produces products such as `alpha*eps`, so the
//! representation is a full polynomial; ordering questions (which power of
//! φ is more singular) only make sense for differences that are constant.

use std::fmt;
use std::sync::Arc;

use super::symbol::Name;

type ExpMono = Vec<(Name, u32)>;

/// Integer polynomial in symbolic-exponent names.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Exponent {
    Int(i64),
    /// Never constant; the constant term, if any, is stored under the empty monomial.
    Poly(Arc<Vec<(ExpMono, i64)>>),
}

impl Default for Exponent {
    fn default() -> Self {
        Exponent::Int(0)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::Int(n)
    }
}

fn mono_mul(a: &ExpMono, b: &ExpMono) -> ExpMono {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j].clone());
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push((a[i].0.clone(), a[i].1 + b[j].1));
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl Exponent {
    pub fn var(name: &str) -> Self {
        Self::from_terms(vec![(vec![(Name::from(name), 1)], 1)])
    }

    pub fn var_named(name: Name) -> Self {
        Self::from_terms(vec![(vec![(name, 1)], 1)])
    }

    fn terms(&self) -> Vec<(ExpMono, i64)> {
        match self {
            Exponent::Int(0) => Vec::new(),
            Exponent::Int(n) => vec![(Vec::new(), *n)],
            Exponent::Poly(t) => t.as_ref().clone(),
        }
    }

    fn from_terms(mut terms: Vec<(ExpMono, i64)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(ExpMono, i64)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match merged.last_mut() {
                Some(last) if last.0 == m => last.1 += c,
                _ => merged.push((m, c)),
            }
        }
        merged.retain(|(_, c)| *c != 0);
        match merged.as_slice() {
            [] => Exponent::Int(0),
            [(m, c)] if m.is_empty() => Exponent::Int(*c),
            _ => Exponent::Poly(Arc::new(merged)),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Exponent::Int(n) => Some(*n),
            Exponent::Poly(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Exponent::Int(0))
    }

    pub fn is_symbolic(&self) -> bool {
        matches!(self, Exponent::Poly(_))
    }

    pub fn constant_term(&self) -> i64 {
        match self {
            Exponent::Int(n) => *n,
            Exponent::Poly(t) => t.iter().find(|(m, _)| m.is_empty()).map_or(0, |(_, c)| *c),
        }
    }

    /// Non-constant part.
    pub fn symbolic_part(&self) -> Exponent {
        self.clone() - Exponent::Int(self.constant_term())
    }

    pub fn degree(&self) -> u32 {
        self.terms().iter().map(|(m, _)| m.iter().map(|(_, d)| *d).sum::<u32>()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> Vec<Name> {
        let mut v: Vec<Name> = self.terms().into_iter().flat_map(|(m, _)| m.into_iter().map(|(n, _)| n)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Exponent::Int(_) => false,
            Exponent::Poly(t) => t.iter().any(|(m, _)| m.iter().any(|(n, _)| &**n == name)),
        }
    }

    pub fn scale(&self, k: i64) -> Exponent {
        match self {
            Exponent::Int(n) => Exponent::Int(n * k),
            _ => Self::from_terms(self.terms().into_iter().map(|(m, c)| (m, c * k)).collect()),
        }
    }

    /// Splits `self = a·name + b` when `self` is at most linear in `name`.
    pub fn linear_in(&self, name: &str) -> Option<(Exponent, Exponent)> {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for (m, c) in self.terms() {
            match m.iter().position(|(n, _)| &**n == name) {
                None => b.push((m, c)),
                Some(k) if m[k].1 == 1 => {
                    let mut rest = m.clone();
                    rest.remove(k);
                    a.push((rest, c));
                }
                Some(_) => return None,
            }
        }
        Some((Self::from_terms(a), Self::from_terms(b)))
    }

    /// Replaces `name` by `value` everywhere.
    pub fn substitute(&self, name: &str, value: &Exponent) -> Exponent {
        if !self.mentions(name) {
            return self.clone();
        }
        let mut acc = Exponent::Int(0);
        for (m, c) in self.terms() {
            let mut term = Exponent::Int(c);
            for (n, d) in m {
                let factor = if &*n == name { value.clone() } else { Exponent::var_named(n) };
                for _ in 0..d {
                    term = term * factor.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Evaluates with every name bound to an integer.
    pub fn evaluate(&self, env: &dyn Fn(&str) -> Option<i64>) -> Option<i64> {
        let mut acc = 0i64;
        for (m, c) in self.terms() {
            let mut t = c;
            for (n, d) in m {
                let v = env(&n)?;
                t = t.checked_mul(v.checked_pow(d)?)?;
            }
            acc = acc.checked_add(t)?;
        }
        Some(acc)
    }

    /// Monomials with their coefficients, constant term under the empty list.
    pub fn monomials(&self) -> Vec<(Vec<(Name, u32)>, i64)> {
        self.terms()
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        match (&self, &o) {
            (Exponent::Int(a), Exponent::Int(b)) => Exponent::Int(a + b),
            _ => {
                let mut t = self.terms();
                t.extend(o.terms());
                Self::from_terms(t)
            }
        }
    }
}

impl std::ops::Sub for Exponent {
    type Output = Exponent;
    fn sub(self, o: Exponent) -> Exponent {
        self + (-o)
    }
}

impl std::ops::Neg for Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        self.scale(-1)
    }
}

impl std::ops::Mul for Exponent {
    type Output = Exponent;
    fn mul(self, o: Exponent) -> Exponent {
        match (&self, &o) {
            (Exponent::Int(a), Exponent::Int(b)) => Exponent::Int(a * b),
            (Exponent::Int(a), _) => o.scale(*a),
            (_, Exponent::Int(b)) => self.scale(*b),
            _ => {
                let (ta, tb) = (self.terms(), o.terms());
                let mut out = Vec::with_capacity(ta.len() * tb.len());
                for (ma, ca) in &ta {
                    for (mb, cb) in &tb {
                        out.push((mono_mul(ma, mb), ca * cb));
                    }
                }
                Self::from_terms(out)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = match self {
            Exponent::Int(n) => return write!(f, "{n}"),
            Exponent::Poly(t) => t,
        };
        // highest degree first, constant last
        let mut ordered: Vec<&(ExpMono, i64)> = terms.iter().collect();
        ordered.sort_by_key(|(m, _)| std::cmp::Reverse(m.iter().map(|(_, d)| *d).sum::<u32>()));
        for (k, (m, c)) in ordered.iter().enumerate() {
            let (sign, mag) = if *c < 0 { ("-", -c) } else { ("+", *c) };
            if k == 0 {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if m.is_empty() {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != 1 {
                write!(f, "{mag}*")?;
            }
            let parts: Vec<String> = m
                .iter()
                .map(|(n, d)| if *d == 1 { n.to_string() } else { format!("{n}^{d}") })
                .collect();
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels_to_int() {
        let eps = Exponent::var("eps");
        let e = eps.clone() * Exponent::Int(2) - Exponent::Int(1) - eps.clone() - eps;
        assert_eq!(e, Exponent::Int(-1));
    }

    #[test]
    fn bilinear_leading_order_exponent() {
        // alpha + alpha*eps - eps at alpha = -1 is -1 - 2 eps
        let (a, e) = (Exponent::var("alpha"), Exponent::var("eps"));
        let x = a.clone() + a * e.clone() - e.clone();
        let at = x.substitute("alpha", &Exponent::Int(-1));
        assert_eq!(at, Exponent::Int(-1) - e.scale(2));
        assert_eq!(x.to_string(), "alpha*eps + alpha - eps");
        let (lin, rest) = x.linear_in("alpha").unwrap();
        assert_eq!(lin.to_string(), "eps + 1");
        assert_eq!(rest.to_string(), "-eps");
    }

    #[test]
    fn evaluate_and_degree() {
        let x = Exponent::var("mu") * Exponent::var("alpha") - Exponent::var("mu") - Exponent::Int(1);
        assert_eq!(x.degree(), 2);
        let v = x.evaluate(&|n| match n {
            "mu" => Some(2),
            "alpha" => Some(-1),
            _ => None,
        });
        assert_eq!(v, Some(-5));
    }
}
