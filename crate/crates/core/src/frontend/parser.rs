//! Reader for PDE definition files.
//!
//! ```text
//! pde burgers {
//!   field u(x, t)
//!   param kappa: real
//!   param eps: int
//!   param mu: int
//!   equation: dt(u) + u*D(u; eps) = i*kappa*D2(u; mu)
//! }
//! ```

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::system::{DeformValue, PDESystem, Param, ParamDomain};
use crate::symcore::{Exponent, GaussRational, Slot, Symbol, Var};
use crate::Expr;

const MAX_DEPTH: usize = 200;
const MAX_TERMS: usize = 20_000;
const MAX_EXPONENT: i64 = 1_000_000;
const MAX_SUM_POWER: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Str(String),
    Punct(char),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut k, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, message: String| ParseError { line, col, message };
    while k < chars.len() {
        let c = chars[k];
        let (l0, c0) = (line, col);
        let advance = |k: &mut usize, line: &mut usize, col: &mut usize, ch: char| {
            *k += 1;
            if ch == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if c.is_whitespace() {
            advance(&mut k, &mut line, &mut col, c);
            continue;
        }
        if c == '#' || (c == '/' && chars.get(k + 1) == Some(&'/')) {
            while k < chars.len() && chars[k] != '\n' {
                let ch = chars[k];
                advance(&mut k, &mut line, &mut col, ch);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while k < chars.len() && (chars[k].is_ascii_alphanumeric() || chars[k] == '_') {
                s.push(chars[k]);
                let ch = chars[k];
                advance(&mut k, &mut line, &mut col, ch);
            }
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while k < chars.len() && chars[k].is_ascii_digit() {
                s.push(chars[k]);
                let ch = chars[k];
                advance(&mut k, &mut line, &mut col, ch);
            }
            if s.len() > 200 {
                return Err(err(l0, c0, "numeric literal too long".into()));
            }
            let n: BigInt = s.parse().map_err(|_| err(l0, c0, "bad integer".into()))?;
            out.push(Token { tok: Tok::Int(n), line: l0, col: c0 });
            continue;
        }
        if c == '"' {
            let mut s = String::new();
            advance(&mut k, &mut line, &mut col, c);
            loop {
                match chars.get(k) {
                    None => return Err(err(l0, c0, "unterminated string".into())),
                    Some('"') => {
                        advance(&mut k, &mut line, &mut col, '"');
                        break;
                    }
                    Some('\\') if chars.get(k + 1).is_some() => {
                        let e = chars[k + 1];
                        s.push(match e {
                            'n' => '\n',
                            other => other,
                        });
                        advance(&mut k, &mut line, &mut col, '\\');
                        advance(&mut k, &mut line, &mut col, e);
                    }
                    Some(&ch) => {
                        s.push(ch);
                        advance(&mut k, &mut line, &mut col, ch);
                    }
                }
            }
            out.push(Token { tok: Tok::Str(s), line: l0, col: c0 });
            continue;
        }
        if "{}()=:;,+-*/^".contains(c) {
            out.push(Token { tok: Tok::Punct(c), line: l0, col: c0 });
            advance(&mut k, &mut line, &mut col, c);
            continue;
        }
        return Err(err(l0, c0, format!("unexpected character '{}'", c.escape_default())));
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Names the equation may refer to.
#[derive(Clone, Debug, Default)]
struct Scope {
    field: Option<String>,
    vars: Option<[String; 2]>,
    params: Vec<Param>,
}

impl Scope {
    fn domain(&self, name: &str) -> Option<ParamDomain> {
        self.params.iter().find(|p| p.name == name).map(|p| p.domain)
    }
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
    scope: Scope,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, t: &Token, message: impl Into<String>) -> ParseError {
        ParseError { line: t.line, col: t.col, message: message.into() }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        self.error_at(t, format!("expected {expected}, found {}", t.tok))
    }

    fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    fn expect_punct(&mut self, c: char) -> Result<Token, ParseError> {
        if self.is_punct(c) {
            Ok(self.next())
        } else {
            Err(self.unexpected(&format!("'{c}'")))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.is_keyword(kw) {
            self.next();
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{kw}'")))
        }
    }

    fn ident(&mut self) -> Result<(String, Token), ParseError> {
        match self.peek().tok.clone() {
            Tok::Ident(s) => Ok((s, self.next())),
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_at(self.peek(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn guard(&self, e: Expr, at: &Token) -> Result<Expr, ParseError> {
        if e.len() > MAX_TERMS {
            return Err(self.error_at(at, "expression too large"));
        }
        Ok(e)
    }

    // expr := term (("+" | "-") term)*
    fn expr(&mut self) -> Result<Expr, ParseError> {
        self.enter()?;
        let start = self.peek().clone();
        let mut acc = self.term()?;
        loop {
            if self.is_punct('+') {
                self.next();
                acc = acc + self.term()?;
            } else if self.is_punct('-') {
                self.next();
                acc = acc - self.term()?;
            } else {
                break;
            }
            acc = self.guard(acc, &start)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    // term := unary (("*" | "/") unary)*
    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.is_punct('*') {
                let at = self.next();
                let rhs = self.unary()?;
                acc = self.guard(&acc * &rhs, &at)?;
            } else if self.is_punct('/') {
                let at = self.next();
                let rhs = self.unary()?;
                let inv = rhs.inverse().map_err(|e| self.error_at(&at, format!("cannot divide: {e}")))?;
                acc = self.guard(&acc * &inv, &at)?;
            } else {
                return Ok(acc);
            }
        }
    }

    // unary := "-" unary | power
    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.is_punct('-') {
            self.next();
            self.enter()?;
            let e = -self.unary()?;
            self.depth -= 1;
            return Ok(e);
        }
        if self.is_punct('+') {
            self.next();
            self.enter()?;
            let e = self.unary()?;
            self.depth -= 1;
            return Ok(e);
        }
        self.power()
    }

    // power := atom ("^" exponent)?
    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.is_punct('^') {
            return Ok(base);
        }
        let at = self.next();
        let e = self.exponent_atom()?;
        self.checked_power(&base, &e, &at)
    }

    fn checked_power(&self, base: &Expr, e: &Exponent, at: &Token) -> Result<Expr, ParseError> {
        let too_big = || self.error_at(at, "exponent too large");
        if base.len() > 1 {
            let k = e.as_int().ok_or_else(|| self.error_at(at, "symbolic power of a sum is not supported"))?;
            if !(0..=MAX_SUM_POWER).contains(&k) {
                return Err(if k < 0 {
                    self.error_at(at, "negative power of a sum is not supported")
                } else {
                    too_big()
                });
            }
        } else if let Some((_, m)) = base.as_monomial() {
            for (_, fe) in m.factors() {
                for (_, c) in fe.monomials() {
                    for (_, k) in e.monomials() {
                        match c.checked_mul(k) {
                            Some(p) if p.abs() <= MAX_EXPONENT => {}
                            _ => return Err(too_big()),
                        }
                    }
                }
            }
            if e.is_symbolic() && e.degree() + m.factors().iter().map(|(_, x)| x.degree()).max().unwrap_or(0) > 4 {
                return Err(self.error_at(at, "exponent polynomial degree too high"));
            }
        }
        let r = base.pow_exponent(e).map_err(|err| self.error_at(at, err.to_string()))?;
        self.guard(r, at)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok.clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Expr::constant(GaussRational::real(BigRational::from_integer(n))))
            }
            Tok::Punct('(') => {
                self.next();
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.next();
                if self.is_punct('(') {
                    if name == "dt" {
                        return self.time_derivative(&t);
                    }
                    if let Some(order) = slot_order(&name) {
                        return self.slot(order, &t);
                    }
                }
                self.identifier(&name, &t)
            }
            _ => Err(self.unexpected("an operand")),
        }
    }

    fn time_derivative(&mut self, at: &Token) -> Result<Expr, ParseError> {
        self.expect_punct('(')?;
        let (f, ft) = self.ident()?;
        if Some(&f) != self.scope.field.as_ref() {
            return Err(self.error_at(&ft, format!("dt() expects the field, found '{f}'")));
        }
        self.expect_punct(')')?;
        let _ = at;
        Ok(Expr::jet(&f, 0, 1))
    }

    fn slot(&mut self, order: u32, _at: &Token) -> Result<Expr, ParseError> {
        self.expect_punct('(')?;
        let (f, ft) = self.ident()?;
        if Some(&f) != self.scope.field.as_ref() {
            return Err(self.error_at(&ft, format!("deformation slot expects the field, found '{f}'")));
        }
        self.expect_punct(';')?;
        let e = self.affine()?;
        self.expect_punct(')')?;
        Ok(Expr::symbol(Symbol::Slot(Slot { field: f.as_str().into(), order, exponent: e })))
    }

    fn identifier(&self, name: &str, at: &Token) -> Result<Expr, ParseError> {
        if name == "i" {
            return Ok(Expr::i());
        }
        if let Some(vars) = &self.scope.vars {
            if name == vars[0] {
                return Ok(Expr::symbol(Symbol::Var(Var::X)));
            }
            if name == vars[1] {
                return Ok(Expr::symbol(Symbol::Var(Var::T)));
            }
        }
        if let Some(field) = &self.scope.field {
            if let Some(j) = parse_jet(name, field, self.scope.vars.as_ref()) {
                return Ok(Expr::symbol(Symbol::Jet(j)));
            }
        }
        match self.scope.domain(name) {
            Some(ParamDomain::Integer) => Ok(Expr::exp_var(name)),
            Some(_) => Ok(Expr::param(name)),
            None => Err(self.error_at(at, format!("undeclared symbol '{name}'"))),
        }
    }

    // exponent := ["-"] INT | IDENT | "(" affine ")"
    fn exponent_atom(&mut self) -> Result<Exponent, ParseError> {
        if self.is_punct('(') {
            self.next();
            let e = self.affine()?;
            self.expect_punct(')')?;
            return Ok(e);
        }
        let neg = if self.is_punct('-') {
            self.next();
            true
        } else {
            false
        };
        let e = self.exponent_unit()?;
        Ok(if neg { -e } else { e })
    }

    fn small_int(&self, n: &BigInt, at: &Token) -> Result<i64, ParseError> {
        i64::try_from(n)
            .ok()
            .filter(|k| k.abs() <= MAX_EXPONENT)
            .ok_or_else(|| self.error_at(at, "exponent too large"))
    }

    fn exponent_unit(&mut self) -> Result<Exponent, ParseError> {
        let t = self.peek().clone();
        match t.tok.clone() {
            Tok::Int(n) => {
                self.next();
                Ok(Exponent::Int(self.small_int(&n, &t)?))
            }
            Tok::Ident(name) => {
                self.next();
                match self.scope.domain(&name) {
                    Some(ParamDomain::Integer) => Ok(Exponent::var(&name)),
                    Some(_) => Err(self.error_at(&t, format!("'{name}' is not an integer parameter"))),
                    None => Err(self.error_at(&t, format!("undeclared symbol '{name}'"))),
                }
            }
            _ => Err(self.unexpected("an exponent")),
        }
    }

    // affine := ["-"] aterm (("+"|"-") aterm)*, aterm := INT ["*" IDENT] | IDENT
    fn affine(&mut self) -> Result<Exponent, ParseError> {
        let mut acc = Exponent::Int(0);
        let mut sign = 1;
        if self.is_punct('-') {
            self.next();
            sign = -1;
        }
        loop {
            let t = self.peek().clone();
            let mut term = self.exponent_unit()?;
            if self.is_punct('*') {
                self.next();
                let rhs = self.exponent_unit()?;
                if term.is_symbolic() && rhs.is_symbolic() {
                    return Err(self.error_at(&t, "exponent must be affine"));
                }
                if let (Some(a), Some(b)) = (term.as_int(), rhs.as_int()) {
                    let p = a.checked_mul(b).filter(|p| p.abs() <= MAX_EXPONENT);
                    term = Exponent::Int(p.ok_or_else(|| self.error_at(&t, "exponent too large"))?);
                } else {
                    term = term * rhs;
                }
            }
            acc = acc + term.scale(sign);
            if acc.constant_term().abs() > MAX_EXPONENT {
                return Err(self.error_at(&t, "exponent too large"));
            }
            if self.is_punct('+') {
                self.next();
                sign = 1;
            } else if self.is_punct('-') {
                self.next();
                sign = -1;
            } else {
                return Ok(acc);
            }
        }
    }

    fn decls(&mut self) -> Result<String, ParseError> {
        let mut description = String::new();
        loop {
            if self.is_keyword("field") {
                let t = self.next();
                if self.scope.field.is_some() {
                    return Err(self.error_at(&t, "only one field may be declared"));
                }
                let (f, _) = self.ident()?;
                self.expect_punct('(')?;
                let (x, _) = self.ident()?;
                self.expect_punct(',')?;
                let (tv, tt) = self.ident()?;
                if x == tv {
                    return Err(self.error_at(&tt, "the two independent variables must differ"));
                }
                self.expect_punct(')')?;
                self.scope.field = Some(f);
                self.scope.vars = Some([x, tv]);
            } else if self.is_keyword("param") {
                self.next();
                let (name, nt) = self.ident()?;
                if name == "i" || self.scope.domain(&name).is_some() {
                    return Err(self.error_at(&nt, format!("'{name}' cannot be declared here")));
                }
                let domain = if self.is_punct(':') {
                    self.next();
                    let (d, dt) = self.ident()?;
                    match d.as_str() {
                        "real" => ParamDomain::Real,
                        "int" => ParamDomain::Integer,
                        "complex" => ParamDomain::Complex,
                        _ => return Err(self.error_at(&dt, format!("unknown domain '{d}'"))),
                    }
                } else {
                    ParamDomain::Real
                };
                self.scope.params.push(Param { name, domain });
            } else if self.is_keyword("description") {
                self.next();
                match self.peek().tok.clone() {
                    Tok::Str(s) => {
                        self.next();
                        description = s;
                    }
                    _ => return Err(self.unexpected("a string")),
                }
            } else {
                return Ok(description);
            }
        }
    }

    fn system(&mut self) -> Result<PDESystem, ParseError> {
        self.expect_keyword("pde")?;
        let (name, _) = self.ident()?;
        self.expect_punct('{')?;
        let description = self.decls()?;
        let eq_tok = self.peek().clone();
        self.expect_keyword("equation")?;
        let field = self.scope.field.clone().ok_or_else(|| self.error_at(&eq_tok, "no field declared"))?;
        for p in &self.scope.params {
            if p.name == field || self.scope.vars.as_ref().is_some_and(|v| v.contains(&p.name)) {
                return Err(self.error_at(&eq_tok, format!("parameter '{}' shadows the field or a variable", p.name)));
            }
        }
        self.expect_punct(':')?;
        let lhs = self.expr()?;
        self.expect_punct('=')?;
        let rhs = self.expr()?;
        self.expect_punct('}')?;
        if self.peek().tok != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        let equation = lhs - rhs;
        let mut deformation = Vec::new();
        for p in &self.scope.params {
            let used = equation.terms().any(|(m, _)| {
                m.factors().iter().any(|(s, _)| matches!(s, Symbol::Slot(sl) if sl.exponent.mentions(&p.name)))
            });
            if used {
                deformation.push((p.name.clone(), DeformValue::Symbolic));
            }
        }
        let sys = PDESystem {
            name,
            field,
            vars: self.scope.vars.clone().unwrap_or_else(|| ["x".into(), "t".into()]),
            params: self.scope.params.clone(),
            equation,
            deformation,
            description,
        };
        sys.validate().map_err(|e| self.error_at(&eq_tok, e.to_string()))?;
        Ok(sys)
    }
}

fn slot_order(name: &str) -> Option<u32> {
    let rest = name.strip_prefix('D')?;
    if rest.is_empty() {
        return Some(1);
    }
    if rest.len() > 2 || !rest.chars().all(|c| c.is_ascii_digit()) || rest.starts_with('0') {
        return None;
    }
    rest.parse().ok()
}

/// `u_xxt` style names.
fn parse_jet(name: &str, field: &str, vars: Option<&[String; 2]>) -> Option<crate::symcore::Jet> {
    if name == field {
        return Some(crate::symcore::Jet::new(field, 0, 0));
    }
    let rest = name.strip_prefix(field)?.strip_prefix('_')?;
    let (x, t) = match vars {
        Some(v) => (v[0].as_str(), v[1].as_str()),
        None => ("x", "t"),
    };
    if x.chars().count() != 1 || t.chars().count() != 1 || rest.is_empty() || rest.len() > 64 {
        return None;
    }
    let (mut dx, mut dt) = (0, 0);
    for c in rest.chars() {
        if x.starts_with(c) {
            dx += 1;
        } else if t.starts_with(c) {
            dt += 1;
        } else {
            return None;
        }
    }
    Some(crate::symcore::Jet::new(field, dx, dt))
}

fn parser(src: &str) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(src)?, pos: 0, depth: 0, scope: Scope::default() })
}

/// Parses a complete `pde` block.
pub fn parse_system(src: &str) -> Result<PDESystem, ParseError> {
    parser(src)?.system()
}

/// Parses a bare expression in the scope of field `u(x, t)` with the given
/// parameters.
pub fn parse_expr(src: &str, params: &[Param]) -> Result<Expr, ParseError> {
    let mut p = parser(src)?;
    p.scope = Scope { field: Some("u".into()), vars: Some(["x".into(), "t".into()]), params: params.to_vec() };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}
