#![allow(dead_code)]

use ptpainleve::deform::apply_deformation;
use ptpainleve::frontend::{builtin, parse_expr, DeformValue, PDESystem, Param, ParamDomain};
use ptpainleve::symcore::{substitute, Bindings, Symbol};
use ptpainleve::painleve::PainleveExpansion;
use ptpainleve::Expr;

pub fn model(name: &str, eps: i64, mu: i64) -> PDESystem {
    apply_deformation(&builtin(name).unwrap(), DeformValue::Int(eps), DeformValue::Int(mu)).unwrap()
}

/// Reads a coefficient written with `u_x…` standing for φ-jets, `xiK` for
/// the K-th derivative of ξ and `lamK` for the free coefficient λ_K.
pub fn coef(src: &str) -> Expr {
    let mut names: Vec<String> = vec!["kappa".into(), "omega".into()];
    names.extend((1..=4).map(|k| format!("xi{k}")));
    names.extend((1..=8).map(|k| format!("lam{k}")));
    let params: Vec<Param> =
        names.iter().map(|n| Param { name: n.clone(), domain: ParamDomain::Real }).collect();
    let e = parse_expr(src, &params).unwrap();
    let mut b = Bindings::new();
    for s in e.symbols() {
        let v = match &s {
            Symbol::Jet(j) => Expr::jet("phi", j.orders[0], j.orders[1]),
            Symbol::Param(n) if n.starts_with("xi") => Expr::symbol(Symbol::time_fn("xi", n[2..].parse().unwrap())),
            Symbol::Param(n) if n.starts_with("lam") => Expr::symbol(Symbol::coef(n[3..].parse().unwrap())),
            _ => continue,
        };
        b.insert(s, v);
    }
    substitute(&e, &b).unwrap()
}

/// Printed travelling-wave series of the deformed Burgers equation at
/// ε = 2 with λ₂ = 0, as (power of φ, coefficient).
pub const BURGERS_TRAVELLING: &[(i64, &str)] = &[
    (-1, "-4*i*kappa"),
    (2, "omega/(2^3*kappa)"),
    (5, "-i*omega^2/(7*2^8*kappa^3)"),
    (8, "-omega^3/(35*2^13*kappa^5)"),
    (11, "19*i*omega^4/(3185*2^18*kappa^7)"),
    (14, "omega^5/(3185*2^21*kappa^9)"),
    (17, "-561*i*omega^6/(2118025*2^28*kappa^11)"),
    (20, "-93*omega^7/(3328325*2^32*kappa^13)"),
    (23, "625011*i*omega^8/(53003575625*2^38*kappa^15)"),
    (26, "32971*omega^9/(53003575625*2^41*kappa^17)"),
    (29, "-1509727*i*omega^10/(11501775910625*2^46*kappa^19)"),
];

/// Printed travelling-wave series of the deformed KdV equation at ε = 2.
pub const KDV_TRAVELLING: &[(i64, &str)] = &[
    (-2, "7"),
    (3, "i*omega/156"),
    (8, "omega^2/192192"),
    (13, "i*omega^3/73081008"),
    (18, "-340915*omega^4/23989859332927488"),
    (23, "391907*i*omega^5/56760007181706436608"),
    (28, "-38892808841*omega^6/507260097462393341102260224"),
];

/// Coefficients (power of φ, value) that differ from the listed ones; every
/// unlisted coefficient must vanish.
pub fn sparse_mismatches(x: &PainleveExpansion, expected: &[(i64, &str)]) -> Vec<String> {
    let mut bad = Vec::new();
    for (k, c) in x.coefficients.iter().enumerate() {
        let p = x.power(k);
        match expected.iter().find(|(q, _)| *q == p) {
            Some((_, src)) if *c != coef(src) => bad.push(format!("phi^{p}: got {c}, want {src}")),
            None if !c.is_zero() => bad.push(format!("phi^{p}: got {c}, want 0")),
            _ => {}
        }
    }
    bad
}
