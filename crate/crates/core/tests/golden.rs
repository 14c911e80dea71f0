//! Expansion coefficients against closed forms.

mod common;

use common::{coef, model, sparse_mismatches, BURGERS_TRAVELLING, KDV_TRAVELLING};
use ptpainleve::painleve::*;
use ptpainleve::Expr;

fn expand_with(name: &str, eps: i64, ansatz: Ansatz, order: usize, lambda2: Option<Expr>) -> PainleveExpansion {
    let sys = model(name, eps, eps);
    let mut choices = std::collections::BTreeMap::new();
    if let Some(v) = lambda2 {
        choices.insert(2, v);
    }
    expand(&sys, &ExpandOptions { ansatz, order, choices }).unwrap()
}

fn check_sparse(x: &PainleveExpansion, expected: &[(i64, &str)]) {
    let bad = sparse_mismatches(x, expected);
    assert!(bad.is_empty(), "{}", bad.join("\n"));
}

#[test]
fn burgers_reduced_first_terms() {
    let x = expand_with("burgers", 2, Ansatz::Reduced, 4, None);
    assert_eq!(x.free, vec![2]);
    let want = ["-4*i*kappa", "0", "lam2", "xi1/(8*kappa)", "-i*lam2^2/(20*kappa)"];
    for (k, w) in want.iter().enumerate() {
        assert_eq!(x.coefficients[k], coef(w), "lambda{k}");
    }
    let x = expand_with("burgers", 2, Ansatz::Reduced, 5, None);
    assert_eq!(x.coefficients[5], coef("-i*lam2*xi1/(96*kappa^2)"));
}

#[test]
fn burgers_reduced_zero_lambda2() {
    let x = expand_with("burgers", 2, Ansatz::Reduced, 14, Some(Expr::zero()));
    check_sparse(
        &x,
        &[
            (-1, "-4*i*kappa"),
            (2, "xi1/(2^3*kappa)"),
            (5, "-i*xi1^2/(7*2^8*kappa^3)"),
            (6, "i*xi2/(5*2^9*kappa^3)"),
            (8, "-xi1^3/(35*2^13*kappa^5)"),
            (9, "-23*xi1*xi2/(385*2^13*kappa^5)"),
            (10, "-xi3/(135*2^14*kappa^5)"),
            (11, "19*i*xi1^4/(3185*2^18*kappa^7)"),
            (12, "-51*i*xi1^2*xi2/(385*2^19*kappa^7)"),
            (13, "-i*(43641*xi2^2 + 16460*xi1*xi3)/(779625*2^20*kappa^7)"),
        ],
    );
}

#[test]
fn burgers_travelling_thirty_terms() {
    let x = expand_with("burgers", 2, Ansatz::Travelling, 30, Some(Expr::zero()));
    check_sparse(&x, BURGERS_TRAVELLING);
}

#[test]
fn burgers_general_manifold() {
    for eps in 1..=3 {
        let x = expand_with("burgers", eps, Ansatz::General, 2, None);
        assert_eq!(x.coefficients[0], coef(&format!("-2*i*{eps}*kappa*u_x")), "eps = {eps}");
        let l1 = if eps == 1 { "(i*kappa*u_xx - u_t)/u_x".to_string() } else { format!("i*{eps}*kappa*u_xx/u_x") };
        assert_eq!(x.coefficients[1], coef(&l1), "eps = {eps}");
        assert_eq!(x.free, vec![2]);
    }
}

#[test]
fn kdv_general_manifold() {
    for eps in 1..=3i64 {
        let n = if eps == 1 { 3 } else { 4 };
        let x = expand_with("kdv", eps, Ansatz::General, n, None);
        let k = format!("{eps}*(3*{eps} + 1)");
        let d = if eps == 1 { 1 } else { 0 };
        let want = [
            format!("{k}/2*u_x^2"),
            format!("-{k}/2*u_xx"),
            format!("{k}/24*(4*u_x*u_xxx - 3*u_xx^2)/u_x^2 + {d}*u_t/(6*u_x)"),
            format!(
                "{k}/24*(4*u_x*u_xx*u_xxx - 3*u_xx^3 - u_x^2*u_xxxx)/u_x^4 + {d}*(u_t*u_xx - u_x*u_xt)/(6*u_x^3)"
            ),
            format!(
                "{k}/24*((6*u_x*u_xx^2*u_xxx - 15/4*u_xx^4 - 3/2*u_x^2*u_xx*u_xxxx)/u_x^6 \
                 + (u_x*u_xxxxx - 5*u_xxx^2)/(5*u_x^4))"
            ),
        ];
        for j in 0..=n {
            assert_eq!(x.coefficients[j], coef(&want[j]), "eps = {eps}, lambda{j}");
        }
    }
}

#[test]
fn kdv_reduced() {
    let x = expand_with("kdv", 2, Ansatz::Reduced, 21, None);
    assert!(x.free.is_empty());
    check_sparse(
        &x,
        &[
            (-2, "7"),
            (3, "i*xi1/156"),
            (8, "xi1^2/192192"),
            (9, "-xi2/681408"),
            (13, "i*xi1^3/73081008"),
            (14, "-725*i*xi1*xi2/216449705472"),
            (15, "i*xi3/20262348288"),
            (18, "-340915*xi1^4/23989859332927488"),
            (19, "1867*xi1^2*xi2/758331543121152"),
        ],
    );
}

#[test]
fn kdv_travelling() {
    let x = expand_with("kdv", 2, Ansatz::Travelling, 30, None);
    check_sparse(&x, KDV_TRAVELLING);
}
