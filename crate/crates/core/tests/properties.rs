//! Structural properties: PT invariance, series sparsity and scaling,
//! free-parameter independence, and randomized algebra checks.

mod common;

use std::collections::BTreeMap;

use common::{coef, model};
use proptest::prelude::*;
use ptpainleve::deform::{is_pt_invariant, pt_transform};
use ptpainleve::frontend::{expr_source, parse_expr, parse_system, to_source, Param, ParamDomain};
use ptpainleve::painleve::*;
use ptpainleve::symcore::{collect_phi_powers, differentiate, substitute, Bindings, DiffMode, Exponent, Symbol, Var};
use ptpainleve::{Expr, GaussRational};

/// Simultaneous substitution s → f(s) through temporary symbols, since a
/// binding may not mention its own key.
fn rescale(e: &Expr, pick: impl Fn(&Symbol) -> Option<Expr>) -> Expr {
    let (mut there, mut back) = (Bindings::new(), Bindings::new());
    for (k, s) in e.symbols().into_iter().enumerate() {
        if let Some(f) = pick(&s) {
            let tmp = Symbol::Aux(format!("tmp{k}").into());
            there.insert(s.clone(), &f * &Expr::symbol(tmp.clone()));
            back.insert(tmp, Expr::symbol(s));
        }
    }
    substitute(&substitute(e, &there).unwrap(), &back).unwrap()
}

/// Independent PT image: conjugate, then flip the sign of every jet with an
/// odd number of derivatives.
fn pt_by_substitution(e: &Expr) -> Expr {
    rescale(&e.conj(), |s| match s {
        Symbol::Jet(j) if (j.orders[0] + j.orders[1]) % 2 == 1 => Some(Expr::int(-1)),
        _ => None,
    })
}

#[test]
fn deformed_models_are_pt_invariant() {
    for name in ["burgers", "kdv"] {
        for eps in 1..=3 {
            let sys = model(name, eps, eps);
            let image = pt_transform(&sys.equation).unwrap();
            assert_eq!(image, pt_by_substitution(&sys.equation), "{name} eps={eps}");
            // u_t is odd, so the whole equation changes sign
            assert_eq!(image, -sys.equation.clone(), "{name} eps={eps}");
            assert!(is_pt_invariant(&sys).unwrap());
        }
    }
}

#[test]
fn real_viscosity_breaks_pt() {
    let sys = parse_system("pde heat {\n field u(x, t)\n param kappa: real\n equation: u_t + u*u_x = kappa*u_xx\n}").unwrap();
    assert!(!is_pt_invariant(&sys).unwrap());
}

fn travelling(name: &str, order: usize) -> PainleveExpansion {
    let mut choices = BTreeMap::new();
    if name == "burgers" {
        choices.insert(2, Expr::zero());
    }
    expand(&model(name, 2, 2), &ExpandOptions { ansatz: Ansatz::Travelling, order, choices }).unwrap()
}

#[test]
fn travelling_series_are_sparse() {
    for (name, order, pole, modulus, residue) in [("burgers", 30, -1, 3, 2), ("kdv", 33, -2, 5, 3)] {
        let x = travelling(name, order);
        for (k, c) in x.coefficients.iter().enumerate() {
            let p = x.power(k);
            if p > pole && p.rem_euclid(modulus) != residue {
                assert!(c.is_zero(), "{name}: phi^{p} = {c}");
            }
            if p > pole && p.rem_euclid(modulus) == residue {
                assert!(!c.is_zero(), "{name}: phi^{p} vanishes");
            }
        }
    }
}

fn degree(c: &Expr, name: &str) -> i64 {
    let (_, m) = c.as_monomial().expect("single term");
    m.exponent_of(&Symbol::param(name)).as_int().unwrap()
}

#[test]
fn scaling_degrees() {
    let x = travelling("burgers", 30);
    for (k, c) in x.coefficients.iter().enumerate().skip(1) {
        let p = x.power(k);
        if c.is_zero() {
            continue;
        }
        let a = (p + 1) / 3;
        assert_eq!(degree(c, "omega"), a, "phi^{p}");
        assert_eq!(degree(c, "kappa"), 1 - 2 * a, "phi^{p}");
    }
    let x = travelling("kdv", 33);
    for (k, c) in x.coefficients.iter().enumerate().skip(1) {
        let p = x.power(k);
        if c.is_zero() {
            continue;
        }
        assert_eq!(degree(c, "omega"), (p + 2) / 5, "phi^{p}");
        assert_eq!(degree(c, "kappa"), 0);
    }
}

#[test]
fn scaling_covariance() {
    // kappa -> s kappa, omega -> s omega multiplies phi^p by s^(1-a)
    let x = travelling("burgers", 30);
    for (k, c) in x.coefficients.iter().enumerate() {
        let p = x.power(k);
        let a = if p == -1 { 0 } else { (p + 1) / 3 };
        let scaled = rescale(c, |s| (*s == Symbol::param("kappa") || *s == Symbol::param("omega")).then(|| Expr::int(3)));
        let factor = Expr::int(3).pow(1 - a).unwrap();
        assert_eq!(scaled, &factor * c, "phi^{p}");
    }
}

#[test]
fn free_parameter_independence() {
    let sys = model("burgers", 2, 2);
    let run = |choice: Option<i64>| {
        let mut choices = BTreeMap::new();
        if let Some(v) = choice {
            choices.insert(2, Expr::int(v));
        }
        expand(&sys, &ExpandOptions { ansatz: Ansatz::Reduced, order: 10, choices }).unwrap()
    };
    let free = run(None);
    for v in [1, -3] {
        let x = run(Some(v));
        assert_eq!(x.coefficients[3], coef("xi1/(8*kappa)"));
        // a constant lambda2 has vanishing derivatives
        let mut b = Bindings::new();
        for s in free.coefficients.iter().flat_map(|c| c.symbols()) {
            if let Symbol::Coef { index: 2, dx, dt } = s {
                b.insert(s.clone(), if dx + dt == 0 { Expr::int(v) } else { Expr::zero() });
            }
        }
        for k in 0..=10 {
            assert_eq!(x.coefficients[k], substitute(&free.coefficients[k], &b).unwrap(), "lambda{k}");
        }
        assert!(x.coefficients[4] != free.coefficients[4]);
        assert!(residual_check(&sys, &x).unwrap().vanishes());
    }
}

// Randomized checks of the algebra.

fn atom() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (-5i64..=5).prop_map(Expr::int),
        (-4i64..=4, 1i64..=4).prop_map(|(n, d)| Expr::ratio(n, d)),
        Just(Expr::i()),
        Just(Expr::param("kappa")),
        (0u32..3, 0u32..2).prop_map(|(a, b)| Expr::jet("u", a, b)),
        (0u32..2, 0u32..2).prop_map(|(a, b)| Expr::jet("phi", a, b)),
        Just(Expr::symbol(Symbol::time_fn("xi", 1))),
    ]
}

fn expr() -> impl Strategy<Value = Expr> {
    atom().prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| &a * &b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner, 0i64..3).prop_map(|(a, k)| a.pow(k).unwrap()),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a - &a, Expr::zero());
        prop_assert_eq!(&a * &Expr::one(), a.clone());
    }

    #[test]
    fn iterated_differentiation(a in expr(), n in 0u32..3, m in 0u32..3) {
        for mode in [DiffMode::General, DiffMode::Reduced] {
            let once = differentiate(&differentiate(&a, Var::X, n, mode).unwrap(), Var::X, m, mode).unwrap();
            prop_assert_eq!(once, differentiate(&a, Var::X, n + m, mode).unwrap());
        }
        let xt = differentiate(&differentiate(&a, Var::X, 1, DiffMode::General).unwrap(), Var::T, 1, DiffMode::General).unwrap();
        let tx = differentiate(&differentiate(&a, Var::T, 1, DiffMode::General).unwrap(), Var::X, 1, DiffMode::General).unwrap();
        prop_assert_eq!(xt, tx);
    }

    #[test]
    fn leibniz_rule(a in expr(), b in expr()) {
        let d = |e: &Expr| differentiate(e, Var::X, 1, DiffMode::General).unwrap();
        prop_assert_eq!(d(&(&a * &b)), &(&d(&a) * &b) + &(&a * &d(&b)));
    }

    #[test]
    fn identity_substitution(a in expr()) {
        let b: Bindings<GaussRational> = a.symbols().into_iter().map(|s| (s.clone(), Expr::symbol(s))).collect();
        prop_assert_eq!(substitute(&a, &b).unwrap(), a);
    }

    #[test]
    fn phi_partition_restores_input(a in expr(), k in -3i64..3) {
        let shifted = &a * &Expr::symbol_pow(Symbol::jet("phi", 0, 0), Exponent::Int(k));
        let parts = collect_phi_powers(&shifted);
        prop_assert_eq!(parts.sum(), shifted.clone());
        for (e, part) in parts.parts() {
            prop_assert!(!part.contains(&Symbol::jet("phi", 0, 0)), "part at {} still has phi", e);
        }
    }

    #[test]
    fn printed_expressions_reparse(a in expr()) {
        let sys = model("burgers", 1, 1);
        let src = expr_source(&a, &sys);
        let params: Vec<Param> = vec![Param { name: "kappa".into(), domain: ParamDomain::Real }];
        if !a.contains_where(|s| matches!(s, Symbol::TimeFn { .. }) || s.is_jet_of("phi")) {
            prop_assert_eq!(parse_expr(&src, &params).unwrap(), a);
        }
    }

    #[test]
    fn parser_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..200)) {
        let text = String::from_utf8_lossy(&bytes);
        if let Err(e) = parse_system(&text) {
            prop_assert!(e.line >= 1 && e.col >= 1);
        }
    }

    #[test]
    fn parser_survives_mutations(pos in 0usize..200, byte in any::<u8>()) {
        let base = to_source(&ptpainleve::frontend::builtin("kdv").unwrap());
        let mut bytes = base.into_bytes();
        let p = pos % bytes.len();
        bytes[p] = byte;
        let text = String::from_utf8_lossy(&bytes);
        if let Err(e) = parse_system(&text) {
            prop_assert!(e.line >= 1 && e.col >= 1);
        }
    }
}
