//! Convergence diagnostics, travelling-wave reduction and the numeric
//! cross-check.

mod common;

use std::collections::BTreeMap;

use common::model;
use ptpainleve::analysis::*;
use ptpainleve::frontend::{parse_expr, Param, ParamDomain};
use ptpainleve::painleve::*;
use ptpainleve::symcore::{differentiate, substitute, Bindings, DiffMode, Symbol, Var};
use ptpainleve::{Expr, GaussRational};
use twofloat::TwoFloat;

fn unit_bindings() -> BTreeMap<String, GaussRational> {
    ["kappa", "omega"].iter().map(|n| (n.to_string(), GaussRational::from_ints(1, 0))).collect()
}

fn travelling(name: &str, order: usize) -> PainleveExpansion {
    let mut choices = BTreeMap::new();
    if name == "burgers" {
        choices.insert(2, Expr::zero());
    }
    expand(&model(name, 2, 2), &ExpandOptions { ansatz: Ansatz::Travelling, order, choices }).unwrap()
}

/// Reads an ODE written with u, u_x, u_xx, … standing for ζ and its
/// z-derivatives.
fn ode(src: &str) -> Expr {
    let params: Vec<Param> =
        ["v", "kappa"].iter().map(|n| Param { name: n.to_string(), domain: ParamDomain::Real }).collect();
    let e = parse_expr(src, &params).unwrap();
    let mut b = Bindings::new();
    for s in e.symbols() {
        if let Symbol::Jet(j) = &s {
            b.insert(s.clone(), zeta(j.orders[0]));
        }
    }
    substitute(&e, &b).unwrap()
}

#[test]
fn reductions_match_explicit_forms() {
    let v = Expr::param("v");
    let cases = [
        ("burgers", 1, "-v*u_x + u*u_x - i*kappa*u_xx", 2),
        ("burgers", 2, "-v*u_x + i*u*u_x^2 + 2*kappa*u_x*u_xx", 2),
        ("kdv", 2, "-v*u_x - 6*i*u*u_x^2 + 2*i*u_xx^2 + 2*i*u_x*u_xxx", 3),
    ];
    for (name, eps, want, order) in cases {
        let r = reduce_travelling(&model(name, eps, eps), &v).unwrap();
        assert_eq!(r.ode, ode(want), "{name} eps={eps}");
        assert_eq!(r.order, order);
    }
}

#[test]
fn reduction_commutes_with_deformation() {
    let v = Expr::param("v");
    for name in ["burgers", "kdv"] {
        for eps in 1..=3 {
            let sys = model(name, eps, eps);
            let mut b = Bindings::new();
            for s in sys.equation.symbols() {
                if let Symbol::Jet(j) = &s {
                    let (a, t) = (j.orders[0], j.orders[1]);
                    b.insert(s.clone(), &(-v.clone()).pow(t as i64).unwrap() * &zeta(a + t));
                }
            }
            let direct = substitute(&sys.equation, &b).unwrap();
            assert_eq!(reduce_travelling(&sys, &v).unwrap().ode, direct, "{name} eps={eps}");
        }
    }
}

#[test]
fn burgers_integrates_once() {
    let r = reduce_travelling(&model("burgers", 2, 2), &Expr::param("v")).unwrap();
    let int = r.integrated.expect("total derivative");
    let z = Expr::symbol(Symbol::Var(Var::Z));
    let mut want = ode("i*u^2/2 + 2*kappa*u_x") - &Expr::param("v") * &z;
    want = want + Expr::param("c");
    assert_eq!(int.potential, want);
    assert_eq!(int.factor, zeta(1));
    let back = differentiate(&int.potential, Var::Z, 1, DiffMode::Reduced).unwrap();
    assert_eq!(&back * &int.factor, r.ode);
    // KdV at eps = 2 is not a total derivative after removing u_z
    assert!(reduce_travelling(&model("kdv", 2, 2), &Expr::param("v")).unwrap().integrated.is_none());
}

#[test]
fn slots_are_not_reduced() {
    let generic = ptpainleve::deform::apply_deformation(
        &ptpainleve::frontend::builtin("burgers").unwrap(),
        ptpainleve::frontend::DeformValue::Symbolic,
        ptpainleve::frontend::DeformValue::Symbolic,
    )
    .unwrap();
    assert!(reduce_travelling(&generic, &Expr::param("v")).is_err());
}

#[test]
fn magnitudes_agree_across_precisions() {
    for (name, order) in [("burgers", 35), ("kdv", 36)] {
        let x = travelling(name, order);
        let lo = CoefficientSequence::from_expansion(&x, &unit_bindings(), 150).unwrap();
        let hi = CoefficientSequence::from_expansion(&x, &unit_bindings(), 300).unwrap();
        assert!(lo.entries.len() >= 33, "{name}");
        for (a, b) in lo.nonzero().zip(hi.nonzero()).filter(|(a, _)| a.n <= 33) {
            assert!(a.magnitude.agreeing_digits(&b.magnitude) >= 30.0, "{name} n={}", a.n);
        }
    }
}

#[test]
fn root_test_values_are_exact_roots() {
    let x = travelling("burgers", 30);
    let seq = CoefficientSequence::from_expansion(&x, &unit_bindings(), DEFAULT_PREC).unwrap();
    let rt = root_test(&seq);
    let ns: Vec<usize> = rt.values.iter().map(|(n, _)| *n).collect();
    assert_eq!(ns, vec![1, 4, 7, 10, 13, 16, 19, 22, 25, 28]);
    // alpha_1 = omega/(8 kappa), alpha_4 = -i omega^2/(1792 kappa^3)
    assert!((rt.values[0].1 - 0.125).abs() < 1e-14);
    assert!((rt.values[1].1 - (1.0f64 / 1792.0).powf(0.25)).abs() < 1e-14);
    assert!(rt.values.iter().all(|(_, r)| *r > 0.0 && *r < 0.25));
}

#[test]
fn bound_entries_follow_the_formula() {
    let x = travelling("burgers", 30);
    let seq = CoefficientSequence::from_expansion(&x, &unit_bindings(), DEFAULT_PREC).unwrap();
    let report = bound_check(&seq, 30);
    let first = &report.entries[0];
    assert_eq!((first.index, first.n, first.nu), (1, 1, 2));
    // 1/8 against 1/(2^5 Γ(1/2))
    assert!((first.rhs_re - 1.0 / (32.0 * std::f64::consts::PI.sqrt())).abs() < 1e-15);
    assert!(!first.holds_re);
    let fourth = report.entries.iter().find(|e| e.index == 4).unwrap();
    assert!((fourth.rhs_im - 1.0 / 256.0).abs() < 1e-15);
    assert!(fourth.holds());
    // alpha_n sits at index n + 2, so N = 30 reaches n = 28
    assert_eq!(report.entries.len(), 28);
    let rows = csv_rows(&seq, &report);
    assert_eq!(rows[0][1], "1");
    assert_eq!(rows[0][2], "8");
}

#[test]
fn stirling_ratio_tends_to_one() {
    let mut last = f64::INFINITY;
    for n in [2.0, 10.0, 100.0, 1000.0] {
        let r = stirling_ratio(n);
        assert!(r > 1.0 && r < last);
        assert!((r - 1.0 - 1.0 / (6.0 * n)).abs() < 1.0 / (n * n));
        last = r;
    }
}

fn extended(bindings: BTreeMap<String, GaussRational>) -> CompareOptions<TwoFloat> {
    CompareOptions::extended(bindings)
}

#[test]
fn series_matches_integration() {
    for (name, order) in [("burgers", 30), ("kdv", 33)] {
        let x = travelling(name, order);
        let c = numeric_compare(&x, &model(name, 2, 2), &CompareOptions::new(unit_bindings())).unwrap();
        assert!(c.max_rel_deviation < 1e-6, "{name}: {}", c.max_rel_deviation);
        assert_eq!(c.samples.len(), 41);
    }
}

#[test]
fn deviation_shrinks_with_order() {
    let sys = model("burgers", 2, 2);
    let devs: Vec<f64> = [10, 20, 30]
        .iter()
        .map(|&n| numeric_compare(&travelling("burgers", n), &sys, &extended(unit_bindings())).unwrap().max_rel_deviation)
        .collect();
    assert!(devs[0] > devs[1] && devs[1] > devs[2], "{devs:?}");
}

#[test]
fn other_parameter_values() {
    let b: BTreeMap<String, GaussRational> = [
        ("kappa".to_string(), GaussRational::from_ints(2, 0)),
        ("omega".to_string(), GaussRational::from_ints(-1, 0)),
    ]
    .into();
    let c = numeric_compare(&travelling("burgers", 30), &model("burgers", 2, 2), &CompareOptions::new(b)).unwrap();
    assert!(c.max_rel_deviation < 1e-6);
}

#[test]
fn window_is_validated() {
    let x = travelling("burgers", 10);
    let sys = model("burgers", 2, 2);
    let mut o = CompareOptions::new(unit_bindings());
    o.window = (0.01, 0.5);
    assert!(numeric_compare(&x, &sys, &o).is_err());
    o.window = (-0.3, 0.3);
    o.floor = 0.0;
    assert!(numeric_compare(&x, &sys, &o).is_err());
    o.window = (0.2, 0.2);
    assert_eq!(numeric_compare(&x, &sys, &o).unwrap().max_rel_deviation, 0.0);
    o.window = (0.1, 0.5);
    o.radius = Some(0.4);
    assert!(numeric_compare(&x, &sys, &o).is_err());
    let reduced = expand(&sys, &ExpandOptions { ansatz: Ansatz::Reduced, order: 10, choices: BTreeMap::new() }).unwrap();
    assert!(numeric_compare(&reduced, &sys, &CompareOptions::new(unit_bindings())).is_err());
}
