//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use common::{coef, model, sparse_mismatches, BURGERS_TRAVELLING, KDV_TRAVELLING};
use ptpainleve::analysis::{
    bound_check, numeric_compare, root_test, CoefficientSequence, CompareOptions, DEFAULT_PREC,
};
use ptpainleve::deform::{apply_deformation, is_pt_invariant, pt_transform};
use ptpainleve::frontend::{builtin, DeformValue, PDESystem};
use ptpainleve::painleve::*;
use ptpainleve::{Expr, GaussRational};
use twofloat::TwoFloat;

type Check = Result<(), String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn generic(name: &str) -> PDESystem {
    apply_deformation(&builtin(name).unwrap(), DeformValue::Symbolic, DeformValue::Symbolic).unwrap()
}

fn eps() -> Expr {
    Expr::exp_var("eps")
}

fn phi_x() -> Expr {
    Expr::jet("phi", 1, 0)
}

fn expansion(name: &str, e: i64, ansatz: Ansatz, order: usize, lambda2: Option<Expr>) -> Result<PainleveExpansion, String> {
    let mut choices = BTreeMap::new();
    if let Some(v) = lambda2 {
        choices.insert(2, v);
    }
    expand(&model(name, e, e), &ExpandOptions { ansatz, order, choices }).map_err(|e| e.to_string())
}

fn unit_bindings() -> BTreeMap<String, GaussRational> {
    ["kappa", "omega"].iter().map(|n| (n.to_string(), GaussRational::from_ints(1, 0))).collect()
}

fn golden_balances() -> Check {
    let b = dominant_balance(&generic("burgers")).map_err(|e| e.to_string())?;
    ensure(b.len() == 1, || format!("burgers: {} balances", b.len()))?;
    let want = &(&Expr::constant(GaussRational::from_ints(0, -2)) * &eps()) * &(&Expr::param("kappa") * &phi_x());
    ensure(b[0].alpha == -1, || format!("burgers alpha = {}", b[0].alpha))?;
    let c: Vec<String> = b[0].constraints.iter().map(|c| c.to_string()).collect();
    ensure(c == ["eps = mu"], || format!("burgers constraints {c:?}"))?;
    ensure(b[0].lambda0 == want, || format!("burgers lambda0 = {}", b[0].lambda0))?;

    let b = dominant_balance(&generic("kdv")).map_err(|e| e.to_string())?;
    ensure(b.len() == 1, || format!("kdv: {} balances", b.len()))?;
    let k = &(&Expr::ratio(1, 2) * &eps()) * &(&(&Expr::int(3) * &eps()) + &Expr::one());
    let want = &k * &phi_x().pow(2).unwrap();
    ensure(b[0].alpha == -2, || format!("kdv alpha = {}", b[0].alpha))?;
    let c: Vec<String> = b[0].constraints.iter().map(|c| c.to_string()).collect();
    ensure(c == ["eps = mu"], || format!("kdv constraints {c:?}"))?;
    ensure(b[0].lambda0 == want, || format!("kdv lambda0 = {}", b[0].lambda0))
}

fn spectrum(sys: &PDESystem) -> Result<ResonanceReport, String> {
    let b = dominant_balance(sys).map_err(|e| e.to_string())?;
    let b = b.first().ok_or("no balance")?;
    resonance_spectrum(sys, b).map_err(|e| e.to_string())
}

fn golden_resonances() -> Check {
    for e in 1..=4 {
        let r = spectrum(&model("burgers", e, e))?;
        let roots = r.integer_roots_at(Some(e));
        ensure(roots == [-1, 2], || format!("burgers eps={e}: {roots:?}"))?;
    }
    let r = spectrum(&model("kdv", 1, 1))?;
    let roots = r.integer_roots_at(Some(1));
    ensure(roots == [-1, 4, 6], || format!("kdv eps=1: {roots:?}"))?;

    let r = spectrum(&model("kdv", 2, 2))?;
    let roots = r.integer_roots_at(Some(2));
    ensure(roots == [-1], || format!("kdv eps=2 integer roots {roots:?}"))?;
    match &r.remainder {
        Remainder::Quadratic { linear, constant, .. } => {
            ensure(*linear == Expr::int(-16) && *constant == Expr::int(42), || {
                format!("kdv eps=2 factor r^2 + ({linear})r + ({constant})")
            })?;
        }
        other => return Err(format!("kdv eps=2 remainder {other:?}")),
    }

    let r = spectrum(&generic("kdv"))?;
    match integrality(&r) {
        Integrality::Finite { solutions, .. } => {
            let e: Vec<(i64, i64, Option<i64>)> = solutions.iter().map(|s| (s.eps, s.n, s.m)).collect();
            ensure(e == [(1, 1, Some(2))], || format!("kdv integral solutions {e:?}"))?;
        }
        other => return Err(format!("kdv integrality {other:?}")),
    }
    let r = spectrum(&generic("burgers"))?;
    ensure(integrality(&r) == Integrality::Always, || "burgers integrality is not universal".into())
}

fn golden_burgers_reduced() -> Check {
    let x = expansion("burgers", 2, Ansatz::Reduced, 5, None)?;
    let want = [
        "-4*i*kappa",
        "0",
        "lam2",
        "xi1/(8*kappa)",
        "-i*lam2^2/(20*kappa)",
        "-i*lam2*xi1/(96*kappa^2)",
    ];
    for (k, w) in want.iter().enumerate() {
        ensure(x.coefficients[k] == coef(w), || format!("phi^{}: got {}, want {w}", x.power(k), x.coefficients[k]))?;
    }
    ensure(x.free == [2], || format!("free {:?}", x.free))
}

fn golden_burgers_travelling() -> Check {
    let x = expansion("burgers", 2, Ansatz::Travelling, 30, Some(Expr::zero()))?;
    ensure(x.power(x.coefficients.len() - 1) == 29, || "series stops early".into())?;
    let bad = sparse_mismatches(&x, BURGERS_TRAVELLING);
    ensure(bad.is_empty(), || bad.join("; "))
}

fn golden_kdv_travelling() -> Check {
    let x = expansion("kdv", 2, Ansatz::Travelling, 30, None)?;
    ensure(x.power(x.coefficients.len() - 1) == 28, || "series stops early".into())?;
    let bad = sparse_mismatches(&x, KDV_TRAVELLING);
    ensure(bad.is_empty(), || bad.join("; "))?;
    let a = analyse(&model("kdv", 2, 2), &ExpandOptions { ansatz: Ansatz::Travelling, order: 30, choices: BTreeMap::new() })
        .map_err(|e| e.to_string())?;
    ensure(a.verdict.classification == Classification::Defective, || format!("verdict {}", a.verdict.classification))
}

fn residual_oracle() -> Check {
    let cases: [(&str, Ansatz, usize, Option<Expr>); 5] = [
        ("burgers", Ansatz::Reduced, 5, None),
        ("burgers", Ansatz::Reduced, 14, Some(Expr::zero())),
        ("burgers", Ansatz::Travelling, 30, Some(Expr::zero())),
        ("kdv", Ansatz::Reduced, 21, None),
        ("kdv", Ansatz::Travelling, 30, None),
    ];
    for (name, ansatz, order, l2) in cases {
        let x = expansion(name, 2, ansatz, order, l2)?;
        let r = residual_check(&model(name, 2, 2), &x).map_err(|e| e.to_string())?;
        ensure(r.checked.end() - r.checked.start() == order as i64, || format!("{name}: checked {:?}", r.checked))?;
        ensure(r.vanishes(), || format!("{name} {}: nonzero at {:?}", ansatz.name(), r.nonzero.iter().map(|p| p.0).collect::<Vec<_>>()))?;
    }
    Ok(())
}

fn pt_invariance() -> Check {
    for name in ["burgers", "kdv"] {
        for e in 1..=3 {
            let sys = model(name, e, e);
            let image = pt_transform(&sys.equation).map_err(|e| e.to_string())?;
            ensure(image == -sys.equation.clone(), || format!("{name} eps={e}: image {image}"))?;
            ensure(is_pt_invariant(&sys).unwrap_or(false), || format!("{name} eps={e}"))?;
        }
    }
    Ok(())
}

fn failure_detection() -> Check {
    for (name, e, m) in [("burgers", 1, 2), ("kdv", 2, 1)] {
        let sys = model(name, e, m);
        let a = analyse(&sys, &ExpandOptions::default()).map_err(|e| e.to_string())?;
        ensure(a.balances.is_empty(), || format!("{name} eps={e} mu={m}: found a balance"))?;
        ensure(a.verdict.classification == Classification::Fails, || {
            format!("{name} eps={e} mu={m}: {}", a.verdict.classification)
        })?;
    }
    Ok(())
}

fn convergence_diagnostics() -> Check {
    // N = 32 so that α_n reaches n = 30
    let x = expansion("burgers", 2, Ansatz::Travelling, 32, Some(Expr::zero()))?;
    let seq = CoefficientSequence::from_expansion(&x, &unit_bindings(), DEFAULT_PREC).map_err(|e| e.to_string())?;
    let root = root_test(&seq);
    let bound = bound_check(&seq, 30);
    let mut problems = Vec::new();
    if !root.strictly_decreasing {
        let v: Vec<String> = root.values.iter().map(|(n, r)| format!("{n}:{r:.4}")).collect();
        problems.push(format!("|alpha_n|^(1/n) not decreasing [{}]", v.join(" ")));
    }
    let failing: Vec<usize> = bound.entries.iter().filter(|e| !e.holds()).map(|e| e.index).collect();
    if !failing.is_empty() || bound.entries.len() < 30 {
        problems.push(format!("bound fails at n = {failing:?} ({} entries)", bound.entries.len()));
    }
    ensure(problems.is_empty(), || problems.join("; "))
}

fn numeric_cross_check() -> Check {
    for (name, order) in [("burgers", 30), ("kdv", 33)] {
        let l2 = (name == "burgers").then(Expr::zero);
        let x = expansion(name, 2, Ansatz::Travelling, order, l2)?;
        let c = numeric_compare(&x, &model(name, 2, 2), &CompareOptions::new(unit_bindings())).map_err(|e| e.to_string())?;
        ensure(c.max_rel_deviation < 1e-6, || format!("{name}: deviation {:e}", c.max_rel_deviation))?;
    }
    let opts = CompareOptions::<TwoFloat>::extended(unit_bindings());
    let sys = model("burgers", 2, 2);
    let mut devs = Vec::new();
    for n in [10, 20, 30] {
        let x = expansion("burgers", 2, Ansatz::Travelling, n, Some(Expr::zero()))?;
        devs.push(numeric_compare(&x, &sys, &opts).map_err(|e| e.to_string())?.max_rel_deviation);
    }
    ensure(devs.windows(2).all(|w| w[1] < w[0]), || format!("deviations {devs:?}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Option<Duration>); 10] = [
        ("golden balances", golden_balances, Some(Duration::from_secs(1))),
        ("golden resonances", golden_resonances, Some(Duration::from_secs(1))),
        ("Burgers eps=2 reduced series", golden_burgers_reduced, None),
        ("Burgers eps=2 travelling series", golden_burgers_travelling, Some(Duration::from_secs(60))),
        ("KdV eps=2 travelling series", golden_kdv_travelling, Some(Duration::from_secs(60))),
        ("residual oracle", residual_oracle, None),
        ("PT invariance", pt_invariance, None),
        ("failure detection", failure_detection, None),
        ("convergence diagnostics", convergence_diagnostics, None),
        ("numeric cross-check", numeric_cross_check, Some(Duration::from_secs(10))),
    ];
    let mut failed = 0;
    for (k, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut result = check();
        let took = start.elapsed();
        if let (Ok(()), Some(limit)) = (&result, limit) {
            if took > *limit {
                result = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2?})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2?}): {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
