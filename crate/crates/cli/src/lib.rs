//! Command-line driver: argument handling, model loading and report output.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptpainleve::analysis::{
    bound_check, csv_rows, numeric_compare, reduce_travelling, root_test, CoefficientSequence, CompareOptions,
    DEFAULT_PREC,
};
use ptpainleve::deform::apply_deformation;
use ptpainleve::frontend::{
    builtin, coefficient_records, parse_system, to_source, BalanceRecord, DeformValue, Diagnostics, PDESystem,
    Report, ResonanceRecord,
};
use ptpainleve::painleve::{
    analyse, dominant_balance, expand, integrality, residual_check, resonance_spectrum, Ansatz, Classification,
    ExpandOptions, GENERAL_MIN_CAP,
};
use ptpainleve::{Expr, GaussRational};

/// Largest relative deviation accepted by `travelling`.
pub const DEVIATION_LIMIT: f64 = 1e-6;

#[derive(Parser, Debug)]
#[command(name = "ptpainleve", version, about = "Painlevé test for PT-deformed evolution equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Leading-order (dominant balance) analysis.
    Balance(Common),
    /// Resonance polynomial, integer resonances and integrality.
    Resonances(Common),
    /// Exact Laurent expansion about the singular manifold.
    Expand(Common),
    /// Full test with a PASSES / DEFECTIVE / FAILS verdict.
    Classify(Common),
    /// Root test, coefficient bound and numeric comparison.
    Converge(Common),
    /// Travelling-wave ODE and its integration against the series.
    Travelling(Common),
    /// Substitutes the truncated series back into the equation.
    Verify(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Builtin model name (burgers, kdv) or path to a model file.
    #[arg(long)]
    model: String,
    /// Deformation exponent of the first-derivative slot: an integer or `generic`.
    #[arg(long)]
    epsilon: Option<String>,
    /// Exponent of the higher-derivative slot; defaults to --epsilon.
    #[arg(long)]
    mu: Option<String>,
    /// Keep both deformation exponents symbolic.
    #[arg(long)]
    generic: bool,
    /// Truncation order N (30 for burgers, 33 for kdv unless given).
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum)]
    ansatz: Option<AnsatzArg>,
    /// Value of the resonance coefficient λ₂: a rational, `free` or `0`.
    #[arg(long)]
    lambda2: Option<String>,
    #[arg(long, default_value = "1")]
    kappa: String,
    #[arg(long, default_value = "1")]
    omega: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AnsatzArg {
    General,
    Reduced,
    Travelling,
}

impl From<AnsatzArg> for Ansatz {
    fn from(a: AnsatzArg) -> Self {
        match a {
            AnsatzArg::General => Ansatz::General,
            AnsatzArg::Reduced => Ansatz::Reduced,
            AnsatzArg::Travelling => Ansatz::Travelling,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Text,
    Csv,
}

/// Failure with its exit status.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn failed(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

impl From<ptpainleve::Error> for Failure {
    fn from(e: ptpainleve::Error) -> Self {
        failed(e.to_string())
    }
}

/// Runs the tool on `argv` (program name first) and returns the exit status:
/// 0 on pass-class results, 1 on failure or I/O error, 2 on usage errors.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

struct Loaded {
    name: String,
    system: PDESystem,
    source: String,
    eps: Option<i64>,
}

fn deform_value(s: &str) -> Result<DeformValue, Failure> {
    if s == "generic" {
        return Ok(DeformValue::Symbolic);
    }
    match s.parse::<i64>() {
        Ok(n) if n >= 1 => Ok(DeformValue::Int(n)),
        _ => Err(usage(format!("deformation exponent must be a positive integer or `generic`, got `{s}`"))),
    }
}

fn load(c: &Common) -> Result<Loaded, Failure> {
    let (name, template) = match builtin(&c.model) {
        Some(t) => (c.model.clone(), t),
        None => {
            let path = Path::new(&c.model);
            let text = fs::read_to_string(path).map_err(|e| failed(format!("{}: {e}", path.display())))?;
            let sys = parse_system(&text).map_err(|e| failed(format!("{}: {e}", path.display())))?;
            (sys.name.to_string(), sys)
        }
    };
    let source = to_source(&template);
    if template.deformation.is_empty() {
        return Ok(Loaded { name, system: template, source, eps: None });
    }
    let (eps, mu) = if c.generic {
        (DeformValue::Symbolic, DeformValue::Symbolic)
    } else {
        let e = deform_value(c.epsilon.as_deref().unwrap_or("1"))?;
        let m = match &c.mu {
            Some(m) => deform_value(m)?,
            None => e,
        };
        (e, m)
    };
    let system = apply_deformation(&template, eps, mu)?;
    let eps = match eps {
        DeformValue::Int(n) => Some(n),
        DeformValue::Symbolic => None,
    };
    Ok(Loaded { name, system, source, eps })
}

fn rational(name: &str, s: &str) -> Result<GaussRational, Failure> {
    s.parse::<GaussRational>().map_err(|_| usage(format!("--{name} expects a rational number, got `{s}`")))
}

fn bindings(c: &Common) -> Result<BTreeMap<String, GaussRational>, Failure> {
    Ok([("kappa".to_string(), rational("kappa", &c.kappa)?), ("omega".to_string(), rational("omega", &c.omega)?)]
        .into())
}

fn default_order(l: &Loaded) -> usize {
    if l.name == "kdv" {
        33
    } else {
        30
    }
}

/// `free` leaves λ₂ open; otherwise it is bound to the given value.
fn expand_options(c: &Common, l: &Loaded, ansatz: Ansatz, lambda2_default: &str) -> Result<ExpandOptions, Failure> {
    let mut choices = BTreeMap::new();
    let v = c.lambda2.as_deref().unwrap_or(lambda2_default);
    if v != "free" {
        choices.insert(2, Expr::constant(rational("lambda2", v)?));
    }
    let fallback = if ansatz == Ansatz::General { GENERAL_MIN_CAP } else { default_order(l) };
    Ok(ExpandOptions { ansatz, order: c.order.unwrap_or(fallback), choices })
}

fn emit(c: &Common, report: &Report, csv: Option<String>) -> Result<(), Failure> {
    let body = match c.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
        Format::Csv => match csv {
            Some(s) => s,
            None => coefficients_csv(report)?,
        },
    };
    match &c.out {
        Some(path) => fs::write(path, body).map_err(|e| failed(format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes()).map_err(|e| failed(format!("stdout: {e}")))
        }
    }
}

fn coefficients_csv(report: &Report) -> Result<String, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| failed(e.to_string());
    w.write_record(["index", "power", "value"]).map_err(io)?;
    for c in &report.coefficients {
        w.write_record([c.index.to_string(), c.power.to_string(), c.value.clone()]).map_err(io)?;
    }
    into_string(w)
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String, Failure> {
    let bytes = w.into_inner().map_err(|e| failed(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| failed(e.to_string()))
}

fn dispatch(cmd: Command) -> Result<i32, Failure> {
    match cmd {
        Command::Balance(c) => balance(&c),
        Command::Resonances(c) => resonances(&c),
        Command::Expand(c) => expand_cmd(&c),
        Command::Classify(c) => classify_cmd(&c),
        Command::Converge(c) => converge(&c),
        Command::Travelling(c) => travelling(&c),
        Command::Verify(c) => verify(&c),
    }
}

fn balance(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let mut report = Report::new(&l.name, "balance", &l.source);
    report.balance = dominant_balance(&l.system)?.iter().map(BalanceRecord::from_balance).collect();
    emit(c, &report, None)?;
    Ok(if report.balance.is_empty() { 1 } else { 0 })
}

fn resonances(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let mut report = Report::new(&l.name, "resonances", &l.source);
    let balances = dominant_balance(&l.system)?;
    report.balance = balances.iter().map(BalanceRecord::from_balance).collect();
    let Some(b) = balances.first() else {
        emit(c, &report, None)?;
        return Ok(1);
    };
    let res = resonance_spectrum(&l.system, b)?;
    let integ = integrality(&res);
    report.resonances = Some(ResonanceRecord::from_report(&res, Some(&integ), l.eps));
    emit(c, &report, None)?;
    Ok(0)
}

fn ansatz(c: &Common, default: Ansatz) -> Ansatz {
    c.ansatz.map_or(default, Ansatz::from)
}

fn expand_cmd(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let a = ansatz(c, Ansatz::Reduced);
    let opts = expand_options(c, &l, a, "free")?;
    let x = expand(&l.system, &opts)?;
    let mut report = Report::new(&l.name, a.name(), &l.source);
    report.coefficients = coefficient_records(&x);
    emit(c, &report, None)?;
    Ok(if x.failure.is_some() { 1 } else { 0 })
}

fn classify_cmd(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let a = ansatz(c, Ansatz::Reduced);
    let opts = expand_options(c, &l, a, "free")?;
    let analysis = analyse(&l.system, &opts)?;
    let report = Report::new(&l.name, a.name(), &l.source).with_analysis(&analysis, l.eps);
    emit(c, &report, None)?;
    Ok(match analysis.verdict.classification {
        Classification::Passes | Classification::Defective => 0,
        Classification::Fails => 1,
    })
}

fn converge(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let opts = expand_options(c, &l, Ansatz::Travelling, "0")?;
    let x = expand(&l.system, &opts)?;
    let b = bindings(c)?;
    let seq = CoefficientSequence::from_expansion(&x, &b, DEFAULT_PREC)?;
    let root = root_test(&seq);
    let bound = bound_check(&seq, opts.order);
    let cmp = numeric_compare(&x, &l.system, &CompareOptions::new(b)).ok();
    let mut report = Report::new(&l.name, "travelling", &l.source);
    report.coefficients = coefficient_records(&x);
    report.diagnostics = Some(Diagnostics::new(&seq, &root, &bound, cmp.as_ref()));
    let csv = if c.format == Format::Csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| failed(e.to_string());
        w.write_record(["n", "re_num", "re_den", "im_num", "im_den", "abs", "abs_nth_root", "bound_rhs", "holds"])
            .map_err(io)?;
        for row in csv_rows(&seq, &bound) {
            w.write_record(&row).map_err(io)?;
        }
        Some(into_string(w)?)
    } else {
        None
    };
    emit(c, &report, csv)?;
    let ok = root.verdict == ptpainleve::analysis::RootVerdict::ConvergentIndication && bound.all_hold;
    Ok(if ok { 0 } else { 1 })
}

fn travelling(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let ode = reduce_travelling(&l.system, &Expr::param("omega"))?;
    let opts = expand_options(c, &l, Ansatz::Travelling, "0")?;
    let x = expand(&l.system, &opts)?;
    let cmp = numeric_compare(&x, &l.system, &CompareOptions::new(bindings(c)?))?;
    if c.format == Format::Json {
        let doc = serde_json::json!({
            "model": l.name,
            "ode": ode.ode.to_string(),
            "order": ode.order,
            "integrated": ode.integrated.as_ref().map(|i| serde_json::json!({
                "factor": i.factor.to_string(),
                "potential": i.potential.to_string(),
            })),
            "comparison": cmp,
        });
        let body = serde_json::to_string_pretty(&doc).map_err(|e| failed(e.to_string()))? + "\n";
        write_out(c, &body)?;
    } else {
        let mut body = format!("ode: {} = 0\n", ode.ode);
        if let Some(i) = &ode.integrated {
            body += &format!("integrated: {} * d/dz({}) = 0\n", i.factor, i.potential);
        }
        body += &format!("N = {}: max relative deviation {:e}\n", cmp.order, cmp.max_rel_deviation);
        write_out(c, &body)?;
    }
    Ok(if cmp.max_rel_deviation < DEVIATION_LIMIT { 0 } else { 1 })
}

fn write_out(c: &Common, body: &str) -> Result<(), Failure> {
    match &c.out {
        Some(path) => fs::write(path, body).map_err(|e| failed(format!("{}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn verify(c: &Common) -> Result<i32, Failure> {
    let l = load(c)?;
    let a = ansatz(c, Ansatz::Reduced);
    let opts = expand_options(c, &l, a, "free")?;
    let x = expand(&l.system, &opts)?;
    let r = residual_check(&l.system, &x)?;
    let mut body = format!(
        "{} ({}): residual checked at phi^{}..phi^{}\n",
        l.name,
        a.name(),
        r.checked.start(),
        r.checked.end()
    );
    for (k, e) in &r.nonzero {
        body += &format!("  phi^{k}: {e}\n");
    }
    body += if r.vanishes() { "residual vanishes\n" } else { "residual does not vanish\n" };
    write_out(c, &body)?;
    Ok(if r.vanishes() { 0 } else { 1 })
}
