//! `gseed`: command-line front end producing versioned JSON reports.
//!
//! Exit status is 0 on success, 1 on an input error and 2 when a computed
//! identity or corpus check fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use gseed_core::asymptotics::{empirical_growth, predict_growth, recommended_r};
use gseed_core::corpus::{self, Corpus};
use gseed_core::criterion::{certify, CertifyConfig};
use gseed_core::decomposition::{verify_decomposition, Decomposer};
use gseed_core::linear_forms::{build_linear_form, pade_order_check};
use gseed_core::operator::{exponent_report, structure_summary, theta_form};
use gseed_core::parse::operator_from_json;
use gseed_core::poly::parse_rational;
use gseed_core::series::{coefficients, half_radius_point, recurrence_residual, CoefficientStream};
use gseed_core::{DiffOperator, Error, GFunctionSpec, REPORT_VERSION};
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "gseed", version, about = "Shifted G-function series, linear forms and growth reports")]
struct Cli {
    /// Print the JSON report to stdout instead of a summary.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// θ-form, exponents and structural integers of an operator.
    Analyze(SpecArgs),
    /// Taylor coefficients A_0..A_n.
    Coeffs {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
    },
    /// Decomposition of F_n^[s] on the basis, checked numerically at alpha.
    Decompose {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        n: usize,
        /// Weight s of the shifted series.
        #[arg(long = "s", default_value_t = 1)]
        s: u32,
        #[command(flatten)]
        point: PointArgs,
    },
    /// The linear form T_{S,r,n}(1/alpha) with its integer coefficients.
    Linform {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        point: PointArgs,
    },
    /// Saddle-point growth prediction, optionally compared with a measured window.
    Asymp {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        point: PointArgs,
        /// Measure log|T_n| over n in A..B.
        #[arg(long, value_parser = parse_window)]
        window: Option<(usize, usize)>,
    },
    /// Heuristic dimension certificate from a window of linear forms.
    Certify {
        #[command(flatten)]
        spec: SpecArgs,
        #[command(flatten)]
        shape: ShapeArgs,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_parser = parse_window, default_value = "100:160")]
        window: (usize, usize),
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
    /// Runs the structural and coefficient checks of a corpus.
    CorpusCheck {
        /// Corpus JSON file; the bundled corpus when absent.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct SpecArgs {
    /// Spec JSON file, or `corpus:LABEL` for a bundled entry.
    #[arg(long)]
    spec: String,
}

#[derive(Args, Debug)]
struct ShapeArgs {
    #[arg(long = "S")]
    big_s: u32,
    /// Defaults to ⌊S/(log S)²⌋.
    #[arg(long)]
    r: Option<u32>,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Rational evaluation point; defaults to a point below half the radius.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long, default_value_t = 256)]
    bits: u32,
}

fn parse_window(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("window must be A:B, got {s:?}"))?;
    let a: usize = a.trim().parse().map_err(|_| format!("bad window start {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("bad window end {b:?}"))?;
    if a >= b {
        return Err(format!("window start {a} must be below its end {b}"));
    }
    Ok((a, b))
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::PadeViolation(_)
            | Error::CasoratianZero(_)
            | Error::NonConvergence(_)
            | Error::NotStabilized(_)
            | Error::WrongHalfPlane(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

/// A finished command: its JSON result, a human summary, and whether all checks passed.
struct Report {
    command: &'static str,
    config: Value,
    result: Value,
    summary: Vec<String>,
    failures: Vec<String>,
}

fn to_value<T: Serialize>(x: &T) -> Outcome<Value> {
    serde_json::to_value(x).map_err(|e| Failure::Input(e.to_string()))
}

fn read_json(path: &Path) -> Outcome<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_spec(arg: &str) -> Outcome<GFunctionSpec> {
    match arg.strip_prefix("corpus:") {
        Some(label) => Ok(corpus::spec_by_label(label)?),
        None => Ok(GFunctionSpec::from_json(&read_json(Path::new(arg))?)?),
    }
}

/// Operator-only loading: initial data is optional for `analyze`.
fn load_operator(arg: &str) -> Outcome<(String, DiffOperator)> {
    if let Some(label) = arg.strip_prefix("corpus:") {
        let entry = corpus::bundled()
            .entries
            .into_iter()
            .find(|e| e.label == label)
            .ok_or_else(|| Failure::Input(format!("no corpus entry {label:?}")))?;
        return Ok((entry.label.clone(), entry.operator()?));
    }
    let v = read_json(Path::new(arg))?;
    let label = v.get("label").and_then(|l| l.as_str()).unwrap_or("unnamed").to_string();
    if let Some(h) = v.get("hypergeometric") {
        let spec = GFunctionSpec::from_json(&json!({ "hypergeometric": h }))?;
        return Ok((label, spec.op));
    }
    let op = v
        .get("operator")
        .ok_or_else(|| Failure::Input("missing \"operator\"".into()))?;
    Ok((label, operator_from_json(op)?))
}

fn parse_alpha(alpha: &Option<String>, stream: &CoefficientStream) -> Outcome<Rational> {
    match alpha {
        Some(s) => parse_rational(s).map_err(Failure::Input),
        None => Ok(half_radius_point(stream)?),
    }
}

fn check_bits(bits: u32) -> Outcome<()> {
    if bits < 64 {
        return Err(Failure::Input(format!("--bits must be at least 64, got {bits}")));
    }
    Ok(())
}

fn resolve_r(shape: &ShapeArgs) -> Outcome<u32> {
    let r = shape.r.unwrap_or_else(|| recommended_r(shape.big_s));
    if r > shape.big_s {
        return Err(Failure::Input(format!("need r ≤ S, got r = {r}, S = {}", shape.big_s)));
    }
    Ok(r)
}

fn analyze(spec: &SpecArgs) -> Outcome<Report> {
    let (label, op) = load_operator(&spec.spec)?;
    let tf = theta_form(&op)?;
    let exps = exponent_report(&tf);
    let st = structure_summary(&tf);
    let show = |roots: &[(Rational, usize)]| {
        roots
            .iter()
            .flat_map(|(x, m)| std::iter::repeat_n(x.to_string(), *m))
            .collect::<Vec<_>>()
            .join(", ")
    };
    let summary = vec![
        format!("label: {label}"),
        format!("(μ, δ, ω, ℓ) = ({}, {}, {}, {})", st.mu, st.delta, st.omega, st.ell),
        format!("ℓ₀ = {}", exps.ell0),
        format!("exponents at ∞: {{{}}}", show(&exps.at_infinity)),
        format!("exponents at 0: {{{}}}", show(&exps.at_zero)),
    ];
    Ok(Report {
        command: "analyze",
        config: json!({ "spec": spec.spec }),
        result: json!({
            "label": label,
            "operator": to_value(&op)?,
            "theta_form": to_value(&tf)?,
            "structure": to_value(&st)?,
            "exponents": to_value(&exps)?,
        }),
        summary,
        failures: Vec::new(),
    })
}

fn coeffs(spec: &SpecArgs, n: usize) -> Outcome<Report> {
    let stream = CoefficientStream::new(load_spec(&spec.spec)?);
    let a = coefficients(&stream, n)?;
    let bad: Vec<String> = (0..=n)
        .filter(|&k| recurrence_residual(stream.tf(), &a, k) != 0)
        .map(|k| format!("recurrence fails at index {k}"))
        .collect();
    let shown: Vec<String> = a.iter().map(|x| x.to_string()).collect();
    Ok(Report {
        command: "coeffs",
        config: json!({ "spec": spec.spec, "n": n }),
        summary: vec![format!("A_0..A_{n}: {}", shown.join(", "))],
        result: json!({ "label": stream.spec().label, "coefficients": shown }),
        failures: bad,
    })
}

fn decompose(spec: &SpecArgs, n: usize, s: u32, point: &PointArgs) -> Outcome<Report> {
    check_bits(point.bits)?;
    if s == 0 {
        return Err(Failure::Input("--s must be at least 1".into()));
    }
    let stream = Arc::new(CoefficientStream::new(load_spec(&spec.spec)?));
    let alpha = parse_alpha(&point.alpha, &stream)?;
    let dec = Decomposer::new(stream.clone());
    let rec = dec.decompose(n, s)?;
    let residual = verify_decomposition(&stream, &rec, &alpha, point.bits)?.to_f64();
    let tol = 2f64.powi(-(point.bits as i32) / 2);
    let mut failures = Vec::new();
    if !(residual < tol) {
        failures.push(format!("decomposition residual {residual:.3e} ≥ {tol:.3e}"));
    }
    Ok(Report {
        command: "decompose",
        config: json!({ "spec": spec.spec, "n": n, "s": s, "alpha": alpha.to_string(), "bits": point.bits }),
        summary: vec![
            format!("F_{n}^[{s}] on ℓ₀ = {} basis, denominator {}", dec.ell0(), rec.denominator()),
            format!("residual at α = {alpha}: {residual:.3e}"),
        ],
        result: json!({
            "label": stream.spec().label,
            "ell0": dec.ell0(),
            "record": to_value(&*rec)?,
            "residual": residual,
            "tolerance": tol,
        }),
        failures,
    })
}

fn linform(spec: &SpecArgs, shape: &ShapeArgs, n: usize, point: &PointArgs) -> Outcome<Report> {
    check_bits(point.bits)?;
    let r = resolve_r(shape)?;
    let stream = Arc::new(CoefficientStream::new(load_spec(&spec.spec)?));
    let alpha = parse_alpha(&point.alpha, &stream)?;
    let dec = Decomposer::new(stream.clone());
    let rec = build_linear_form(&dec, shape.big_s, r, n, &alpha, point.bits)?;
    let pade = pade_order_check(&dec, shape.big_s, r, n)?;
    let tol = 2f64.powi(-(point.bits as i32) / 2);
    let mut failures = Vec::new();
    if !(rec.relative_residual < tol) {
        failures.push(format!("relative residual {:.3e} ≥ {tol:.3e}", rec.relative_residual));
    }
    if !rec.degree_bounds_hold {
        failures.push("degree bounds of C, C̃ exceeded".into());
    }
    if !rec.delta_bound_clears {
        failures.push("Δ_n does not divide the predicted denominator".into());
    }
    Ok(Report {
        command: "linform",
        config: json!({
            "spec": spec.spec, "S": shape.big_s, "r": r, "n": n,
            "alpha": alpha.to_string(), "bits": point.bits,
        }),
        summary: vec![
            format!("T_{{{},{r},{n}}}(1/α) = {}", shape.big_s, rec.value.re().to_string_radix(10, Some(20))),
            format!("residual {:.3e}, relative {:.3e}", rec.residual, rec.relative_residual),
            format!("Δ_n = {}", rec.delta_n),
            format!("Padé order: first nonzero w-power {:?}, rn = {}", pade.first_nonzero, pade.rn),
        ],
        result: json!({
            "label": stream.spec().label,
            "record": to_value(&rec)?,
            "pade": to_value(&pade)?,
            "tolerance": tol,
        }),
        failures,
    })
}

fn asymp(spec: &SpecArgs, shape: &ShapeArgs, point: &PointArgs, window: Option<(usize, usize)>) -> Outcome<Report> {
    check_bits(point.bits)?;
    let r = resolve_r(shape)?;
    let stream = CoefficientStream::new(load_spec(&spec.spec)?);
    let alpha = parse_alpha(&point.alpha, &stream)?;
    let pred = predict_growth(&stream, shape.big_s, r, &alpha, point.bits)?;
    let mut summary = vec![format!("log a_pred = {:.9}", pred.log_a_pred)];
    let mut failures = Vec::new();
    if !pred.within_upper_bound {
        failures.push(format!("a_pred exceeds 1/r^(S−r) (log a_pred = {})", pred.log_a_pred));
    }
    let emp = match window {
        Some((n1, n2)) => {
            let e = empirical_growth(&stream, shape.big_s, r, &alpha, n1, n2, point.bits)?;
            summary.push(format!("log a_emp = {:.9} on [{n1}, {n2}]", e.log_a));
            Some(to_value(&e)?)
        }
        None => None,
    };
    Ok(Report {
        command: "asymp",
        config: json!({
            "spec": spec.spec, "S": shape.big_s, "r": r, "alpha": alpha.to_string(),
            "bits": point.bits, "window": window,
        }),
        summary,
        result: json!({ "label": stream.spec().label, "prediction": to_value(&pred)?, "empirical": emp }),
        failures,
    })
}

fn certify_cmd(
    spec: &SpecArgs,
    shape: &ShapeArgs,
    point: &PointArgs,
    window: (usize, usize),
    stride: usize,
) -> Outcome<Report> {
    check_bits(point.bits)?;
    let r = resolve_r(shape)?;
    let stream = Arc::new(CoefficientStream::new(load_spec(&spec.spec)?));
    let alpha = parse_alpha(&point.alpha, &stream)?;
    let dec = Decomposer::new(stream);
    let cfg = CertifyConfig {
        r: Some(r),
        window,
        stride,
        bits: point.bits,
    };
    let cert = certify(&dec, &alpha, shape.big_s, &cfg)?;
    let mut summary = vec![format!("a0 = {:.6e}, b = {:.6e}", cert.a0_emp, cert.b_emp)];
    summary.push(match &cert.bound {
        Some(b) => format!("dimension ≥ {} (bound {:.6})", b.at_least, b.value),
        None => "certificate withheld".into(),
    });
    summary.extend(cert.caveats.iter().map(|c| format!("caveat: {c}")));
    Ok(Report {
        command: "certify",
        config: json!({
            "spec": spec.spec, "S": shape.big_s, "r": r, "alpha": alpha.to_string(),
            "bits": point.bits, "window": window, "stride": stride,
        }),
        summary,
        result: to_value(&cert)?,
        failures: Vec::new(),
    })
}

fn corpus_check(path: &Option<PathBuf>) -> Outcome<Report> {
    let c: Corpus = match path {
        Some(p) => serde_json::from_value(read_json(p)?).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?,
        None => corpus::bundled(),
    };
    let rep = corpus::check(&c);
    let failures: Vec<String> = rep
        .failures()
        .map(|o| format!("{} / {}: {}", o.label, o.check, o.detail))
        .collect();
    let passed = rep.outcomes.len() - failures.len();
    Ok(Report {
        command: "corpus-check",
        config: json!({ "corpus": path.as_ref().map(|p| p.display().to_string()) }),
        summary: vec![format!("{passed}/{} checks passed", rep.outcomes.len())],
        result: to_value(&rep)?,
        failures,
    })
}

fn run(cli: &Cli) -> Outcome<Report> {
    match &cli.command {
        Command::Analyze(spec) => analyze(spec),
        Command::Coeffs { spec, n } => coeffs(spec, *n),
        Command::Decompose { spec, n, s, point } => decompose(spec, *n, *s, point),
        Command::Linform { spec, shape, n, point } => linform(spec, shape, *n, point),
        Command::Asymp { spec, shape, point, window } => asymp(spec, shape, point, *window),
        Command::Certify {
            spec,
            shape,
            point,
            window,
            stride,
        } => certify_cmd(spec, shape, point, *window, *stride),
        Command::CorpusCheck { corpus } => corpus_check(corpus),
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("GSEED_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen this early.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            return ExitCode::from(2);
        }
    };
    let doc = json!({
        "version": REPORT_VERSION,
        "command": report.command,
        "config": report.config,
        "passed": report.failures.is_empty(),
        "failures": report.failures,
        "result": report.result,
    });
    let text = serde_json::to_string_pretty(&doc).expect("report serializes") + "\n";
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(1);
        }
    }
    if cli.json {
        print!("{text}");
    } else {
        for line in &report.summary {
            println!("{line}");
        }
    }
    if report.failures.is_empty() {
        ExitCode::SUCCESS
    } else {
        for f in &report.failures {
            eprintln!("FAIL {f}");
        }
        ExitCode::from(2)
    }
}
