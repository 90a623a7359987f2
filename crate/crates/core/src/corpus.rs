//! Bundled example operators with their expected structural values.
//!
//! A [`Corpus`] is a plain JSON document so that a modified copy can be
//! checked with the same code path (`gseed corpus-check --corpus FILE`).

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{exponent_report, structure_summary, theta_form, DiffOperator};
use crate::parse::parse_operator;
use crate::poly::parse_rational;
use crate::series::{coefficients, CoefficientStream, GFunctionSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub a: Vec<String>,
    pub b: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Expectation {
    pub ell0: usize,
    /// Exponents at ∞ with multiplicity, as rational strings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents_at_infinity: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponents_at_zero: Option<Vec<String>>,
    /// `[μ, δ, ω, ℓ]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub structure: Option<[usize; 4]>,
    /// Leading Taylor coefficients `A_0, A_1, …`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub label: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub operator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hypergeometric: Option<HyperParams>,
    /// Present for entries that define a series, not just an operator.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<String>>,
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub version: u32,
    pub entries: Vec<CorpusEntry>,
}

fn rats(items: &[String]) -> Result<Vec<Rational>> {
    items
        .iter()
        .map(|s| parse_rational(s).map_err(Error::Document))
        .collect()
}

fn strs(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl CorpusEntry {
    pub fn operator(&self) -> Result<DiffOperator> {
        match (&self.operator, &self.hypergeometric) {
            (Some(text), _) => parse_operator(text),
            (None, Some(h)) => crate::operator::hypergeometric_operator(&rats(&h.a)?, &rats(&h.b)?),
            (None, None) => Err(Error::Document(format!("entry {:?} has no operator", self.label))),
        }
    }

    /// The series defined by the entry, if it carries initial data or is hypergeometric.
    pub fn spec(&self) -> Result<Option<GFunctionSpec>> {
        let initial = match (&self.initial, &self.hypergeometric) {
            (Some(init), _) => rats(init)?,
            (None, Some(_)) => vec![Rational::from(1)],
            (None, None) => return Ok(None),
        };
        GFunctionSpec::new(self.label.clone(), self.operator()?, initial).map(Some)
    }
}

fn hyper(label: &str, a: &[&str], b: &[&str]) -> CorpusEntry {
    CorpusEntry {
        label: label.into(),
        operator: None,
        hypergeometric: Some(HyperParams { a: strs(a), b: strs(b) }),
        initial: None,
        expect: Expectation {
            ell0: 1,
            exponents_at_infinity: Some(strs(a)),
            exponents_at_zero: Some(
                std::iter::once("0".to_string())
                    .chain(b.iter().map(|x| {
                        let v = Rational::from(1) - parse_rational(x).unwrap();
                        v.to_string()
                    }))
                    .collect(),
            ),
            structure: Some([b.len() + 1, b.len() + 2, b.len() + 1, 1]),
            coefficients: None,
        },
    }
}

fn series(label: &str, op: &str, init: &[&str], expect: Expectation) -> CorpusEntry {
    CorpusEntry {
        label: label.into(),
        operator: Some(op.into()),
        hypergeometric: None,
        initial: if init.is_empty() { None } else { Some(strs(init)) },
        expect,
    }
}

pub const GEOMETRIC: &str = "(1-z)*D - 1";
pub const LOG: &str = "(1-z)*D^2 - D";
pub const SQRT: &str = "(z^2-6*z+1)*D + (z-3)";
pub const LOG_SQUARED: &str = "(z-1)^2*D^3 + 3*(z-1)*D^2 + D";
pub const APERY: &str = "z^2*(1-34*z+z^2)*D^3 + z*(3-153*z+6*z^2)*D^2 + (1-112*z+7*z^2)*D + (z-5)";
/// `θ((1+z²)θ²)` as printed for the χ mod 4 series with `b = 2`.
pub const CHI_PRINTED: &str = "T*((1+z^2)*T^2)";
/// An annihilator of `Σ χ(k) z^k / k²`: `(θ−1)θ² + z²(θ+1)θ²`.
pub const CHI: &str = "(T-1)*T^2 + z^2*(T+1)*T^2";

/// The twelve structural examples plus series-level entries.
pub fn bundled() -> Corpus {
    let mut entries = vec![
        hyper("1/(k+1)", &["1", "1"], &["2"]),
        hyper("binom(2k,k)/(k+1)", &["1/2", "1"], &["2"]),
        hyper("binom(3k,2k)", &["1/3", "2/3"], &["1/2"]),
        hyper("binom(4k,2k)", &["1/4", "3/4"], &["1/2"]),
        hyper("binom(2k,k)/(k+1)^2", &["1/2", "1", "1"], &["2", "2"]),
        hyper("1/((k+1)^2 binom(2k+2,k+1))", &["1", "1", "1"], &["3/2", "2"]),
        hyper("binom(2k,k)/(2k+1)", &["1/2", "1/2"], &["3/2"]),
        hyper(
            "(30k)!k!/((15k)!(10k)!(6k)!)",
            &["1/30", "7/30", "11/30", "13/30", "17/30", "19/30", "23/30", "29/30"],
            &["1/5", "1/3", "2/5", "1/2", "3/5", "2/3", "4/5"],
        ),
    ];
    entries.push(series(
        "sqrt",
        SQRT,
        &["1"],
        Expectation {
            ell0: 2,
            exponents_at_infinity: Some(strs(&["1"])),
            coefficients: Some(strs(&["1", "3", "13", "63", "321", "1683"])),
            ..Default::default()
        },
    ));
    entries.push(series(
        "log-squared",
        LOG_SQUARED,
        &["0", "0", "1/2"],
        Expectation {
            ell0: 2,
            exponents_at_infinity: Some(strs(&["0", "0", "0"])),
            coefficients: Some(strs(&["0", "0", "1/2", "1/2", "11/24", "5/12"])),
            ..Default::default()
        },
    ));
    entries.push(series(
        "apery",
        APERY,
        &["1", "5"],
        Expectation {
            ell0: 2,
            exponents_at_infinity: Some(strs(&["1", "1", "1"])),
            coefficients: Some(strs(&["1", "5", "73", "1445", "33001"])),
            ..Default::default()
        },
    ));
    entries.push(series(
        "chi4-printed",
        CHI_PRINTED,
        &[],
        Expectation {
            ell0: 2,
            exponents_at_infinity: Some(strs(&["0", "0", "2"])),
            ..Default::default()
        },
    ));
    entries.push(series(
        "geometric",
        GEOMETRIC,
        &["1"],
        Expectation {
            ell0: 1,
            exponents_at_infinity: Some(strs(&["1"])),
            exponents_at_zero: Some(strs(&["0"])),
            structure: Some([1, 1, 0, 1]),
            coefficients: Some(strs(&["1", "1", "1", "1", "1"])),
        },
    ));
    entries.push(series(
        "log",
        LOG,
        &["0", "1"],
        Expectation {
            ell0: 1,
            coefficients: Some(strs(&["0", "1", "1/2", "1/3", "1/4"])),
            ..Default::default()
        },
    ));
    entries.push(series(
        "chi4",
        CHI,
        &["0", "1"],
        Expectation {
            ell0: 2,
            exponents_at_infinity: Some(strs(&["0", "0", "1"])),
            structure: Some([3, 5, 3, 2]),
            coefficients: Some(strs(&["0", "1", "0", "-1/9", "0", "1/25", "0", "-1/49"])),
            ..Default::default()
        },
    ));
    Corpus {
        version: crate::REPORT_VERSION,
        entries,
    }
}

/// Series used by the identity checks: every bundled entry that defines one.
pub fn series_corpus() -> Vec<GFunctionSpec> {
    bundled()
        .entries
        .iter()
        .filter(|e| e.initial.is_some() || e.label == "binom(2k,k)/(k+1)" || e.label == "binom(3k,2k)")
        .map(|e| e.spec().expect("bundled corpus entry").expect("series entry"))
        .collect()
}

pub fn spec_by_label(label: &str) -> Result<GFunctionSpec> {
    bundled()
        .entries
        .iter()
        .find(|e| e.label == label)
        .ok_or_else(|| Error::InvalidArgument(format!("no corpus entry {label:?}")))?
        .spec()?
        .ok_or_else(|| Error::InvalidArgument(format!("corpus entry {label:?} defines no series")))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub label: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub version: u32,
    pub outcomes: Vec<CheckOutcome>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

fn multiset(roots: &[(Rational, usize)]) -> Vec<Rational> {
    let mut v: Vec<Rational> = roots
        .iter()
        .flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m))
        .collect();
    v.sort();
    v
}

fn expect_multiset(items: &[String]) -> Result<Vec<Rational>> {
    let mut v = rats(items)?;
    v.sort();
    Ok(v)
}

fn show(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn check_entry(e: &CorpusEntry) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    let mut push = |check: &str, res: std::result::Result<String, String>| {
        let (passed, detail) = match res {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        out.push(CheckOutcome {
            label: e.label.clone(),
            check: check.into(),
            passed,
            detail,
        });
    };
    let tf = match e.operator().and_then(|op| theta_form(&op)) {
        Ok(tf) => tf,
        Err(err) => {
            push("operator", Err(err.to_string()));
            return out;
        }
    };
    let rep = exponent_report(&tf);
    let x = &e.expect;
    push(
        "ell0",
        if rep.ell0 == x.ell0 {
            Ok(format!("ℓ₀ = {}", rep.ell0))
        } else {
            Err(format!("ℓ₀ = {}, expected {}", rep.ell0, x.ell0))
        },
    );
    let mut compare = |name: &str, got: Vec<Rational>, want: &Option<Vec<String>>| {
        if let Some(w) = want {
            let res = match expect_multiset(w) {
                Ok(w) if w == got => Ok(show(&got)),
                Ok(w) => Err(format!("{} ≠ expected {}", show(&got), show(&w))),
                Err(err) => Err(err.to_string()),
            };
            push(name, res);
        }
    };
    compare("exponents at infinity", multiset(&rep.at_infinity), &x.exponents_at_infinity);
    compare("exponents at zero", multiset(&rep.at_zero), &x.exponents_at_zero);
    if let Some(st) = x.structure {
        let s = structure_summary(&tf);
        let got = [s.mu, s.delta, s.omega, s.ell];
        push(
            "structure",
            if got == st {
                Ok(format!("(μ, δ, ω, ℓ) = {got:?}"))
            } else {
                Err(format!("(μ, δ, ω, ℓ) = {got:?}, expected {st:?}"))
            },
        );
    }
    if e.initial.is_some() || x.coefficients.is_some() {
        let res = e.spec().and_then(|spec| {
            let spec = spec.ok_or_else(|| Error::Document("no initial data".into()))?;
            match &x.coefficients {
                None => Ok("initial data consistent".to_string()),
                Some(want) => {
                    let want = rats(want)?;
                    let stream = CoefficientStream::new(spec);
                    let got = coefficients(&stream, want.len() - 1)?;
                    match got.iter().zip(&want).position(|(g, w)| g != w) {
                        None => Ok(format!("A_0..A_{} match", want.len() - 1)),
                        Some(k) => Err(Error::Document(format!(
                            "A_{k} = {}, expected {}",
                            got[k], want[k]
                        ))),
                    }
                }
            }
        });
        push("coefficients", res.map_err(|e| e.to_string()));
    }
    out
}

/// Runs every structural and coefficient check in the corpus.
pub fn check(corpus: &Corpus) -> CorpusReport {
    CorpusReport {
        version: crate::REPORT_VERSION,
        outcomes: corpus.entries.iter().flat_map(check_entry).collect(),
    }
}
