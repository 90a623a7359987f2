//! Python bindings.
//!
//! Reports come back as plain Python dicts and lists with the same layout as
//! the JSON documents written by the `gseed` command; rationals are strings.

use std::sync::Arc;

use gseed_core::asymptotics::{self, empirical_growth, predict_growth, saddle_point as core_saddle};
use gseed_core::corpus;
use gseed_core::criterion::{self, certify as core_certify, CertifyConfig};
use gseed_core::decomposition::{verify_decomposition, Decomposer};
use gseed_core::linear_forms::{build_linear_form, pade_order_check, partial_fractions as core_partial_fractions};
use gseed_core::operator::{exponent_report, structure_summary, theta_form};
use gseed_core::parse::parse_operator;
use gseed_core::poly::parse_rational;
use gseed_core::series::{coefficients, half_radius_point, CoefficientStream};
use gseed_core::{BigComplex, GFunctionSpec};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    Ok(match v {
        Value::Null => py.None().into_bound(py),
        Value::Bool(b) => b.into_pyobject(py)?.to_owned().into_any(),
        Value::Number(n) => match (n.as_i64(), n.as_u64()) {
            (Some(i), _) => i.into_pyobject(py)?.into_any(),
            (None, Some(u)) => u.into_pyobject(py)?.into_any(),
            _ => n.as_f64().unwrap_or(f64::NAN).into_pyobject(py)?.into_any(),
        },
        Value::String(s) => s.into_pyobject(py)?.into_any(),
        Value::Array(items) => {
            let out = items.iter().map(|x| to_py(py, x)).collect::<PyResult<Vec<_>>>()?;
            PyList::new(py, out)?.into_any()
        }
        Value::Object(map) => {
            let d = PyDict::new(py);
            for (k, x) in map {
                d.set_item(k, to_py(py, x)?)?;
            }
            d.into_any()
        }
    })
}

fn report<'py, T: Serialize>(py: Python<'py>, x: &T) -> PyResult<Bound<'py, PyAny>> {
    to_py(py, &serde_json::to_value(x).map_err(err)?)
}

fn rational(s: &str) -> PyResult<Rational> {
    parse_rational(s).map_err(err)
}

/// A G-function given by an annihilating operator and initial coefficients.
#[pyclass(name = "Spec", module = "gseed", frozen)]
struct PySpec {
    dec: Decomposer,
}

impl PySpec {
    fn wrap(spec: GFunctionSpec) -> Self {
        PySpec {
            dec: Decomposer::new(Arc::new(CoefficientStream::new(spec))),
        }
    }

    fn stream(&self) -> &CoefficientStream {
        self.dec.stream()
    }

    fn alpha(&self, alpha: Option<&str>) -> PyResult<Rational> {
        match alpha {
            Some(a) => rational(a),
            None => half_radius_point(self.stream()).map_err(err),
        }
    }
}

#[pymethods]
impl PySpec {
    /// Build from an operator string such as `"(1-z)*D - 1"` and initial coefficients.
    #[new]
    #[pyo3(signature = (operator, initial, label = "unnamed"))]
    fn new(operator: &str, initial: Vec<String>, label: &str) -> PyResult<Self> {
        let op = parse_operator(operator).map_err(err)?;
        let init = initial.iter().map(|s| rational(s)).collect::<PyResult<Vec<_>>>()?;
        Ok(Self::wrap(GFunctionSpec::new(label, op, init).map_err(err)?))
    }

    /// Parse a spec document (operator and initial data, or hypergeometric parameters).
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self::wrap(GFunctionSpec::from_json_str(text).map_err(err)?))
    }

    /// A series from the bundled corpus.
    #[staticmethod]
    fn from_corpus(label: &str) -> PyResult<Self> {
        Ok(Self::wrap(corpus::spec_by_label(label).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(self.stream().spec()).map_err(err)
    }

    #[getter]
    fn label(&self) -> String {
        self.stream().spec().label.clone()
    }

    #[getter]
    fn ell0(&self) -> usize {
        self.dec.ell0()
    }

    /// θ-form, structure and exponents of the operator.
    fn analyze<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let spec = self.stream().spec();
        to_py(
            py,
            &json!({
                "theta_form": spec.tf,
                "structure": structure_summary(&spec.tf),
                "exponents": spec.exponents,
            }),
        )
    }

    /// `A_0, …, A_n` as rational strings.
    fn coefficients(&self, n: usize) -> PyResult<Vec<String>> {
        Ok(coefficients(self.stream(), n)
            .map_err(err)?
            .iter()
            .map(|x| x.to_string())
            .collect())
    }

    /// Default evaluation point: `1/⌈2/R⌉` for the radius lower bound `R`.
    fn half_radius_point(&self) -> PyResult<String> {
        Ok(half_radius_point(self.stream()).map_err(err)?.to_string())
    }

    /// Exact decomposition of `F_n^[s]` on the basis.
    #[pyo3(signature = (n, s = 1))]
    fn decompose<'py>(&self, py: Python<'py>, n: usize, s: u32) -> PyResult<Bound<'py, PyAny>> {
        let rec = py.detach(|| self.dec.decompose(n, s)).map_err(err)?;
        report(py, &*rec)
    }

    /// `|F_n^[s](α) − expansion|` at `bits` of working precision.
    #[pyo3(signature = (n, s = 1, alpha = None, bits = 128))]
    fn decomposition_residual(&self, py: Python<'_>, n: usize, s: u32, alpha: Option<&str>, bits: u32) -> PyResult<f64> {
        let alpha = self.alpha(alpha)?;
        py.detach(|| {
            let rec = self.dec.decompose(n, s)?;
            verify_decomposition(self.stream(), &rec, &alpha, bits).map(|r| r.to_f64())
        })
        .map_err(err)
    }

    /// The linear form `T_{S,r,n}(1/α)` with its integer coefficients and checks.
    #[pyo3(signature = (big_s, r, n, alpha = None, bits = 256))]
    fn linear_form<'py>(
        &self,
        py: Python<'py>,
        big_s: u32,
        r: u32,
        n: usize,
        alpha: Option<&str>,
        bits: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let alpha = self.alpha(alpha)?;
        let rec = py
            .detach(|| build_linear_form(&self.dec, big_s, r, n, &alpha, bits))
            .map_err(err)?;
        report(py, &rec)
    }

    /// Exact check that the reduced form vanishes to order `rn` at infinity.
    fn pade_check<'py>(&self, py: Python<'py>, big_s: u32, r: u32, n: usize) -> PyResult<Bound<'py, PyAny>> {
        let rep = py.detach(|| pade_order_check(&self.dec, big_s, r, n)).map_err(err)?;
        report(py, &rep)
    }

    /// Saddle-point prediction of `lim |T_n|^{1/n}`.
    #[pyo3(signature = (big_s, r, alpha = None, bits = 128))]
    fn predict_growth<'py>(
        &self,
        py: Python<'py>,
        big_s: u32,
        r: u32,
        alpha: Option<&str>,
        bits: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let alpha = self.alpha(alpha)?;
        let rep = py
            .detach(|| predict_growth(self.stream(), big_s, r, &alpha, bits))
            .map_err(err)?;
        report(py, &rep)
    }

    /// Fit of `log|T_n|` over a window of `n`.
    #[pyo3(signature = (big_s, r, window, alpha = None, bits = 512))]
    fn empirical_growth<'py>(
        &self,
        py: Python<'py>,
        big_s: u32,
        r: u32,
        window: (usize, usize),
        alpha: Option<&str>,
        bits: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let alpha = self.alpha(alpha)?;
        let rep = py
            .detach(|| empirical_growth(self.stream(), big_s, r, &alpha, window.0, window.1, bits))
            .map_err(err)?;
        report(py, &rep)
    }

    /// Heuristic dimension certificate from a window of linear forms.
    #[pyo3(signature = (big_s, alpha = None, r = None, window = (100, 160), stride = 1, bits = 256))]
    fn certify<'py>(
        &self,
        py: Python<'py>,
        big_s: u32,
        alpha: Option<&str>,
        r: Option<u32>,
        window: (usize, usize),
        stride: usize,
        bits: u32,
    ) -> PyResult<Bound<'py, PyAny>> {
        let alpha = self.alpha(alpha)?;
        let cfg = CertifyConfig { r, window, stride, bits };
        let cert = py
            .detach(|| core_certify(&self.dec, &alpha, big_s, &cfg))
            .map_err(err)?;
        report(py, &cert)
    }

    fn __repr__(&self) -> String {
        format!("Spec(label={:?}, ell0={})", self.label(), self.ell0())
    }
}

/// θ-form, structure and exponents of an operator string.
#[pyfunction]
fn analyze_operator<'py>(py: Python<'py>, operator: &str) -> PyResult<Bound<'py, PyAny>> {
    let tf = theta_form(&parse_operator(operator).map_err(err)?).map_err(err)?;
    to_py(
        py,
        &json!({
            "theta_form": tf,
            "structure": structure_summary(&tf),
            "exponents": exponent_report(&tf),
        }),
    )
}

/// Partial-fraction coefficients `c[j−1][s−1]` of the rational kernel, as strings.
#[pyfunction]
fn partial_fractions(big_s: u32, r: u32, n: usize) -> PyResult<Vec<Vec<String>>> {
    let t = core_partial_fractions(big_s, r, n).map_err(err)?;
    Ok(t.c
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect())
        .collect())
}

/// The root `τ` of `zt^{S+1} = (r−t)(t+1)^S` with `Re τ > 1/2`.
#[pyfunction]
#[pyo3(signature = (big_s, r, z, bits = 256))]
fn saddle_point(big_s: u32, r: u32, z: Complex64, bits: u32) -> PyResult<Complex64> {
    let root = core_saddle(big_s, r, &BigComplex::from_c64(bits, z), bits).map_err(err)?;
    Ok(root.tau.to_c64())
}

#[pyfunction]
fn recommended_r(big_s: u32) -> u32 {
    asymptotics::recommended_r(big_s)
}

/// Smallest shift `δ < T` with `|Σ c_t ζ_t^{n+δ}| ≥ |c_1 Δ_0|/T!`.
#[pyfunction]
fn shift_select<'py>(py: Python<'py>, c: Vec<Complex64>, zeta: Vec<Complex64>, n: u32) -> PyResult<Bound<'py, PyAny>> {
    report(py, &criterion::shift_select(&c, &zeta, n).map_err(err)?)
}

/// `(1 − log a₀/log b)/degree` with its ceiling.
#[pyfunction]
#[pyo3(signature = (a0, b, degree = 1))]
fn dimension_bound<'py>(py: Python<'py>, a0: f64, b: f64, degree: u32) -> PyResult<Bound<'py, PyAny>> {
    report(py, &criterion::dimension_bound(a0, b, degree).map_err(err)?)
}

#[pyfunction]
fn corpus_labels() -> Vec<String> {
    corpus::bundled().entries.into_iter().map(|e| e.label).collect()
}

/// Structural and coefficient checks of the bundled corpus.
#[pyfunction]
fn corpus_check<'py>(py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
    report(py, &corpus::check(&corpus::bundled()))
}

#[pymodule]
fn gseed(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpec>()?;
    m.add_function(wrap_pyfunction!(analyze_operator, m)?)?;
    m.add_function(wrap_pyfunction!(partial_fractions, m)?)?;
    m.add_function(wrap_pyfunction!(saddle_point, m)?)?;
    m.add_function(wrap_pyfunction!(recommended_r, m)?)?;
    m.add_function(wrap_pyfunction!(shift_select, m)?)?;
    m.add_function(wrap_pyfunction!(dimension_bound, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_labels, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_check, m)?)?;
    m.add("REPORT_VERSION", gseed_core::REPORT_VERSION)?;
    Ok(())
}
