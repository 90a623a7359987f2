//! Arithmetic of the Nesterenko-type dimension criterion and the heuristic
//! certificate built from a window of linear forms.

use num_complex::Complex64;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use crate::asymptotics::{least_squares, recommended_r};
use crate::decomposition::Decomposer;
use crate::error::{Error, Result};
use crate::linear_forms::{build_linear_form_cached, log_integer, BasisCache};

#[derive(Clone, Debug, Serialize)]
pub struct ShiftSelection {
    pub delta: usize,
    /// `|Σ c_t ζ_t^{n+δ}|`.
    pub value: f64,
    /// `|c_1 Δ_0|/T!`.
    pub bound: f64,
    pub satisfied: bool,
}

/// `Π_{i<j}(ζ_j − ζ_i)`.
pub fn vandermonde(zeta: &[Complex64]) -> Complex64 {
    let mut d = Complex64::new(1.0, 0.0);
    for j in 0..zeta.len() {
        for i in 0..j {
            d *= zeta[j] - zeta[i];
        }
    }
    d
}

/// Smallest `δ ∈ {0, …, T−1}` with `|Σ c_t ζ_t^{n+δ}| ≥ |c_1 Δ_0|/T!`.
pub fn shift_select(c: &[Complex64], zeta: &[Complex64], n: u32) -> Result<ShiftSelection> {
    let t = c.len();
    if t == 0 || zeta.len() != t {
        return Err(Error::InvalidArgument("c and ζ must be nonempty and of equal length".into()));
    }
    if c.iter().any(|x| x.norm() == 0.0) {
        return Err(Error::InvalidArgument("every c_t must be nonzero".into()));
    }
    if zeta.iter().any(|z| (z.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidArgument("every ζ_t must be unimodular".into()));
    }
    let d0 = vandermonde(zeta);
    if d0.norm() == 0.0 {
        return Err(Error::InvalidArgument("ζ_t must be pairwise distinct".into()));
    }
    let fact: f64 = (1..=t).map(|i| i as f64).product();
    let bound = (c[0] * d0).norm() / fact;
    let sums: Vec<f64> = (0..t)
        .map(|delta| {
            c.iter()
                .zip(zeta)
                .map(|(ct, zt)| ct * zt.powu(n + delta as u32))
                .sum::<Complex64>()
                .norm()
        })
        .collect();
    let slack = 1.0 - 1e-12;
    let (delta, satisfied) = match sums.iter().position(|v| *v >= bound * slack) {
        Some(d) => (d, true),
        None => (
            (0..t).max_by(|a, b| sums[*a].total_cmp(&sums[*b])).unwrap(),
            false,
        ),
    };
    Ok(ShiftSelection {
        delta,
        value: sums[delta],
        bound,
        satisfied,
    })
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct DimensionBound {
    /// `(1 − log a₀/log b)/degree`.
    pub value: f64,
    /// `⌈value⌉`.
    pub at_least: u64,
}

/// `(1 − log a₀/log b)/degree` from the logarithms of `a₀` and `b`.
pub fn dimension_bound_from_logs(log_a0: f64, log_b: f64, degree: u32) -> Result<DimensionBound> {
    if !(log_a0 < 0.0 && log_b > 0.0 && log_a0.is_finite() && log_b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < a0 < 1 < b, got log a0 = {log_a0}, log b = {log_b}"
        )));
    }
    if degree == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let value = (1.0 - log_a0 / log_b) / degree as f64;
    Ok(DimensionBound {
        value,
        at_least: value.ceil() as u64,
    })
}

pub fn dimension_bound(a0: f64, b: f64, degree: u32) -> Result<DimensionBound> {
    if !(a0 > 0.0) {
        return Err(Error::InvalidArgument(format!("need a0 > 0, got {a0}")));
    }
    dimension_bound_from_logs(a0.log2(), b.log2(), degree)
}

#[derive(Clone, Debug)]
pub struct CertifyConfig {
    /// Defaults to `⌊S/(log S)²⌋`.
    pub r: Option<u32>,
    pub window: (usize, usize),
    pub stride: usize,
    pub bits: u32,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            r: None,
            window: (100, 160),
            stride: 1,
            bits: 256,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateSample {
    pub n: usize,
    /// `log Δ_n`.
    pub log_delta: f64,
    /// `log|τ_n| = log Δ_n + log|T_n(1/α)|`.
    pub log_tau: f64,
    /// `log max |p|` over all integer coefficients.
    pub log_max_coefficient: f64,
    pub relative_residual: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub version: u32,
    pub label: String,
    #[serde(with = "crate::serde_util::rational")]
    pub alpha: Rational,
    #[serde(rename = "S")]
    pub big_s: u32,
    pub r: u32,
    pub window: (usize, usize),
    pub stride: usize,
    pub bits: u32,
    pub samples: Vec<CertificateSample>,
    pub log_a0: f64,
    pub a0_emp: f64,
    pub log_b: f64,
    pub b_emp: f64,
    pub degree: u32,
    pub bound: Option<DimensionBound>,
    pub caveats: Vec<String>,
}

/// Runs the linear-form pipeline over a window, fits the growth of `|τ_n|` and of
/// the integer coefficients against `[n, log n, 1]`, and reports the resulting bound.
pub fn certify(dec: &Decomposer, alpha: &Rational, big_s: u32, config: &CertifyConfig) -> Result<Certificate> {
    let r = config.r.unwrap_or_else(|| recommended_r(big_s));
    let (n1, n2) = config.window;
    let stride = config.stride.max(1);
    let ns: Vec<usize> = (n1..=n2).step_by(stride).collect();
    if ns.len() < 3 {
        return Err(Error::InvalidArgument(format!(
            "window [{n1}, {n2}] with stride {stride} gives fewer than 3 points"
        )));
    }
    // Fill the record memo once, bottom-up, before the parallel pass.
    for s in 1..=big_s {
        dec.decompose(n2 + 1, s)?;
    }
    let cache = BasisCache::new();
    let sample = |n: usize| -> Result<CertificateSample> {
        let rec = build_linear_form_cached(dec, big_s, r, n, alpha, config.bits, &cache)?;
        Ok(CertificateSample {
            n,
            log_delta: log_integer(&rec.delta_n),
            log_tau: rec.log_abs_tau(),
            log_max_coefficient: rec.log_max_coefficient(),
            relative_residual: rec.relative_residual,
        })
    };
    // The last point needs the most precision; computing it first lets the rest reuse its basis values.
    let (last, rest) = ns.split_last().unwrap();
    let last = sample(*last)?;
    let mut samples = rest.par_iter().map(|&n| sample(n)).collect::<Result<Vec<_>>>()?;
    samples.push(last);
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| vec![s.n as f64, (s.n as f64).ln(), 1.0])
        .collect();
    let tau: Vec<f64> = samples.iter().map(|s| s.log_tau).collect();
    let coef: Vec<f64> = samples.iter().map(|s| s.log_max_coefficient).collect();
    let log_a0 = least_squares(&rows, &tau)?.0[0];
    let log_b = least_squares(&rows, &coef)?.0[0];
    let mut caveats = vec![
        format!(
            "heuristic: growth rates are fitted on n in [{n1}, {n2}]; the criterion needs limits that a finite window cannot establish"
        ),
        "the fitted o(1) corrections decay like 1/log n, so the rates carry a bias of that order".to_string(),
        format!(
            "bound is for the span including the values (θ^u F)(α); the span of the shifted series alone may be smaller by up to μ = {}",
            dec.stream().tf().mu
        ),
        "Δ_n is the least common denominator of the computed coefficients".to_string(),
    ];
    let bound = if log_a0 < 0.0 && log_b > 0.0 {
        Some(dimension_bound_from_logs(log_a0, log_b, 1)?)
    } else {
        caveats.push(format!(
            "certificate withheld: need a0 < 1 < b, fitted a0 = {:.6}, b = {:.6}",
            log_a0.exp(),
            log_b.exp()
        ));
        None
    };
    let worst = samples.iter().map(|s| s.relative_residual).fold(0.0, f64::max);
    if worst > 1e-20 {
        caveats.push(format!("largest relative residual of the linear forms is {worst:.3e}"));
    }
    Ok(Certificate {
        version: crate::REPORT_VERSION,
        label: dec.stream().spec().label.clone(),
        alpha: alpha.clone(),
        big_s,
        r,
        window: (n1, n2),
        stride,
        bits: config.bits,
        samples,
        log_a0,
        a0_emp: log_a0.exp(),
        log_b,
        b_emp: log_b.exp(),
        degree: 1,
        bound,
        caveats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_bounds() {
        assert_eq!(dimension_bound(0.25, 4.0, 1).unwrap().value, 2.0);
        assert_eq!(dimension_bound(0.125, 2.0, 2).unwrap().value, 2.0);
        assert_eq!(dimension_bound(0.125, 2.0, 2).unwrap().at_least, 2);
    }

    #[test]
    fn ordering_is_enforced() {
        assert!(dimension_bound(2.0, 4.0, 1).is_err());
        assert!(dimension_bound(0.5, 0.9, 1).is_err());
        assert!(dimension_bound(0.5, 4.0, 0).is_err());
    }

    #[test]
    fn two_signs() {
        let c = [Complex64::new(1.0, 0.0); 2];
        let z = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
        let even = shift_select(&c, &z, 4).unwrap();
        assert_eq!((even.delta, even.value, even.bound), (0, 2.0, 1.0));
        let odd = shift_select(&c, &z, 5).unwrap();
        assert_eq!(odd.delta, 1);
    }

    #[test]
    fn single_term() {
        let s = shift_select(&[Complex64::new(1.0, 0.0)], &[Complex64::new(1.0, 0.0)], 17).unwrap();
        assert_eq!((s.delta, s.value, s.bound), (0, 1.0, 1.0));
    }
}
