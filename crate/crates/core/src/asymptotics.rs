//! Growth of `T_{S,r,n}(1/α)`: saddle-point prediction, empirical fits,
//! the nonnegative-coefficient sandwich and the real-integral representation.
//!
//! For a singularity `ξ` of `F` put `z = −α/ξ`. The saddle point `τ` is the
//! root of `P(t) = z t^{S+1} − (r−t)(t+1)^S` with `Re τ > 1/2`, and the
//! predicted rate is `|e^{φ}|` with
//!
//! ```text
//! e^{φ} = (r−τ)^r/(τ+1)^S = (zτ^{S+1})^r/(τ+1)^{S(r+1)} = (r−τ)^{r+1}/(zτ^{S+1}).
//! ```

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::Serialize;

use crate::bigcomplex::BigComplex;
use crate::error::{Error, Result};
use crate::linear_forms::t_series;
use crate::roots;
use crate::series::{check_inside, CoefficientStream};

/// `⌊S/(log S)²⌋`, at least 1.
pub fn recommended_r(big_s: u32) -> u32 {
    if big_s < 3 {
        return 1;
    }
    let l = (big_s as f64).ln();
    ((big_s as f64 / (l * l)).floor() as u32).clamp(1, big_s)
}

fn check_sr(big_s: u32, r: u32) -> Result<()> {
    if r == 0 {
        return Err(Error::InvalidArgument("the saddle point needs r ≥ 1".into()));
    }
    if r > big_s {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds S = {big_s}")));
    }
    Ok(())
}

fn int(prec: u32, x: u64) -> Float {
    Float::with_val(prec, x)
}

/// `P(t)` and `P′(t)`.
fn p_and_dp(big_s: u32, r: u32, z: &BigComplex, t: &BigComplex) -> (BigComplex, BigComplex) {
    let prec = t.prec();
    let s = big_s as u64;
    let ts = t.powu(s);
    let t1 = t.add_real(&int(prec, 1));
    let t1p = t1.powu(s - 1);
    let t1s = &t1p * &t1;
    let rmt = BigComplex::real_minus(&int(prec, r as u64), t);
    let zts = z * &ts;
    let p = &(&zts * t) - &(&rmt * &t1s);
    let dp = &(&zts.scale_f(&int(prec, s + 1)) + &t1s) - &(&rmt * &t1p).scale_f(&int(prec, s));
    (p, dp)
}

/// Coefficients of `P` in `t`, lowest degree first.
pub fn saddle_polynomial(big_s: u32, r: u32, z: Complex64) -> Vec<Complex64> {
    let s = big_s as usize;
    let mut c = vec![Complex64::new(0.0, 0.0); s + 2];
    // (t − r)(t+1)^S
    let mut binom = 1.0f64;
    for i in 0..=s {
        c[i + 1] += binom;
        c[i] -= r as f64 * binom;
        binom = binom * (s - i) as f64 / (i + 1) as f64;
    }
    c[s + 1] += z;
    c
}

#[derive(Clone, Debug, Serialize)]
pub struct SaddleRoot {
    #[serde(with = "crate::serde_util::complex")]
    pub tau: BigComplex,
    /// `|P(τ)|`.
    pub residual: f64,
    /// `|P(τ)| / (|P′(τ)|·|τ|)`.
    pub relative_residual: f64,
    pub iterations: usize,
    /// The seed `r − rz(r/(r+1))^S` did not converge and the root came from all roots of `P`.
    pub fallback: bool,
    /// `|τ − r| / (r|z|(r/(r+1))^S)`.
    pub seed_ratio: f64,
}

fn newton(big_s: u32, r: u32, z: &BigComplex, mut t: BigComplex, bits: u32) -> (BigComplex, usize, bool) {
    let prec = t.prec();
    let tol = Float::with_val(prec, Float::i_exp(1, -(bits as i32) - 8));
    for it in 1..=200 {
        let (p, dp) = p_and_dp(big_s, r, z, &t);
        if dp.is_zero() {
            return (t, it, false);
        }
        let step = &p / &dp;
        t = &t - &step;
        let rel = Float::with_val(prec, step.abs() / t.abs().max(&int(prec, 1)));
        if rel < tol {
            return (t, it, true);
        }
        if !t.re.is_finite() || !t.im.is_finite() {
            return (t, it, false);
        }
    }
    (t, 200, false)
}

/// The saddle point `τ_{S,r}(z)`: the root of `P` with `Re τ > 1/2`.
pub fn saddle_point(big_s: u32, r: u32, z: &BigComplex, bits: u32) -> Result<SaddleRoot> {
    check_sr(big_s, r)?;
    let bits = bits.max(64);
    let prec = bits + 64;
    let z = z.with_prec(prec);
    let az = z.abs();
    if z.is_zero() || az >= 1 {
        return Err(Error::InvalidArgument(format!("need 0 < |z| < 1, got |z| = {}", az.to_f64())));
    }
    let rf = int(prec, r as u64);
    let q = Float::with_val(prec, Float::with_val(prec, r) / (r + 1)).pow(big_s);
    let shift = Float::with_val(prec, &rf * &q);
    let seed = BigComplex::real_minus(&rf, &z.scale_f(&shift));
    let half = Float::with_val(prec, 0.5);
    let (mut tau, mut iterations, ok) = newton(big_s, r, &z, seed, bits);
    let mut fallback = false;
    if !ok || tau.re <= half {
        fallback = true;
        let cands: Vec<Complex64> = roots::aberth(&saddle_polynomial(big_s, r, z.to_c64()))
            .into_iter()
            .filter(|t| t.re > 0.5)
            .collect();
        let Some(start) = cands.first() else {
            return Err(Error::WrongHalfPlane(tau.re.to_f64()));
        };
        let (t, it, ok) = newton(big_s, r, &z, BigComplex::from_c64(prec, *start), bits);
        if !ok {
            return Err(Error::NonConvergence(format!("saddle Newton from {start} stalled at {t}")));
        }
        tau = t;
        iterations += it;
    }
    if tau.re <= half {
        return Err(Error::WrongHalfPlane(tau.re.to_f64()));
    }
    let (p, dp) = p_and_dp(big_s, r, &z, &tau);
    let residual = p.abs();
    let rel = Float::with_val(prec, &residual / Float::with_val(prec, dp.abs() * tau.abs()));
    let accept = Float::with_val(prec, Float::i_exp(1, -(bits as i32) / 2));
    if rel >= accept {
        return Err(Error::NonConvergence(format!(
            "saddle residual {} above 2^(-{})",
            rel.to_f64(),
            bits / 2
        )));
    }
    let dist = BigComplex::real_minus(&rf, &tau).abs();
    let seed_ratio = Float::with_val(prec, dist / Float::with_val(prec, &shift * &az)).to_f64();
    Ok(SaddleRoot {
        tau: tau.with_prec(bits),
        residual: residual.to_f64(),
        relative_residual: rel.to_f64(),
        iterations,
        fallback,
        seed_ratio,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RootCensus {
    /// Roots with `Re t < −1/2`.
    pub left: usize,
    /// Roots with `Re t > 1/2`.
    pub right: usize,
    /// Roots in the strip `|Re t| ≤ 1/2`.
    pub strip: usize,
}

/// Counts the roots of `P` on each side of the strip `|Re t| ≤ 1/2`.
pub fn root_census(big_s: u32, r: u32, z: Complex64) -> RootCensus {
    let roots = roots::aberth(&saddle_polynomial(big_s, r, z));
    RootCensus {
        left: roots.iter().filter(|t| t.re < -0.5).count(),
        right: roots.iter().filter(|t| t.re > 0.5).count(),
        strip: roots.iter().filter(|t| t.re.abs() <= 0.5).count(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiData {
    /// `(r−τ)^r/(τ+1)^S`.
    #[serde(with = "crate::serde_util::complex")]
    pub exp_phi: BigComplex,
    /// `(zτ^{S+1})^r/(τ+1)^{S(r+1)}`.
    #[serde(with = "crate::serde_util::complex")]
    pub exp_phi_second: BigComplex,
    /// `(r−τ)^{r+1}/(zτ^{S+1})`.
    #[serde(with = "crate::serde_util::complex")]
    pub exp_phi_third: BigComplex,
    /// Principal logarithm of `exp_phi`.
    #[serde(with = "crate::serde_util::complex")]
    pub phi: BigComplex,
    /// `φ″ = (S+1)/τ + 1/(r−τ) − S/(τ+1)`.
    #[serde(with = "crate::serde_util::complex")]
    pub psi: BigComplex,
    /// Largest relative gap between the three forms of `e^φ`.
    pub spread: f64,
}

/// `e^φ` through its three product forms, and `φ″` at the saddle.
pub fn phi_data(big_s: u32, r: u32, z: &BigComplex, tau: &BigComplex) -> Result<PhiData> {
    check_sr(big_s, r)?;
    let prec = tau.prec() + 32;
    let tau = tau.with_prec(prec);
    let z = z.with_prec(prec);
    let s = big_s as u64;
    let r64 = r as u64;
    let rmt = BigComplex::real_minus(&int(prec, r64), &tau);
    let scale = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    if rmt.abs() < Float::with_val(prec, tau.abs() * &scale) {
        return Err(Error::InvalidArgument("r − τ vanishes at this saddle point".into()));
    }
    let t1 = tau.add_real(&int(prec, 1));
    let t1s = t1.powu(s);
    let zt = &z * &tau.powu(s + 1);
    let e1 = &rmt.powu(r64) / &t1s;
    let e2 = &zt.powu(r64) / &t1s.powu(r64 + 1);
    let e3 = &rmt.powu(r64 + 1) / &zt;
    let n1 = e1.abs();
    let spread = Float::with_val(prec, (&e1 - &e2).abs().max(&(&e1 - &e3).abs()) / &n1).to_f64();
    let psi = &(&tau.recip().scale_f(&int(prec, s + 1)) + &rmt.recip()) - &t1.recip().scale_f(&int(prec, s));
    let out = prec - 32;
    Ok(PhiData {
        phi: e1.ln().with_prec(out),
        exp_phi: e1.with_prec(out),
        exp_phi_second: e2.with_prec(out),
        exp_phi_third: e3.with_prec(out),
        psi: psi.with_prec(out),
        spread,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityGrowth {
    #[serde(with = "crate::serde_util::complex")]
    pub xi: BigComplex,
    /// `z = −α/ξ`.
    #[serde(with = "crate::serde_util::complex")]
    pub z: BigComplex,
    pub saddle: SaddleRoot,
    pub phi: PhiData,
    /// `|e^φ|`.
    pub rho: f64,
    pub log_rho: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SaddleReport {
    #[serde(rename = "S")]
    pub big_s: u32,
    pub r: u32,
    #[serde(with = "crate::serde_util::rational")]
    pub alpha: Rational,
    pub singularities: Vec<SingularityGrowth>,
    /// Indices of the singularities with maximal `rho`.
    pub dominant: Vec<usize>,
    pub a_pred: f64,
    pub log_a_pred: f64,
    /// `a_pred ≤ 1/r^{S−r}`.
    pub within_upper_bound: bool,
    pub warnings: Vec<String>,
}

const DOMINANCE_TOL: f64 = 1e-9;

/// Saddle-point growth prediction for `T_{S,r,n}(1/α)` over all singularities of `F`.
pub fn predict_growth(stream: &CoefficientStream, big_s: u32, r: u32, alpha: &Rational, bits: u32) -> Result<SaddleReport> {
    check_sr(big_s, r)?;
    check_inside(stream, alpha)?;
    let prec = bits.max(64) + 32;
    let a = BigComplex::from_rational(prec, alpha);
    let sing = &stream.radius()?.singularities;
    let singularities = sing
        .par_iter()
        .map(|xi| {
            let xi = xi.with_prec(prec);
            let z = -&(&a / &xi);
            let saddle = saddle_point(big_s, r, &z, bits)?;
            let phi = phi_data(big_s, r, &z, &saddle.tau)?;
            let m = phi.exp_phi.abs();
            Ok(SingularityGrowth {
                rho: m.to_f64(),
                log_rho: m.ln().to_f64(),
                xi: xi.with_prec(bits),
                z: z.with_prec(bits),
                saddle,
                phi,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let log_a_pred = singularities
        .iter()
        .map(|g| g.log_rho)
        .fold(f64::NEG_INFINITY, f64::max);
    let dominant: Vec<usize> = singularities
        .iter()
        .enumerate()
        .filter(|(_, g)| (g.log_rho - log_a_pred).abs() <= DOMINANCE_TOL)
        .map(|(i, _)| i)
        .collect();
    let mut warnings = Vec::new();
    if dominant.len() > 1 {
        warnings.push(format!("{} singularities share the dominant rate", dominant.len()));
    }
    for i in 0..singularities.len() {
        for j in i + 1..singularities.len() {
            let (ei, ej) = (&singularities[i].phi.exp_phi, &singularities[j].phi.exp_phi);
            let gap = Float::with_val(prec, (ei - ej).abs() / ei.abs()).to_f64();
            if gap <= DOMINANCE_TOL {
                warnings.push(format!("e^phi nearly coincide for singularities {i} and {j} (gap {gap:.3e})"));
            }
        }
    }
    let upper = -((big_s - r) as f64) * (r as f64).ln();
    Ok(SaddleReport {
        big_s,
        r,
        alpha: alpha.clone(),
        within_upper_bound: log_a_pred <= upper + 1e-12,
        a_pred: log_a_pred.exp(),
        log_a_pred,
        dominant,
        singularities,
        warnings,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthSample {
    pub n: usize,
    pub log_abs: f64,
    /// `log|T_n|/n`.
    pub rate: f64,
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    pub window: (usize, usize),
    pub bits: u32,
    pub samples: Vec<GrowthSample>,
    /// Coefficient of `n` in the fit of `log|T_n|` on `[n, log n, log log n, 1]`.
    pub log_a: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub constant: f64,
    /// Largest absolute residual of the fit.
    pub residual_spread: f64,
}

/// Least squares on the given columns; returns the coefficients and the largest residual.
pub(crate) fn least_squares(rows: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = DMatrix::from_fn(rows.len(), rows[0].len(), |i, j| rows[i][j]);
    let v = DVector::from_column_slice(y);
    let sol = m
        .clone()
        .svd(true, true)
        .solve(&v, 1e-14)
        .map_err(|e| Error::NonConvergence(format!("least squares: {e}")))?;
    let spread = (&m * &sol - &v).amax();
    Ok((sol.iter().copied().collect(), spread))
}

fn log_abs_t(stream: &CoefficientStream, big_s: u32, r: u32, n: usize, z: &Rational, bits: u32) -> Result<(f64, i8)> {
    let v = t_series(stream, big_s, r, n, z, bits)?;
    let x = v.re();
    if x.is_zero() {
        return Err(Error::NonConvergence(format!("T_{n} vanishes at {bits} bits; raise the precision")));
    }
    let sign = if x.is_sign_negative() { -1 } else { 1 };
    Ok((Float::with_val(x.prec(), x.abs_ref()).ln().to_f64(), sign))
}

/// Fits `log|T_n(1/α)| ≈ n log a + κ log n + λ log log n + c` over `[n1, n2]`.
pub fn empirical_growth(
    stream: &CoefficientStream,
    big_s: u32,
    r: u32,
    alpha: &Rational,
    n1: usize,
    n2: usize,
    bits: u32,
) -> Result<GrowthEstimate> {
    if n2 < n1 + 20 {
        return Err(Error::InvalidArgument(format!("window [{n1}, {n2}] is shorter than 20")));
    }
    if n1 < 3 {
        return Err(Error::InvalidArgument("window must start at n ≥ 3".into()));
    }
    check_inside(stream, alpha)?;
    let z = Rational::from(alpha.recip_ref());
    let samples = (n1..=n2)
        .into_par_iter()
        .map(|n| {
            let (log_abs, sign) = log_abs_t(stream, big_s, r, n, &z, bits)?;
            Ok(GrowthSample {
                n,
                log_abs,
                rate: log_abs / n as f64,
                sign,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<f64>> = samples
        .iter()
        .map(|s| {
            let n = s.n as f64;
            vec![n, n.ln(), n.ln().ln(), 1.0]
        })
        .collect();
    let y: Vec<f64> = samples.iter().map(|s| s.log_abs).collect();
    let (c, spread) = least_squares(&rows, &y)?;
    Ok(GrowthEstimate {
        window: (n1, n2),
        bits,
        samples,
        log_a: c[0],
        kappa: c[1],
        lambda: c[2],
        constant: c[3],
        residual_spread: spread,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NonnegBounds {
    #[serde(rename = "S")]
    pub big_s: u32,
    pub r: u32,
    #[serde(with = "crate::serde_util::rational")]
    pub z: Rational,
    #[serde(with = "crate::serde_util::rational")]
    pub d: Rational,
    /// `−(S−r) log r`.
    pub upper_log_rate: f64,
    /// `log[(Dz)^{−r}(r/(r+1))^{rS}(r+1)^{−(S−r)}]`, the printed lower rate.
    pub stated_lower_log_rate: f64,
    /// `log[r^{r(S+1)}(r+1)^{−S(r+1)}(Dz)^{−r}]`, the Stirling limit of the finite-n lower bound.
    pub derived_lower_log_rate: f64,
    pub samples: Vec<GrowthSample>,
    pub stated_sandwich_holds: bool,
    pub derived_sandwich_holds: bool,
}

/// The `n`-th-root sandwich for nonnegative coefficients, checked on `[n1, n2]`.
#[allow(clippy::too_many_arguments)]
pub fn nonneg_bounds(
    stream: &CoefficientStream,
    big_s: u32,
    r: u32,
    z: &Rational,
    d: &Rational,
    n1: usize,
    n2: usize,
    bits: u32,
) -> Result<NonnegBounds> {
    check_sr(big_s, r)?;
    if *z <= 0 || *d <= 0 {
        return Err(Error::InvalidArgument("z and D must be positive".into()));
    }
    if n1 == 0 || n2 < n1 {
        return Err(Error::InvalidArgument(format!("bad window [{n1}, {n2}]")));
    }
    check_inside(stream, &Rational::from(z.recip_ref()))?;
    let horizon = (r as usize + 1) * (n2 + 1) + 200;
    if let Some(k) = stream.prefix(horizon)?.iter().position(|a| *a < 0) {
        return Err(Error::NegativeCoefficient(k));
    }
    let (sf, rf) = (big_s as f64, r as f64);
    let ldz = (d.to_f64() * z.to_f64()).ln();
    let upper = -(sf - rf) * rf.ln();
    let stated = -rf * ldz + rf * sf * (rf / (rf + 1.0)).ln() - (sf - rf) * (rf + 1.0).ln();
    let derived = rf * (sf + 1.0) * rf.ln() - sf * (rf + 1.0) * (rf + 1.0).ln() - rf * ldz;
    let samples = (n1..=n2)
        .into_par_iter()
        .map(|n| {
            let (log_abs, sign) = log_abs_t(stream, big_s, r, n, z, bits)?;
            Ok(GrowthSample {
                n,
                log_abs,
                rate: log_abs / n as f64,
                sign,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let within = |lo: f64| samples.iter().all(|s| s.sign > 0 && s.rate >= lo && s.rate <= upper);
    Ok(NonnegBounds {
        big_s,
        r,
        z: z.clone(),
        d: d.clone(),
        upper_log_rate: upper,
        stated_lower_log_rate: stated,
        derived_lower_log_rate: derived,
        stated_sandwich_holds: within(stated),
        derived_sandwich_holds: within(derived),
        samples,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RealIntegralReport {
    pub integral: f64,
    pub series: f64,
    pub residual: f64,
    /// Gauss–Legendre nodes per dimension at acceptance.
    pub nodes: usize,
}

/// `T_{S,r,n}(z) = z^{−rn}/n!^r ∫_{[0,1]^S} F^{(rn)}(t_1⋯t_S/z) Π t_j^{rn}(1−t_j)^n dt`
/// by tensor Gauss–Legendre quadrature, against direct summation.
pub fn real_integral_check(stream: &CoefficientStream, big_s: u32, r: u32, n: usize, z: &Rational, bits: u32) -> Result<RealIntegralReport> {
    if !(1..=2).contains(&big_s) {
        return Err(Error::InvalidArgument("the quadrature handles S ∈ {1, 2}".into()));
    }
    if r > big_s {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds S = {big_s}")));
    }
    if *z <= 0 {
        return Err(Error::InvalidArgument("z must be positive".into()));
    }
    check_inside(stream, &Rational::from(z.recip_ref()))?;
    let rn = r as usize * n;
    let zf = z.to_f64();
    let ratio = 1.0 / (zf * stream.radius()?.radius.to_f64());
    let len = rn + (40.0 / -ratio.log10()).ceil() as usize + 20;
    if len > 200_000 {
        return Err(Error::InvalidArgument("z is too close to the radius for the quadrature".into()));
    }
    let a = stream.prefix(len + rn)?.to_vec();
    // F^{(rn)}(x) = Σ_m (m+1)_{rn} A_{m+rn} x^m
    let deriv: Vec<f64> = (0..len)
        .map(|m| {
            let poch: f64 = (1..=rn).map(|i| (m + i) as f64).product();
            poch * a[m + rn].to_f64()
        })
        .collect();
    let f_rn = |x: f64| deriv.iter().rev().fold(0.0, |acc, c| acc * x + c);
    let n_fact: f64 = (1..=n).map(|i| i as f64).product();
    let pre = zf.powi(-(rn as i32)) / n_fact.powi(r as i32);
    let weight = |t: f64| t.powi(rn as i32) * (1.0 - t).powi(n as i32);
    let integrate = |nodes: usize| {
        let gl = GaussLegendre::new(NonZeroUsize::new(nodes).unwrap());
        let v = if big_s == 1 {
            gl.integrate(0.0, 1.0, |t| f_rn(t / zf) * weight(t))
        } else {
            gl.integrate(0.0, 1.0, |t1| {
                weight(t1) * gl.integrate(0.0, 1.0, |t2| f_rn(t1 * t2 / zf) * weight(t2))
            })
        };
        pre * v
    };
    let series = t_series(stream, big_s, r, n, z, bits)?.re().to_f64();
    let mut nodes = 16;
    let mut prev = integrate(nodes);
    loop {
        nodes *= 2;
        let cur = integrate(nodes);
        let gap = (cur - prev).abs();
        if gap <= 1e-14 * cur.abs().max(1e-300) || nodes >= 512 {
            if gap > 1e-10 * cur.abs() {
                return Err(Error::NonConvergence(format!("quadrature gap {gap:e} at {nodes} nodes")));
            }
            return Ok(RealIntegralReport {
                integral: cur,
                series,
                residual: (cur - series).abs(),
                nodes,
            });
        }
        prev = cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recommended_r_values() {
        assert_eq!(recommended_r(6), 1);
        assert_eq!(recommended_r(20), 2);
        assert_eq!(recommended_r(100), 4);
    }

    #[test]
    fn saddle_polynomial_matches_definition() {
        let z = Complex64::new(0.3, -0.2);
        let c = saddle_polynomial(4, 2, z);
        let t = Complex64::new(0.7, 0.4);
        let horner = c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, x| acc * t + x);
        let direct = z * t.powi(5) - (2.0 - t) * (t + 1.0).powi(4);
        assert!((horner - direct).norm() < 1e-12);
    }

    #[test]
    fn r_zero_is_rejected() {
        let z = BigComplex::from_f64(128, 0.5, 0.0);
        assert!(saddle_point(4, 0, &z, 128).is_err());
    }
}
