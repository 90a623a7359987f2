//! Padé-type linear forms
//!
//! ```text
//! T_{S,r,n}(z) = n!^{S−r} Σ_{k ≥ 0} (k−rn+1)_{rn} / (k+1)_{n+1}^S · A_k z^{−k}
//!             = Σ_{u,s} C_{u,s}(z) F_u^{[s]}(1/z) + Σ_u C̃_u(z) z^{−S(ℓ−1)} (θ^u F)(1/z).
//! ```
//!
//! The reduction uses the partial fractions
//! `n!^{S−r}(k−rn+1)_{rn}/Π_j (k+j)^S = Σ_{j,s} c_{j,s}/(k+j)^s` and the
//! decomposition records of `F_j^{[s]}` for `j ≤ n+1`.

use std::sync::Arc;

use parking_lot::Mutex;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::decomposition::{BasisValues, Decomposer, DecompositionRecord};
use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::series::{check_inside, stabilized_sum, ComplexApprox, CoefficientStream, FloatCoeffs};

/// `lcm(1, …, n)`, with `d_0 = 1`.
pub fn lcm_upto(n: usize) -> Integer {
    let mut d = Integer::from(1);
    for k in 2..=n as u64 {
        d.lcm_u_mut(k as u32);
    }
    d
}

fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

/// Truncated power series in `ε` with `len` terms.
fn series_mul(a: &[Rational], b: &[Rational], len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

/// Multiplies by `(c + ε)` in place, truncating.
fn mul_linear(a: &mut [Integer], c: i64) {
    for i in (0..a.len()).rev() {
        a[i] *= c;
        if i > 0 {
            let prev = a[i - 1].clone();
            a[i] += prev;
        }
    }
}

fn series_inverse(a: &[Rational], len: usize) -> Vec<Rational> {
    let mut inv = vec![Rational::new(); len];
    inv[0] = Rational::from(a[0].recip_ref());
    for k in 1..len {
        let mut acc = Rational::new();
        for i in 1..=k.min(a.len() - 1) {
            acc += Rational::from(&a[i] * &inv[k - i]);
        }
        inv[k] = -acc * &inv[0];
    }
    inv
}

fn series_pow(a: &[Rational], mut e: u32, len: usize) -> Vec<Rational> {
    let mut out = vec![Rational::new(); len];
    out[0] = Rational::from(1);
    let mut base = a.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            out = series_mul(&out, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = series_mul(&base, &base, len);
        }
    }
    out
}

/// Coefficients `c_{j,s}` of the partial-fraction expansion.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartialFractionTable {
    #[serde(rename = "S")]
    pub big_s: u32,
    pub r: u32,
    pub n: usize,
    /// `c[j−1][s−1]` for `1 ≤ j ≤ n+1`, `1 ≤ s ≤ S`.
    #[serde(with = "crate::serde_util::rational_table")]
    pub c: Vec<Vec<Rational>>,
}

impl PartialFractionTable {
    pub fn get(&self, j: usize, s: u32) -> &Rational {
        &self.c[j - 1][s as usize - 1]
    }

    /// `n!^{S−r}(k−rn+1)_{rn}/Π_j (k+j)^S` at an integer `k ≥ 0`.
    pub fn lhs_at(&self, k: i64) -> Rational {
        let rn = self.r as i64 * self.n as i64;
        let mut num = Rational::from(factorial(self.n).pow(self.big_s - self.r));
        for i in 0..rn {
            num *= k - i;
        }
        let mut den = Integer::from(1);
        for j in 1..=self.n as i64 + 1 {
            den *= Integer::from(k + j).pow(self.big_s);
        }
        num / den
    }

    pub fn rhs_at(&self, k: i64) -> Rational {
        let mut acc = Rational::new();
        for (j, row) in self.c.iter().enumerate() {
            for (s, c) in row.iter().enumerate() {
                let d = Integer::from(k + j as i64 + 1).pow(s as u32 + 1);
                acc += Rational::from(c / &d);
            }
        }
        acc
    }

    /// Exact identity check at `S(n+1)+1` nonnegative integer points.
    pub fn reconstruction_holds(&self) -> bool {
        let points = self.big_s as i64 * (self.n as i64 + 1) + 1;
        (0..points).all(|k| self.lhs_at(k) == self.rhs_at(k))
    }

    /// `d_n^S c_{j,s} ∈ ℤ` for every entry.
    pub fn integrality_holds(&self) -> bool {
        let scale = lcm_upto(self.n).pow(self.big_s);
        self.c
            .iter()
            .flatten()
            .all(|c| Rational::from(c * &scale).denom() == &1)
    }
}

/// Partial fractions computed from residue jets: with `k = −j + ε`,
/// `c_{j,s}` is the coefficient of `ε^{S−s}` in
/// `n!^{S−r} Π_{i<rn}(−j−i+ε) · Π_{i≠j}(i−j+ε)^{−S}`.
pub fn partial_fractions(big_s: u32, r: u32, n: usize) -> Result<PartialFractionTable> {
    if r > big_s {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds S = {big_s}")));
    }
    if big_s == 0 {
        return Err(Error::InvalidArgument("S must be at least 1".into()));
    }
    let len = big_s as usize;
    let rn = r as usize * n;
    let lead = Rational::from(factorial(n).pow(big_s - r));
    let c = (1..=n + 1)
        .into_par_iter()
        .map(|j| {
            let j = j as i64;
            let mut num = vec![Integer::new(); len];
            num[0] = Integer::from(1);
            for i in 0..rn as i64 {
                mul_linear(&mut num, -j - i);
            }
            let mut den = vec![Integer::new(); len];
            den[0] = Integer::from(1);
            for i in (1..=n as i64 + 1).filter(|&i| i != j) {
                mul_linear(&mut den, i - j);
            }
            let num: Vec<Rational> = num.into_iter().map(|x| Rational::from(x) * &lead).collect();
            let den: Vec<Rational> = den.into_iter().map(Rational::from).collect();
            let g = series_mul(&num, &series_pow(&series_inverse(&den, len), big_s, len), len);
            (1..=len).map(|s| g[len - s].clone()).collect()
        })
        .collect();
    Ok(PartialFractionTable { big_s, r, n, c })
}

#[derive(Clone, Debug, Serialize)]
pub struct CoefficientBoundReport {
    /// `(rn+1)·2^S·(r^r·2^{S+r+1})^n`.
    #[serde(with = "crate::serde_util::integer")]
    pub bound: Integer,
    pub max_ratio: f64,
    pub within: bool,
}

/// Checks `|c_{j,s}| ≤ (rn+1)2^S(r^r 2^{S+r+1})^n` exactly.
pub fn coefficient_bound_check(t: &PartialFractionTable) -> CoefficientBoundReport {
    let (s, r, n) = (t.big_s, t.r, t.n as u32);
    let rr = Integer::from(r).pow(r);
    let base = rr << (s + r + 1);
    let bound = Integer::from(r * n + 1) * (Integer::from(1) << s) * base.pow(n);
    let max = t
        .c
        .iter()
        .flatten()
        .map(|c| Rational::from(c.abs_ref()))
        .max()
        .unwrap_or_default();
    let ratio = Rational::from(&max / &bound);
    CoefficientBoundReport {
        within: max <= bound,
        max_ratio: ratio.to_f64(),
        bound,
    }
}

/// Direct summation of `T_{S,r,n}(z)` for a rational `z` with `|z| > 1/R`.
pub fn t_series(stream: &CoefficientStream, big_s: u32, r: u32, n: usize, z: &Rational, bits: u32) -> Result<ComplexApprox> {
    if *z == 0 {
        return Err(Error::InvalidArgument("z must be nonzero".into()));
    }
    if r > big_s {
        return Err(Error::InvalidArgument(format!("r = {r} exceeds S = {big_s}")));
    }
    let w = Rational::from(z.recip_ref());
    check_inside(stream, &w)?;
    let rn = r as usize * n;
    let start = {
        let num = factorial(n).pow(big_s - r) * factorial(rn);
        let mut den = Integer::from(1);
        for i in rn + 1..=rn + n + 1 {
            den *= i as u64;
        }
        Rational::from((num, den.pow(big_s)))
    };
    let res = stabilized_sum(bits, |prec| {
        let wf = Float::with_val(prec, &w);
        let mut weight = Float::with_val(prec, &start);
        let mut pow = Float::with_val(prec, &wf).pow(rn as u32);
        let mut coeffs = FloatCoeffs::new(stream, prec, rn);
        let mut k = rn;
        move || {
            let ak = coeffs.next()?;
            let t = Float::with_val(prec, &ak * &weight) * &pow;
            let k1 = (k + 1) as u64;
            weight *= k1;
            weight /= (k + 1 - rn) as u64;
            let ratio = Float::with_val(prec, k1) / (k + n + 2) as u64;
            weight *= ratio.pow(big_s);
            pow *= &wf;
            k += 1;
            Some(t)
        }
    })?;
    Ok(ComplexApprox::real(res.value, bits, res.tail_margin))
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearFormRecord {
    #[serde(rename = "S")]
    pub big_s: u32,
    pub r: u32,
    pub n: usize,
    #[serde(with = "crate::serde_util::rational")]
    pub alpha: Rational,
    pub ell: usize,
    /// `c_polys[u−1][s−1]` is `C_{u,s}(z)`.
    pub c_polys: Vec<Vec<RationalPoly>>,
    /// `c_tilde[u]` is `C̃_u(z)`.
    pub c_tilde: Vec<RationalPoly>,
    /// Least common denominator of the values `C(1/α)`, `C̃(1/α)`.
    #[serde(with = "crate::serde_util::integer")]
    pub delta_n: Integer,
    /// `q^{n+1+S(ℓ−1)} d_n^S D_emp` with `q = |numerator(α)|`.
    #[serde(with = "crate::serde_util::integer")]
    pub delta_bound: Integer,
    /// `D_emp`: lcm of the denominators of the records used.
    #[serde(with = "crate::serde_util::integer")]
    pub d_emp: Integer,
    #[serde(with = "crate::serde_util::integer_table")]
    pub p_int: Vec<Vec<Integer>>,
    #[serde(with = "crate::serde_util::integer_vec")]
    pub p_tilde_int: Vec<Integer>,
    /// `T_{S,r,n}(1/α)` by direct summation.
    #[serde(with = "crate::serde_util::complex_approx")]
    pub value: ComplexApprox,
    /// The same quantity from the `C`, `C̃` expansion.
    #[serde(with = "crate::serde_util::float")]
    pub reduced_value: Float,
    /// `|value − reduced_value|`.
    pub residual: f64,
    pub relative_residual: f64,
    pub degree_bounds_hold: bool,
    pub delta_bound_clears: bool,
}

impl LinearFormRecord {
    /// `log|τ_n| = log Δ_n + log|T_{S,r,n}(1/α)|`.
    pub fn log_abs_tau(&self) -> f64 {
        log_integer(&self.delta_n) + self.value.re().clone().abs().ln().to_f64()
    }

    /// `log max(|p|, |p̃|)`.
    pub fn log_max_coefficient(&self) -> f64 {
        self.p_int
            .iter()
            .flatten()
            .chain(&self.p_tilde_int)
            .filter(|x| **x != 0)
            .map(|x| log_integer(&Integer::from(x.abs_ref())))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

pub(crate) fn log_integer(x: &Integer) -> f64 {
    Float::with_val(64, x).abs().ln().to_f64()
}

/// Polynomial parts of the reduction, before evaluation at `1/α`.
pub struct ReducedForm {
    pub table: PartialFractionTable,
    pub c_polys: Vec<Vec<RationalPoly>>,
    pub c_tilde: Vec<RationalPoly>,
    pub d_emp: Integer,
}

/// Builds `C_{u,s}` and `C̃_u` from the partial fractions and decomposition records.
pub fn reduce(dec: &Decomposer, big_s: u32, r: u32, n: usize) -> Result<ReducedForm> {
    let ell0 = dec.ell0();
    if n < ell0 {
        return Err(Error::InvalidArgument(format!("n = {n} is below ℓ₀ = {ell0}")));
    }
    let table = partial_fractions(big_s, r, n)?;
    let tf = dec.stream().tf();
    let mu = tf.mu;
    let shift = big_s as usize * (tf.ell - 1);
    let mut c_acc = vec![vec![vec![Rational::new(); n + 2]; big_s as usize]; ell0];
    let mut t_acc = vec![vec![Rational::new(); n + 2 + shift]; mu];
    let mut d_emp = Integer::from(1);
    let records: Vec<Vec<Arc<DecompositionRecord>>> = (1..=n + 1)
        .map(|j| (1..=big_s).map(|s| dec.decompose(j, s)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    for (j, row) in records.iter().enumerate() {
        let j = j + 1;
        for (si, rec) in row.iter().enumerate() {
            let c = table.get(j, si as u32 + 1);
            if *c == 0 {
                continue;
            }
            d_emp.lcm_mut(&rec.denominator());
            for (u, prow) in rec.p.iter().enumerate() {
                for (t, p) in prow.iter().enumerate() {
                    if *p != 0 {
                        c_acc[u][t][j] += Rational::from(c * p);
                    }
                }
            }
            for (u, q) in rec.q.iter().enumerate() {
                for (i, qi) in q.coeffs().iter().enumerate() {
                    if *qi != 0 {
                        t_acc[u][j + shift - i] += Rational::from(c * qi);
                    }
                }
            }
        }
    }
    let c_polys = c_acc
        .into_iter()
        .map(|row| row.into_iter().map(RationalPoly::new).collect())
        .collect();
    let c_tilde = t_acc.into_iter().map(RationalPoly::new).collect();
    Ok(ReducedForm {
        table,
        c_polys,
        c_tilde,
        d_emp,
    })
}

/// Basis values `F_u^{[s]}(α)`, `(θ^u F)(α)` shared across a run, kept at the
/// highest precision requested so far.
#[derive(Default)]
pub struct BasisCache {
    inner: Mutex<Option<Arc<BasisValues>>>,
}

impl BasisCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn get(&self, dec: &Decomposer, big_s: u32, alpha: &Rational, bits: u32) -> Result<Arc<BasisValues>> {
        let mut slot = self.inner.lock();
        if let Some(b) = slot.as_ref() {
            if b.bits >= bits && b.alpha == *alpha && b.shifted.first().is_none_or(|row| row.len() >= big_s as usize) {
                return Ok(b.clone());
            }
        }
        // Overshoot a little so that slowly growing requests reuse the values.
        let b = Arc::new(BasisValues::new(dec.stream(), dec.ell0(), big_s, alpha, bits + bits / 8)?);
        *slot = Some(b.clone());
        Ok(b)
    }
}

/// Assembles the linear form at `z = 1/α` and cross-checks it against [`t_series`].
pub fn build_linear_form(dec: &Decomposer, big_s: u32, r: u32, n: usize, alpha: &Rational, bits: u32) -> Result<LinearFormRecord> {
    build_linear_form_cached(dec, big_s, r, n, alpha, bits, &BasisCache::new())
}

/// [`build_linear_form`] drawing basis values from `cache`.
pub fn build_linear_form_cached(
    dec: &Decomposer,
    big_s: u32,
    r: u32,
    n: usize,
    alpha: &Rational,
    bits: u32,
    cache: &BasisCache,
) -> Result<LinearFormRecord> {
    let stream = dec.stream();
    check_inside(stream, alpha)?;
    let red = reduce(dec, big_s, r, n)?;
    let tf = stream.tf();
    let ell = tf.ell;
    let shift = big_s as usize * (ell - 1);
    let z = Rational::from(alpha.recip_ref());

    let c_vals: Vec<Vec<Rational>> = red
        .c_polys
        .iter()
        .map(|row| row.iter().map(|p| p.eval(&z)).collect())
        .collect();
    let t_vals: Vec<Rational> = red.c_tilde.iter().map(|p| p.eval(&z)).collect();
    let mut delta_n = Integer::from(1);
    for v in c_vals.iter().flatten().chain(&t_vals) {
        delta_n.lcm_mut(v.denom());
    }
    let q = Integer::from(alpha.numer().abs_ref());
    let delta_bound = q.pow((n + 1 + shift) as u32) * lcm_upto(n).pow(big_s) * &red.d_emp;
    let scaled = |v: &Rational, d: &Integer| Rational::from(v * d);
    let delta_bound_clears = c_vals
        .iter()
        .flatten()
        .chain(&t_vals)
        .all(|v| scaled(v, &delta_bound).denom() == &1);
    let p_int: Vec<Vec<Integer>> = c_vals
        .iter()
        .map(|row| row.iter().map(|v| scaled(v, &delta_n).numer().clone()).collect())
        .collect();
    let p_tilde_int: Vec<Integer> = t_vals.iter().map(|v| scaled(v, &delta_n).numer().clone()).collect();

    let degree_bounds_hold = red.c_polys.iter().flatten().all(|p| p.degree().is_none_or(|d| d <= n + 1))
        && red.c_tilde.iter().all(|p| p.degree().is_none_or(|d| d <= n + 1 + shift));

    let value = t_series(stream, big_s, r, n, &z, bits)?;
    let alpha_shift = alpha.clone().pow(shift as i32);
    // A cheap pass measures the cancellation; the second runs at the precision it calls for.
    let mut work = 64;
    let reduced_value = loop {
        let basis = if work == 64 {
            Arc::new(BasisValues::new(stream, dec.ell0(), big_s, alpha, work)?)
        } else {
            cache.get(dec, big_s, alpha, work)?
        };
        let prec = work + 32;
        let mut sum = Float::new(prec);
        let mut mass = Float::new(prec);
        for (row, vals) in c_vals.iter().zip(&basis.shifted) {
            for (c, v) in row.iter().zip(vals) {
                // Cached values may carry more bits; rounding first keeps the result independent of the cache.
                let t = Float::with_val(prec, v) * c;
                mass += Float::with_val(prec, t.abs_ref());
                sum += t;
            }
        }
        for (c, v) in t_vals.iter().zip(&basis.theta) {
            let t = Float::with_val(prec, v) * Rational::from(c * &alpha_shift);
            mass += Float::with_val(prec, t.abs_ref());
            sum += t;
        }
        let target = value.re().clone().abs();
        let lost = if target.is_zero() || mass.is_zero() {
            0
        } else {
            (mass / target).log2().to_f64().max(0.0).ceil() as u32
        };
        if work >= bits + lost {
            break sum;
        }
        work = bits + lost + 16;
    };
    let diff = Float::with_val(reduced_value.prec(), &reduced_value - value.re()).abs();
    let rel = if value.re().is_zero() {
        diff.to_f64()
    } else {
        Float::with_val(diff.prec(), &diff / value.re()).abs().to_f64()
    };
    Ok(LinearFormRecord {
        big_s,
        r,
        n,
        alpha: alpha.clone(),
        ell,
        c_polys: red.c_polys,
        c_tilde: red.c_tilde,
        delta_n,
        delta_bound,
        d_emp: red.d_emp,
        p_int,
        p_tilde_int,
        value,
        reduced_value,
        residual: diff.to_f64(),
        relative_residual: rel,
        degree_bounds_hold,
        delta_bound_clears,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PadeReport {
    /// Lowest power of `w = 1/z` with a nonzero coefficient in the reduced form.
    pub first_nonzero: Option<i64>,
    /// Coefficients compared with `T` for `w^K`, `K ≤ checked_through`.
    pub checked_through: i64,
    pub rn: usize,
}

/// Expands the reduced form in `w = 1/z` exactly and compares it with the
/// coefficients of `T_{S,r,n}`: all powers below `w^{rn}` (including negative
/// ones) must vanish and the rest must agree through `w^{rn+5}`.
pub fn pade_order_check(dec: &Decomposer, big_s: u32, r: u32, n: usize) -> Result<PadeReport> {
    let red = reduce(dec, big_s, r, n)?;
    let stream = dec.stream();
    let tf = stream.tf();
    let shift = (big_s as usize * (tf.ell - 1)) as i64;
    let rn = r as usize * n;
    let top = rn as i64 + 5;
    let low = -(n as i64 + 1 + shift);
    let a = stream.prefix((top + n as i64 + 2 + shift) as usize)?.to_vec();
    let coef = |k: i64| -> Rational { if k < 0 { Rational::new() } else { a[k as usize].clone() } };
    let pow = |x: i64, e: usize| (0..e).fold(Rational::from(1), |acc, _| acc * x);
    let nf = Rational::from(factorial(n).pow(big_s - r));
    let mut first_nonzero = None;
    for big_k in low..=top {
        let mut acc = Rational::new();
        for (u, row) in red.c_polys.iter().enumerate() {
            let u = u as i64 + 1;
            for (s, poly) in row.iter().enumerate() {
                for (i, ci) in poly.coeffs().iter().enumerate() {
                    let m = big_k + i as i64;
                    if *ci == 0 || m - u < 0 || m < 1 {
                        continue;
                    }
                    acc += Rational::from(ci * &coef(m - u)) / pow(m, s + 1);
                }
            }
        }
        for (u, poly) in red.c_tilde.iter().enumerate() {
            for (i, ci) in poly.coeffs().iter().enumerate() {
                let k = big_k + i as i64 - shift;
                if *ci == 0 || k < 0 {
                    continue;
                }
                acc += Rational::from(ci * &coef(k)) * pow(k, u);
            }
        }
        let expected = if big_k < rn as i64 {
            Rational::new()
        } else {
            let k = big_k as usize;
            let mut num = nf.clone();
            for i in 0..rn {
                num *= (k - i) as u64;
            }
            let mut den = Integer::from(1);
            for i in 1..=n + 1 {
                den *= (k + i) as u64;
            }
            num / Rational::from(den.pow(big_s)) * coef(big_k)
        };
        if acc != expected {
            return Err(Error::PadeViolation(big_k));
        }
        if first_nonzero.is_none() && acc != 0 {
            first_nonzero = Some(big_k);
        }
    }
    Ok(PadeReport {
        first_nonzero,
        checked_through: top,
        rn,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn simple_tables() {
        let t = partial_fractions(1, 0, 1).unwrap();
        assert_eq!(t.c, vec![vec![q(1, 1)], vec![q(-1, 1)]]);
        let t = partial_fractions(2, 0, 1).unwrap();
        assert_eq!(t.c, vec![vec![q(-2, 1), q(1, 1)], vec![q(2, 1), q(1, 1)]]);
    }

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_upto(0), 1);
        assert_eq!(lcm_upto(10), 2520);
    }

    #[test]
    fn bound_on_small_table() {
        let rep = coefficient_bound_check(&partial_fractions(1, 0, 1).unwrap());
        assert!(rep.within && rep.max_ratio <= 1.0);
    }

    #[test]
    fn r_above_s_is_rejected() {
        assert!(partial_fractions(2, 3, 1).is_err());
    }
}
