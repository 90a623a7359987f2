//! Exact reduction of `F_n^{[s]}` to the finite family
//! `{F_j^{[t]} : 1 ≤ j ≤ ℓ₀, 1 ≤ t ≤ s} ∪ {θ^u F : 0 ≤ u < μ}`:
//!
//! ```text
//! F_n^{[s]} = Σ_{j,t} p_{j,t} F_j^{[t]} + Σ_u q_u(z) θ^u F.
//! ```
//!
//! Records with `n ≤ ℓ₀` are trivial. Beyond that the weight-`s` recurrence at
//! `ν = n − ℓ` is solved for its top term `F_{ν+ℓ}^{[s]}`, which needs only
//! `Q_ℓ(−ν) ≠ 0` for `ν ≥ ℓ₀ − ℓ + 1`.

use std::collections::HashMap;
use std::sync::Arc;

use parking_lot::RwLock;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::RationalPoly;
use crate::recurrence::{inhomogeneous_tower, InhomogeneousData};
use crate::series::{eval_shifted, eval_theta, CoefficientStream};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionRecord {
    pub n: usize,
    pub s: u32,
    /// `p[j−1][t−1]` for `1 ≤ j ≤ ℓ₀`, `1 ≤ t ≤ s`.
    #[serde(with = "crate::serde_util::rational_table")]
    pub p: Vec<Vec<Rational>>,
    /// `q[u]` multiplies `θ^u F`, `0 ≤ u < μ`.
    pub q: Vec<RationalPoly>,
    pub m_used: usize,
}

impl DecompositionRecord {
    /// Least common denominator of all `p` entries and `q` coefficients.
    pub fn denominator(&self) -> Integer {
        let mut d = Integer::from(1);
        for x in self.p.iter().flatten() {
            d.lcm_mut(x.denom());
        }
        for poly in &self.q {
            for c in poly.coeffs() {
                d.lcm_mut(c.denom());
            }
        }
        d
    }

    /// Largest `|p_{j,t}|` or `|coefficient of q_u|`.
    pub fn height(&self) -> Rational {
        self.p
            .iter()
            .flatten()
            .map(|x| Rational::from(x.abs_ref()))
            .chain(self.q.iter().map(|p| p.max_abs_coeff()))
            .max()
            .unwrap_or_default()
    }

    pub fn max_q_degree(&self) -> Option<usize> {
        self.q.iter().filter_map(|p| p.degree()).max()
    }
}

/// Accumulator for a linear combination of records.
struct Combo {
    p: Vec<Vec<Rational>>,
    q: Vec<Vec<Rational>>,
}

impl Combo {
    fn new(ell0: usize, s: u32, mu: usize) -> Self {
        Combo {
            p: vec![vec![Rational::new(); s as usize]; ell0],
            q: vec![Vec::new(); mu],
        }
    }

    fn add_record(&mut self, c: &Rational, rec: &DecompositionRecord) {
        if *c == 0 {
            return;
        }
        for (row, src) in self.p.iter_mut().zip(&rec.p) {
            for (x, y) in row.iter_mut().zip(src) {
                if *y != 0 {
                    *x += Rational::from(c * y);
                }
            }
        }
        for (acc, poly) in self.q.iter_mut().zip(&rec.q) {
            add_scaled(acc, poly.coeffs(), c, 0);
        }
    }

    fn add_monomial(&mut self, u: usize, c: &Rational, degree: usize) {
        add_scaled(&mut self.q[u], &[Rational::from(1)], c, degree);
    }

    fn finish(mut self, n: usize, s: u32, m_used: usize, divisor: &Rational) -> DecompositionRecord {
        for x in self.p.iter_mut().flatten() {
            *x /= divisor;
        }
        let q = self
            .q
            .into_iter()
            .map(|mut v| {
                for x in v.iter_mut() {
                    *x /= divisor;
                }
                RationalPoly::new(v)
            })
            .collect();
        DecompositionRecord {
            n,
            s,
            p: self.p,
            q,
            m_used,
        }
    }
}

fn add_scaled(acc: &mut Vec<Rational>, src: &[Rational], c: &Rational, shift: usize) {
    if acc.len() < src.len() + shift {
        acc.resize(src.len() + shift, Rational::new());
    }
    for (i, y) in src.iter().enumerate() {
        if *y != 0 {
            acc[i + shift] += Rational::from(c * y);
        }
    }
}

/// Memoizing decomposer for one series. Safe to share between threads.
pub struct Decomposer {
    stream: Arc<CoefficientStream>,
    tower: RwLock<Vec<InhomogeneousData>>,
    memo: RwLock<HashMap<(usize, u32), Arc<DecompositionRecord>>>,
}

impl Decomposer {
    pub fn new(stream: Arc<CoefficientStream>) -> Self {
        Decomposer {
            stream,
            tower: RwLock::new(Vec::new()),
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn stream(&self) -> &CoefficientStream {
        &self.stream
    }

    pub fn ell0(&self) -> usize {
        self.stream.spec().exponents.ell0
    }

    pub fn m_used(&self) -> usize {
        self.stream.spec().exponents.m_min
    }

    fn ensure_tower(&self, s: u32) {
        if self.tower.read().len() >= s as usize {
            return;
        }
        let mut w = self.tower.write();
        if w.len() < s as usize {
            *w = inhomogeneous_tower(self.stream.tf(), s);
        }
    }

    fn cached(&self, n: usize, s: u32) -> Option<Arc<DecompositionRecord>> {
        self.memo.read().get(&(n, s)).cloned()
    }

    /// Record for `F_n^{[s]}`, computing every missing `(n', t)` with
    /// `n' ≤ n`, `t ≤ s` bottom-up.
    pub fn decompose(&self, n: usize, s: u32) -> Result<Arc<DecompositionRecord>> {
        if n == 0 {
            return Err(Error::InvalidArgument("shift n must be at least 1".into()));
        }
        if s == 0 {
            return Err(Error::InvalidArgument("weight s must be at least 1".into()));
        }
        if let Some(r) = self.cached(n, s) {
            return Ok(r);
        }
        self.ensure_tower(s);
        for t in 1..=s {
            for k in 1..=n {
                if self.cached(k, t).is_none() {
                    let rec = Arc::new(self.compute(k, t)?);
                    self.memo.write().entry((k, t)).or_insert(rec);
                }
            }
        }
        Ok(self.cached(n, s).unwrap())
    }

    fn compute(&self, n: usize, s: u32) -> Result<DecompositionRecord> {
        let tf = self.stream.tf();
        let ell = tf.ell;
        let ell0 = self.ell0();
        let mu = tf.mu;
        let m_used = self.m_used();
        if n <= ell0 {
            let mut c = Combo::new(ell0, s, mu);
            c.p[n - 1][s as usize - 1] = Rational::from(1);
            return Ok(c.finish(n, s, m_used, &Rational::from(1)));
        }
        let nu = n - ell;
        let nr = Rational::from(nu as u64);
        let neg = Rational::from(-&nr);
        let lead = tf.q_at(ell, &neg);
        if lead == 0 {
            return Err(Error::IndicialVanishing(nu as i64));
        }
        let tower = self.tower.read();
        let data = &tower[s as usize - 1];
        let memo = self.memo.read();
        let rec = |k: usize, t: u32| memo.get(&(k, t)).expect("dependency computed first").clone();
        let mut c = Combo::new(ell0, s, mu);
        for j in 0..ell {
            let qj = -tf.q_at(j, &neg);
            c.add_record(&qj, &rec(nu + j, s));
        }
        for j in 0..=ell {
            for t in 1..s {
                let b = data.beta_at(j, t as usize, &nr);
                c.add_record(&b, &rec(nu + j, t));
            }
            for u in 0..data.b[j].len() {
                let b = data.b_at(j, u, &nr);
                if b != 0 {
                    c.add_monomial(u, &b, nu + j);
                }
            }
        }
        Ok(c.finish(n, s, m_used, &lead))
    }
}

/// Record for `F_n^{[s]}` using a fresh decomposer.
pub fn decompose(stream: Arc<CoefficientStream>, n: usize, s: u32) -> Result<DecompositionRecord> {
    Ok((*Decomposer::new(stream).decompose(n, s)?).clone())
}

/// Values `F_j^{[t]}(α)` and `(θ^u F)(α)` on which records are expanded.
pub struct BasisValues {
    pub alpha: Rational,
    pub bits: u32,
    /// `shifted[j−1][t−1]`.
    pub shifted: Vec<Vec<Float>>,
    pub theta: Vec<Float>,
}

impl BasisValues {
    pub fn new(stream: &CoefficientStream, ell0: usize, s: u32, alpha: &Rational, bits: u32) -> Result<Self> {
        let shifted = (1..=ell0)
            .map(|j| {
                (1..=s)
                    .map(|t| Ok(eval_shifted(stream, j, t, alpha, bits)?.value.re))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let theta = (0..stream.tf().mu as u32)
            .map(|u| Ok(eval_theta(stream, u, alpha, bits)?.value.re))
            .collect::<Result<Vec<_>>>()?;
        Ok(BasisValues {
            alpha: alpha.clone(),
            bits,
            shifted,
            theta,
        })
    }

    /// The right-hand side of the record at `α`, with the sum of the absolute
    /// values of its terms.
    pub fn expand(&self, rec: &DecompositionRecord, prec: u32) -> (Float, Float) {
        let mut sum = Float::new(prec);
        let mut mass = Float::new(prec);
        for (row, vals) in rec.p.iter().zip(&self.shifted) {
            for (c, v) in row.iter().zip(vals) {
                if *c != 0 {
                    let t = Float::with_val(prec, v * c);
                    mass += Float::with_val(prec, t.abs_ref());
                    sum += t;
                }
            }
        }
        let a = Float::with_val(prec, &self.alpha);
        for (poly, v) in rec.q.iter().zip(&self.theta) {
            if !poly.is_zero() {
                let t = Float::with_val(prec, &poly.eval_float(&a) * v);
                mass += Float::with_val(prec, t.abs_ref());
                sum += t;
            }
        }
        (sum, mass)
    }
}

/// `|F_n^{[s]}(α) − Σ p F_j^{[t]}(α) − Σ q_u(α)(θ^u F)(α)|`.
///
/// When the expansion has large terms that cancel, the basis values are
/// recomputed with enough extra bits to keep the absolute error below `2^{−bits}`.
pub fn verify_decomposition(
    stream: &CoefficientStream,
    rec: &DecompositionRecord,
    alpha: &Rational,
    bits: u32,
) -> Result<Float> {
    let ell0 = stream.spec().exponents.ell0;
    let mut work = bits;
    loop {
        let basis = BasisValues::new(stream, ell0, rec.s, alpha, work)?;
        let prec = work + 32;
        let (rhs, mass) = basis.expand(rec, prec);
        let lhs = eval_shifted(stream, rec.n, rec.s, alpha, work)?.value.re;
        let extra = if mass > 1 {
            mass.log2().to_f64().ceil() as u32 + 8
        } else {
            0
        };
        if work >= bits + extra {
            return Ok(Float::with_val(prec, &lhs - &rhs).abs());
        }
        work = bits + extra;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    #[serde(with = "crate::serde_util::integer")]
    pub denominator: Integer,
    /// `log` of the largest coefficient magnitude.
    pub log_height: f64,
    /// `D_emp(s, n)^{1/n}`.
    pub denominator_rate: f64,
    /// `H_emp(s, n)^{1/n}`.
    pub height_rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthProfile {
    pub s: u32,
    pub rows: Vec<GrowthRow>,
}

fn log_abs_rational(x: &Rational) -> f64 {
    if *x == 0 {
        return f64::NEG_INFINITY;
    }
    let f = Float::with_val(64, x);
    f.abs().ln().to_f64()
}

fn log_integer(x: &Integer) -> f64 {
    Float::with_val(64, x).ln().to_f64()
}

/// Cumulative denominators and heights of the weight-`s` records `n' ≤ n`.
pub fn growth_profile(dec: &Decomposer, s: u32, n_max: usize) -> Result<GrowthProfile> {
    if n_max < 10 {
        return Err(Error::InvalidArgument("growth profile needs n_max ≥ 10".into()));
    }
    let mut d = Integer::from(1);
    let mut h = Rational::new();
    let mut rows = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let rec = dec.decompose(n, s)?;
        d.lcm_mut(&rec.denominator());
        let rh = rec.height();
        if rh > h {
            h = rh;
        }
        let log_h = log_abs_rational(&h);
        rows.push(GrowthRow {
            n,
            denominator: d.clone(),
            log_height: log_h,
            denominator_rate: (log_integer(&d) / n as f64).exp(),
            height_rate: (log_h / n as f64).exp(),
        });
    }
    Ok(GrowthProfile { s, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn geometric() -> Decomposer {
        let spec = corpus::spec_by_label("geometric").unwrap();
        Decomposer::new(Arc::new(CoefficientStream::new(spec)))
    }

    #[test]
    fn base_records_are_trivial() {
        let d = geometric();
        let rec = d.decompose(1, 3).unwrap();
        assert_eq!(rec.p, vec![vec![Rational::new(), Rational::new(), Rational::from(1)]]);
        assert!(rec.q.iter().all(|p| p.is_zero()));
    }

    #[test]
    fn zero_arguments_are_rejected() {
        let d = geometric();
        assert!(d.decompose(0, 1).is_err());
        assert!(d.decompose(3, 0).is_err());
    }

    #[test]
    fn growth_profile_needs_ten_rows() {
        assert!(growth_profile(&geometric(), 1, 9).is_err());
    }
}
