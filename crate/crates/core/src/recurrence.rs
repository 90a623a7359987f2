//! Recurrences in the shift index `n` of `F_n^{[s]}`.
//!
//! For each weight `s ≥ 1` the family `F_n^{[s]}` satisfies
//!
//! ```text
//! Σ_j Q_j(−n) F_{n+j}^{[s]} = Σ_j Σ_{t<s} β_{j,t}(n) F_{n+j}^{[t]} + Σ_j z^{n+j} B_j(n; θ) F
//! ```
//!
//! with `β` and the coefficients of `B_j` polynomial in `n`. The homogeneous
//! part `Σ_j Q_j(−n) U(n+j) = 0` is handled by [`homogeneous_basis`] and
//! [`casoratian`].

use rayon::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operator::{ExponentReport, ThetaForm};
use crate::poly::RationalPoly;
use crate::series::{eval_shifted, eval_theta, CoefficientStream};

fn binomial(m: usize, p: usize) -> Rational {
    Rational::from(Integer::from(Integer::binomial_u(m as u32, p as u32)))
}

fn signed(k: usize) -> Rational {
    Rational::from(if k.is_multiple_of(2) { 1 } else { -1 })
}

/// `(n + j)^k` as a polynomial in `n`.
fn shifted_power(j: usize, k: usize) -> RationalPoly {
    RationalPoly::linear(Rational::from(j as u64)).pow(k as u32)
}

/// Right-hand side data of the weight-`s` recurrence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InhomogeneousData {
    pub s: u32,
    /// `beta[j][t-1]` is `β_{j,t}(n)` for `1 ≤ t ≤ s−1`.
    pub beta: Vec<Vec<RationalPoly>>,
    /// `b[j][q]` is `b_{j,s,q}(n)` for `0 ≤ q ≤ d_j − s`; empty when `s > d_j`.
    pub b: Vec<Vec<RationalPoly>>,
}

impl InhomogeneousData {
    pub fn ell(&self) -> usize {
        self.b.len() - 1
    }

    pub fn beta_at(&self, j: usize, t: usize, n: &Rational) -> Rational {
        self.beta[j][t - 1].eval(n)
    }

    pub fn b_at(&self, j: usize, q: usize, n: &Rational) -> Rational {
        self.b[j].get(q).map_or_else(Rational::new, |p| p.eval(n))
    }

    /// `B_j(n; X)` evaluated at a fixed `n`, as a polynomial in `X`.
    pub fn b_poly(&self, j: usize, n: &Rational) -> RationalPoly {
        RationalPoly::new(self.b[j].iter().map(|p| p.eval(n)).collect())
    }

    /// Checks the degree bounds and vanishing laws against `tf`, returning
    /// a description of the first violation.
    pub fn check_bounds(&self, tf: &ThetaForm) -> std::result::Result<(), String> {
        let s = self.s as i64;
        for j in 0..=tf.ell {
            let dj = tf.d(j);
            for (ti, p) in self.beta[j].iter().enumerate() {
                let t = ti as i64 + 1;
                if let Some(deg) = p.degree() {
                    if deg as i64 > dj + t - s {
                        return Err(format!("deg β_{{{j},{t}}} = {deg} > {}", dj + t - s));
                    }
                    if t < s - dj {
                        return Err(format!("β_{{{j},{t}}} nonzero below s − d_j"));
                    }
                }
            }
            for (q, p) in self.b[j].iter().enumerate() {
                if let Some(deg) = p.degree() {
                    if deg as i64 > dj - q as i64 - s {
                        return Err(format!("deg b_{{{j},{q}}} = {deg} > {}", dj - q as i64 - s));
                    }
                }
            }
            if s > tf.mu as i64 && self.b[j].iter().any(|p| !p.is_zero()) {
                return Err(format!("B_{j} nonzero although s > μ"));
            }
        }
        Ok(())
    }
}

fn base_case(tf: &ThetaForm) -> InhomogeneousData {
    let b = (0..=tf.ell)
        .map(|j| {
            let qj = &tf.q[j];
            let dj = qj.degree().unwrap_or(0);
            (0..dj)
                .map(|q| {
                    let mut acc = RationalPoly::zero();
                    for m in 0..=dj {
                        let rho = qj.coeff(m);
                        if rho == 0 {
                            continue;
                        }
                        for p in q + 1..=m {
                            let c = (binomial(m, p) * Rational::from(Integer::from(Integer::u_pow_u(j as u32, (m - p) as u32)))) * &rho
                                * signed(p - q);
                            acc = &acc + &shifted_power(j, p - q - 1).scale(&c);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    InhomogeneousData {
        s: 1,
        beta: vec![Vec::new(); tf.ell + 1],
        b,
    }
}

fn step(tf: &ThetaForm, prev: &InhomogeneousData) -> InhomogeneousData {
    let ell = tf.ell;
    let mut beta = Vec::with_capacity(ell + 1);
    let mut b = Vec::with_capacity(ell + 1);
    for j in 0..=ell {
        let bj = &prev.b[j];
        let mut first = RationalPoly::zero();
        for (q, bq) in bj.iter().enumerate() {
            first = &first + &(&shifted_power(j, q) * bq).scale(&signed(q));
        }
        let mut row = vec![first];
        row.extend(prev.beta[j].iter().cloned());
        beta.push(row);

        let len = bj.len().saturating_sub(1);
        let next = (0..len)
            .map(|h| {
                let mut acc = RationalPoly::zero();
                for (q, bq) in bj.iter().enumerate().skip(h + 1) {
                    let k = q - h - 1;
                    acc = &acc + &(&shifted_power(j, k) * bq).scale(&signed(k));
                }
                acc
            })
            .collect();
        b.push(next);
    }
    InhomogeneousData {
        s: prev.s + 1,
        beta,
        b,
    }
}

/// Data for weights `1..=s_max`, built by the induction on `s`.
pub fn inhomogeneous_tower(tf: &ThetaForm, s_max: u32) -> Vec<InhomogeneousData> {
    let mut out: Vec<InhomogeneousData> = Vec::with_capacity(s_max as usize);
    if s_max == 0 {
        return out;
    }
    out.push(base_case(tf));
    for _ in 1..s_max {
        let next = step(tf, out.last().unwrap());
        out.push(next);
    }
    out
}

pub fn inhomogeneous_data(tf: &ThetaForm, s: u32) -> Result<InhomogeneousData> {
    if s == 0 {
        return Err(Error::InvalidArgument("weight s must be at least 1".into()));
    }
    Ok(inhomogeneous_tower(tf, s).pop().unwrap())
}

/// `|LHS − RHS|` of the weight-`s` recurrence at shift `n` and `z = α`.
pub fn verify_recurrence(
    stream: &CoefficientStream,
    data: &InhomogeneousData,
    n: usize,
    alpha: &Rational,
    bits: u32,
) -> Result<Float> {
    if n == 0 {
        return Err(Error::InvalidArgument("shift n must be at least 1".into()));
    }
    let s = data.s;
    let tf = stream.tf();
    let prec = bits + 32;
    let nr = Rational::from(n as u64);
    let neg_n = Rational::from(-&nr);
    let mut lhs = Float::new(prec);
    let mut rhs = Float::new(prec);
    for j in 0..=tf.ell {
        let top = eval_shifted(stream, n + j, s, alpha, bits)?;
        lhs += Float::with_val(prec, &top.value.re * &tf.q_at(j, &neg_n));
        for t in 1..s {
            let beta = data.beta_at(j, t as usize, &nr);
            if beta != 0 {
                let f = eval_shifted(stream, n + j, t, alpha, bits)?;
                rhs += Float::with_val(prec, &f.value.re * &beta);
            }
        }
        let zp = Float::with_val(prec, alpha).pow((n + j) as u32);
        for q in 0..data.b[j].len() {
            let c = data.b_at(j, q, &nr);
            if c != 0 {
                let th = eval_theta(stream, q as u32, alpha, bits)?;
                let term = Float::with_val(prec, &th.value.re * &c);
                rhs += Float::with_val(prec, &term * &zp);
            }
        }
    }
    Ok((lhs - rhs).abs())
}

/// Basis of `Σ_j Q_j(−n) U(n+j) = 0` for `m ≤ n`, stored for `n ≤ N`.
#[derive(Clone, Debug, Serialize)]
pub struct HomogeneousBasis {
    pub m: usize,
    pub upto: usize,
    pub ell: usize,
    /// `u[j][n − m]` is `u_{j+1}(n)`.
    #[serde(with = "crate::serde_util::rational_table")]
    pub u: Vec<Vec<Rational>>,
    #[serde(skip)]
    q: Vec<RationalPoly>,
}

impl HomogeneousBasis {
    pub fn value(&self, j: usize, n: usize) -> &Rational {
        &self.u[j - 1][n - self.m]
    }

    /// `Q_j(−n)` for the recurrence the basis solves.
    pub fn q_neg(&self, j: usize, n: i64) -> Rational {
        self.q[j].eval(&Rational::from(-n))
    }

    /// Exact residual of column `j` at `n` (requires `n + ℓ ≤ N`).
    pub fn residual(&self, j: usize, n: usize) -> Rational {
        let mut acc = Rational::new();
        for i in 0..=self.ell {
            acc += self.q_neg(i, n as i64) * self.value(j, n + i);
        }
        acc
    }
}

/// Least `m ≥ m_min` with `Q_0(−n) Q_ℓ(−n) ≠ 0` for every `n ≥ m`.
pub fn basis_start(exponents: &ExponentReport) -> usize {
    let from_zero = exponents
        .integer_at_zero
        .iter()
        .map(|&e| 1 - e)
        .max()
        .unwrap_or(1);
    (exponents.m_min as i64).max(from_zero).max(1) as usize
}

/// Forward solution of the homogeneous recurrence from the identity seed
/// `u_j(m + i − 1) = δ_{ij}`.
pub fn homogeneous_basis(tf: &ThetaForm, m: usize, upto: usize) -> Result<HomogeneousBasis> {
    let ell = tf.ell;
    if upto + 1 < m + ell {
        return Err(Error::InvalidArgument(format!(
            "range [{m}, {upto}] shorter than the order {ell}"
        )));
    }
    for n in m..=upto {
        let neg = Rational::from(-(n as i64));
        if tf.q_at(0, &neg) == 0 || tf.q_at(ell, &neg) == 0 {
            return Err(Error::IndicialVanishing(n as i64));
        }
    }
    let len = upto - m + 1;
    let mut u = vec![vec![Rational::new(); len]; ell];
    for (j, col) in u.iter_mut().enumerate() {
        col[j] = Rational::from(1);
    }
    for n in m..=upto - ell {
        let neg = Rational::from(-(n as i64));
        let lead = tf.q_at(ell, &neg);
        let qs: Vec<Rational> = (0..ell).map(|i| tf.q_at(i, &neg)).collect();
        for col in u.iter_mut() {
            let mut acc = Rational::new();
            for (i, qi) in qs.iter().enumerate() {
                acc += Rational::from(qi * &col[n - m + i]);
            }
            col[n - m + ell] = -acc / &lead;
        }
    }
    Ok(HomogeneousBasis {
        m,
        upto,
        ell,
        u,
        q: tf.q.clone(),
    })
}

/// Exact determinant by fraction-free row reduction over ℚ.
pub fn determinant(mut a: Vec<Vec<Rational>>) -> Rational {
    let n = a.len();
    if n == 0 {
        return Rational::from(1);
    }
    let mut det = Rational::from(1);
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| a[r][c] != 0) else {
            return Rational::new();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for r in c + 1..n {
            if a[r][c] == 0 {
                continue;
            }
            let f = Rational::from(&a[r][c] / &pivot);
            for k in c..n {
                let d = Rational::from(&f * &a[c][k]);
                a[r][k] -= d;
            }
        }
    }
    det
}

/// Casoratians `W(n)` and signed minors `D_j(n)` of a basis.
#[derive(Clone, Debug, Serialize)]
pub struct CasoratianData {
    pub m: usize,
    /// `w[n − m]` is the determinant `W(n)`.
    #[serde(with = "crate::serde_util::rational_vec")]
    pub w: Vec<Rational>,
    /// `W(n)` propagated from `W(m)` by `Q_ℓ(−n)W(n+1) = (−1)^ℓ Q_0(−n)W(n)`.
    #[serde(with = "crate::serde_util::rational_vec")]
    pub w_law: Vec<Rational>,
    /// `minors[j−1][n − m]` is `D_j(n)`.
    #[serde(with = "crate::serde_util::rational_table")]
    pub minors: Vec<Vec<Rational>>,
}

impl CasoratianData {
    pub fn w_at(&self, n: usize) -> &Rational {
        &self.w[n - self.m]
    }

    pub fn minor(&self, j: usize, n: usize) -> &Rational {
        &self.minors[j - 1][n - self.m]
    }

    pub fn law_agrees(&self) -> bool {
        self.w == self.w_law
    }
}

/// `W(n)` for `m ≤ n ≤ N − ℓ + 1` and `D_j(n)` for `m ≤ n ≤ N − ℓ + 2`
/// (capped at `N`).
///
/// The minors carry the sign `(−1)^{j+1}`: with it the variation-of-constants
/// formula `V(n) = Σ_j (χ_j + Σ_{k=m+1}^n D_j(k) g(k−1) / (Q_ℓ(1−k) W(k))) u_j(n)`
/// solves `Σ_j Q_j(−n) V(n+j) = g(n)`.
pub fn casoratian(basis: &HomogeneousBasis) -> Result<CasoratianData> {
    let ell = basis.ell;
    let m = basis.m;
    let last_w = basis.upto + 1 - ell;
    let w: Vec<Rational> = (m..=last_w)
        .into_par_iter()
        .map(|n| {
            let rows = (0..ell)
                .map(|r| (1..=ell).map(|j| basis.value(j, n + ell - 1 - r).clone()).collect())
                .collect();
            determinant(rows)
        })
        .collect();
    if let Some(i) = w.iter().position(|x| *x == 0) {
        return Err(Error::CasoratianZero((m + i) as i64));
    }
    let mut w_law = Vec::with_capacity(w.len());
    w_law.push(w[0].clone());
    for n in m..last_w {
        let prev = w_law.last().unwrap();
        let mut next = (basis.q_neg(0, n as i64) * prev) / basis.q_neg(ell, n as i64);
        if ell % 2 == 1 {
            next = -next;
        }
        w_law.push(next);
    }
    let last_d = (basis.upto + 2).saturating_sub(ell).min(basis.upto);
    let minors = (1..=ell)
        .map(|j| {
            (m..=last_d)
                .into_par_iter()
                .map(|n| {
                    let rows = (0..ell - 1)
                        .map(|r| {
                            (1..=ell)
                                .filter(|&i| i != j)
                                .map(|i| basis.value(i, n + ell - 2 - r).clone())
                                .collect()
                        })
                        .collect();
                    let d = determinant(rows);
                    if j % 2 == 0 {
                        -d
                    } else {
                        d
                    }
                })
                .collect()
        })
        .collect();
    Ok(CasoratianData {
        m,
        w,
        w_law,
        minors,
    })
}
