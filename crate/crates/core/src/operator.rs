//! Differential operators, their θ-form and indicial data.
//!
//! - [`DiffOperator`]: `Σ P_j(z) (d/dz)^j` with rational polynomial coefficients.
//! - [`ThetaForm`]: `c·z^{μ−ω}·L = Σ_{j=0}^{ℓ} z^j Q_j(θ+j)` with integer `Q_j`.
//! - [`ExponentReport`]: rational exponents at 0 and ∞, `ℓ₀` and the minimal shift.
//! - [`hypergeometric_operator`]: `θ∏(θ+b_j−1) − z∏(θ+a_i)`.

use std::collections::BTreeMap;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{falling_factorial, RationalPoly};
use crate::roots::rational_roots;
use crate::serde_util;

/// Element of the Weyl algebra in normal form `Σ P_j(z) D^j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylElement {
    pub coeffs: Vec<RationalPoly>,
}

impl WeylElement {
    pub fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(|p| p.is_zero()) {
            self.coeffs.pop();
        }
        self
    }

    pub fn scalar(p: RationalPoly) -> Self {
        WeylElement { coeffs: vec![p] }.normalize()
    }

    pub fn z() -> Self {
        Self::scalar(RationalPoly::x())
    }

    pub fn d() -> Self {
        WeylElement {
            coeffs: vec![RationalPoly::zero(), RationalPoly::one()],
        }
    }

    /// `θ = z·D`.
    pub fn theta() -> Self {
        WeylElement {
            coeffs: vec![RationalPoly::zero(), RationalPoly::x()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|p| p.is_zero())
    }

    /// Returns the polynomial if the element has no derivative part.
    pub fn as_scalar(&self) -> Option<RationalPoly> {
        match self.coeffs.len() {
            0 => Some(RationalPoly::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = RationalPoly::zero();
        WeylElement {
            coeffs: (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        }
        .normalize()
    }

    pub fn neg(&self) -> Self {
        WeylElement {
            coeffs: self.coeffs.iter().map(|p| -p).collect(),
        }
    }

    /// Product via `D^a·Q = Σ_k C(a,k) Q^{(k)} D^{a−k}`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return WeylElement::default();
        }
        let mut out = vec![RationalPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (a, pa) in self.coeffs.iter().enumerate() {
            if pa.is_zero() {
                continue;
            }
            for (b, qb) in o.coeffs.iter().enumerate() {
                let mut deriv = qb.clone();
                for k in 0..=a {
                    if deriv.is_zero() {
                        break;
                    }
                    let binom = Rational::from(Integer::from(Integer::binomial_u(a as u32, k as u32)));
                    let term = (pa * &deriv).scale(&binom);
                    let idx = a - k + b;
                    out[idx] = &out[idx] + &term;
                    deriv = deriv.derivative();
                }
            }
        }
        WeylElement { coeffs: out }.normalize()
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::scalar(RationalPoly::one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `L = Σ_{j=0}^{μ} P_j(z)(d/dz)^j` with `P_μ ≠ 0`, `μ ≥ 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffOperator {
    coeffs: Vec<RationalPoly>,
}

#[derive(Serialize, Deserialize)]
struct OperatorDoc {
    #[serde(rename = "P")]
    p: Vec<RationalPoly>,
}

impl Serialize for DiffOperator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        OperatorDoc {
            p: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiffOperator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = OperatorDoc::deserialize(d)?;
        DiffOperator::new(doc.p).map_err(serde::de::Error::custom)
    }
}

impl DiffOperator {
    pub fn new(coeffs: Vec<RationalPoly>) -> Result<Self> {
        let w = WeylElement { coeffs }.normalize();
        Self::from_weyl(w)
    }

    pub fn from_weyl(w: WeylElement) -> Result<Self> {
        let w = w.normalize();
        if w.is_zero() {
            return Err(Error::ZeroOperator);
        }
        if w.coeffs.len() < 2 {
            return Err(Error::OrderZero);
        }
        Ok(DiffOperator { coeffs: w.coeffs })
    }

    pub fn coeffs(&self) -> &[RationalPoly] {
        &self.coeffs
    }

    pub fn mu(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &RationalPoly {
        &self.coeffs[self.mu()]
    }

    /// `L z^p` as a map exponent → coefficient.
    pub fn apply_to_monomial(&self, p: u64) -> BTreeMap<i64, Rational> {
        let mut out = BTreeMap::new();
        for (j, pj) in self.coeffs.iter().enumerate() {
            let ff = falling_factorial(j).eval(&Rational::from(p));
            if ff == 0 {
                continue;
            }
            for (i, c) in pj.coeffs().iter().enumerate() {
                let e = p as i64 - j as i64 + i as i64;
                *out.entry(e).or_insert_with(Rational::new) += Rational::from(c * &ff);
            }
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn to_weyl(&self) -> WeylElement {
        WeylElement {
            coeffs: self.coeffs.clone(),
        }
    }
}

/// `clearing_constant · z^{μ−ω} · L = Σ_{j=0}^{ℓ} z^j Q_j(θ+j)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaForm {
    pub q: Vec<RationalPoly>,
    #[serde(with = "serde_util::integer")]
    pub clearing_constant: Integer,
    pub mu: usize,
    pub delta: usize,
    pub omega: usize,
    pub ell: usize,
}

impl ThetaForm {
    /// Builds a θ-form directly from `Q_0..Q_ℓ`, checking the degree law.
    pub fn from_q(q: Vec<RationalPoly>, mu: usize, omega: usize) -> Result<Self> {
        let ell = q.len().saturating_sub(1);
        let tf = ThetaForm {
            clearing_constant: Integer::from(1),
            mu,
            delta: omega + ell,
            omega,
            ell,
            q,
        };
        tf.check()?;
        Ok(tf)
    }

    fn check(&self) -> Result<()> {
        if self.ell == 0 {
            return Err(Error::EllZero);
        }
        for idx in [0, self.ell] {
            let d = self.q[idx].degree().unwrap_or(0);
            if self.q[idx].is_zero() || d != self.mu {
                return Err(Error::IrregularSingularity {
                    index: idx,
                    degree: d,
                    mu: self.mu,
                });
            }
        }
        Ok(())
    }

    /// `Q_j(X)`, zero outside `0..=ℓ`.
    pub fn q_at(&self, j: usize, x: &Rational) -> Rational {
        self.q.get(j).map(|p| p.eval(x)).unwrap_or_default()
    }

    /// Degree of `Q_j` as an integer with `-1` for the zero polynomial.
    pub fn d(&self, j: usize) -> i64 {
        self.q[j].degree().map_or(-1, |d| d as i64)
    }

    /// `Σ_j z^j Q_j(θ+j)` applied to `z^p`, shifted to the exponents of `c·L z^p`.
    pub fn apply_to_monomial(&self, p: u64) -> BTreeMap<i64, Rational> {
        let mut out = BTreeMap::new();
        for (j, qj) in self.q.iter().enumerate() {
            let v = qj.eval(&Rational::from(p + j as u64));
            if v != 0 {
                let e = p as i64 + j as i64 + self.omega as i64 - self.mu as i64;
                out.insert(e, v);
            }
        }
        out
    }
}

pub fn theta_form(op: &DiffOperator) -> Result<ThetaForm> {
    let mu = op.mu();
    // z^μ·L = Σ_j P_j(z) z^{μ−j} (z^j D^j), with z^j D^j the falling factorial in θ.
    let mut r: BTreeMap<usize, RationalPoly> = BTreeMap::new();
    for (j, pj) in op.coeffs().iter().enumerate() {
        let ff = falling_factorial(j);
        for (i, c) in pj.coeffs().iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let k = i + mu - j;
            let e = r.entry(k).or_default();
            *e = &*e + &ff.scale(c);
        }
    }
    r.retain(|_, p| !p.is_zero());
    let omega = *r.keys().next().ok_or(Error::ZeroOperator)?;
    let delta = *r.keys().last().unwrap();
    let ell = delta - omega;
    let clearing = r
        .values()
        .fold(Integer::from(1), |acc, p| acc.lcm(&p.denominator_lcm()));
    let c = Rational::from(clearing.clone());
    let q: Vec<RationalPoly> = (0..=ell)
        .map(|j| match r.get(&(j + omega)) {
            Some(s) => s.translate(&Rational::from(-(j as i64))).scale(&c),
            None => RationalPoly::zero(),
        })
        .collect();
    let tf = ThetaForm {
        q,
        clearing_constant: clearing,
        mu,
        delta,
        omega,
        ell,
    };
    tf.check()?;
    Ok(tf)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    #[serde(with = "serde_util::rational_mult")]
    pub at_zero: Vec<(Rational, usize)>,
    pub at_zero_unfactored: Vec<RationalPoly>,
    #[serde(with = "serde_util::rational_mult")]
    pub at_infinity: Vec<(Rational, usize)>,
    pub at_infinity_unfactored: Vec<RationalPoly>,
    pub integer_at_zero: Vec<i64>,
    pub integer_at_infinity: Vec<i64>,
    pub ell0: usize,
    pub m_min: usize,
}

fn integer_roots(roots: &[(Rational, usize)]) -> Vec<i64> {
    roots
        .iter()
        .filter(|(r, _)| *r.denom() == 1)
        .flat_map(|(r, m)| std::iter::repeat_n(r.numer().to_i64().expect("huge integer exponent"), *m))
        .collect()
}

/// Indicial polynomial at ∞: `Q_ℓ(−X+ℓ)`.
pub fn indicial_at_infinity(tf: &ThetaForm) -> RationalPoly {
    tf.q[tf.ell].compose_linear(&Rational::from(-1), &Rational::from(tf.ell as i64))
}

pub fn exponent_report(tf: &ThetaForm) -> ExponentReport {
    let zero = rational_roots(&tf.q[0]);
    let inf = rational_roots(&indicial_at_infinity(tf));
    let integer_at_zero = integer_roots(&zero.roots);
    let integer_at_infinity = integer_roots(&inf.roots);
    let ell0 = integer_at_infinity
        .iter()
        .copied()
        .fold(tf.ell as i64, i64::max) as usize;
    ExponentReport {
        at_zero: zero.roots,
        at_zero_unfactored: zero.unfactored.into_iter().map(|(p, _)| p).collect(),
        at_infinity: inf.roots,
        at_infinity_unfactored: inf.unfactored.into_iter().map(|(p, _)| p).collect(),
        integer_at_zero,
        integer_at_infinity,
        ell0,
        m_min: ell0 - tf.ell + 1,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureSummary {
    pub mu: usize,
    pub delta: usize,
    pub omega: usize,
    pub ell: usize,
    pub ell0: usize,
    pub m_min: usize,
}

pub fn structure_summary(tf: &ThetaForm) -> StructureSummary {
    let ex = exponent_report(tf);
    StructureSummary {
        mu: tf.mu,
        delta: tf.delta,
        omega: tf.omega,
        ell: tf.ell,
        ell0: ex.ell0,
        m_min: ex.m_min,
    }
}

/// `L_h = θ∏(θ+b_j−1) − z∏(θ+a_i)` in `d/dz` form.
pub fn hypergeometric_operator(a: &[Rational], b: &[Rational]) -> Result<DiffOperator> {
    if a.len() != b.len() + 1 {
        return Err(Error::ParameterCount);
    }
    if let Some(bad) = b.iter().find(|x| *x.denom() == 1 && x.cmp0() != std::cmp::Ordering::Greater) {
        return Err(Error::ForbiddenParameter(bad.to_string()));
    }
    let th = WeylElement::theta();
    let shifted = |c: Rational| th.add(&WeylElement::scalar(RationalPoly::constant(c)));
    let left = b
        .iter()
        .fold(th.clone(), |acc, bj| acc.mul(&shifted(Rational::from(bj - 1u32))));
    let right = a
        .iter()
        .fold(WeylElement::z(), |acc, ai| acc.mul(&shifted(ai.clone())));
    DiffOperator::from_weyl(left.add(&right.neg()))
}
