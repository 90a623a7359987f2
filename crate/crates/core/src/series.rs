//! Taylor coefficients of `F` and high-precision evaluation of `F_n^{[s]}`.
//!
//! The coefficients satisfy `Σ_{j=0}^{ℓ} Q_j(N)·A_{N−j} = 0` for every `N ≥ 0`
//! (with `A_k = 0` for `k < 0`), obtained by applying `Σ z^j Q_j(θ+j)` to `Σ A_k z^k`.

use std::sync::{Arc, OnceLock};

use parking_lot::{MappedRwLockReadGuard, RwLock, RwLockReadGuard};
use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::bigcomplex::{BigComplex, ComplexDoc};
use crate::error::{Error, Result};
use crate::operator::{exponent_report, hypergeometric_operator, theta_form, DiffOperator, ExponentReport, ThetaForm};
use crate::parse::operator_from_json;
use crate::poly::parse_rational;
use crate::roots;

/// Extra indices beyond the initial data on which the recurrence is checked.
const CONSISTENCY_MARGIN: usize = 5;

#[derive(Clone, Debug)]
pub struct GFunctionSpec {
    pub label: String,
    pub op: DiffOperator,
    pub tf: ThetaForm,
    pub exponents: ExponentReport,
    pub initial: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct SpecDoc {
    label: String,
    operator: DiffOperator,
    initial: Vec<String>,
}

impl Serialize for GFunctionSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SpecDoc {
            label: self.label.clone(),
            operator: self.op.clone(),
            initial: self.initial.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl GFunctionSpec {
    pub fn new(label: impl Into<String>, op: DiffOperator, initial: Vec<Rational>) -> Result<Self> {
        let tf = theta_form(&op)?;
        let exponents = exponent_report(&tf);
        let needed = exponents
            .integer_at_zero
            .iter()
            .filter(|&&e| e >= 0)
            .max()
            .map_or(1, |&e| e as usize + 1);
        if initial.len() < needed {
            return Err(Error::InsufficientInitial {
                needed,
                got: initial.len(),
            });
        }
        let spec = GFunctionSpec {
            label: label.into(),
            op,
            tf,
            exponents,
            initial,
        };
        let check_to = spec.k0() + spec.tf.ell + CONSISTENCY_MARGIN;
        let coeffs = spec.generate(check_to)?;
        for n in 0..=check_to {
            if recurrence_residual(&spec.tf, &coeffs, n) != 0 {
                return Err(Error::InconsistentInitial(n));
            }
        }
        Ok(spec)
    }

    /// Index of the last supplied initial coefficient.
    pub fn k0(&self) -> usize {
        self.initial.len() - 1
    }

    pub fn hypergeometric(label: impl Into<String>, a: &[Rational], b: &[Rational]) -> Result<Self> {
        let op = hypergeometric_operator(a, b)?;
        Self::new(label, op, vec![Rational::from(1)])
    }

    /// Accepts `{"operator": …, "initial": […], "label": …}` or
    /// `{"hypergeometric": {"a": […], "b": […]}, "label": …}`.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let label = v
            .get("label")
            .and_then(|l| l.as_str())
            .unwrap_or("unnamed")
            .to_string();
        let rats = |key: &str, obj: &serde_json::Value| -> Result<Vec<Rational>> {
            obj.get(key)
                .and_then(|x| x.as_array())
                .ok_or_else(|| Error::Document(format!("missing list {key:?}")))?
                .iter()
                .map(|x| match x {
                    serde_json::Value::String(s) => parse_rational(s).map_err(Error::Document),
                    serde_json::Value::Number(n) if n.is_i64() => Ok(Rational::from(n.as_i64().unwrap())),
                    _ => Err(Error::Document(format!("expected rational, got {x}"))),
                })
                .collect()
        };
        if let Some(h) = v.get("hypergeometric") {
            return Self::hypergeometric(label, &rats("a", h)?, &rats("b", h)?);
        }
        let op = operator_from_json(
            v.get("operator")
                .ok_or_else(|| Error::Document("missing \"operator\"".into()))?,
        )?;
        Self::new(label, op, rats("initial", v)?)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::Document(e.to_string()))?;
        Self::from_json(&v)
    }

    fn generate(&self, upto: usize) -> Result<Vec<Rational>> {
        let mut a = Vec::with_capacity(upto + 1);
        for n in 0..=upto {
            if n < self.initial.len() {
                a.push(self.initial[n].clone());
            } else {
                a.push(next_coefficient(&self.tf, &a)?);
            }
        }
        Ok(a)
    }
}

/// `Σ_j Q_j(N)·A_{N−j}` for the given prefix (which must reach index `N`).
pub fn recurrence_residual(tf: &ThetaForm, a: &[Rational], n: usize) -> Rational {
    let x = Rational::from(n as u64);
    let mut acc = Rational::new();
    for j in 0..=tf.ell.min(n) {
        acc += tf.q_at(j, &x) * &a[n - j];
    }
    acc
}

fn next_coefficient(tf: &ThetaForm, a: &[Rational]) -> Result<Rational> {
    let n = a.len();
    let x = Rational::from(n as u64);
    let q0 = tf.q_at(0, &x);
    if q0 == 0 {
        return Err(Error::DegenerateRecurrence(n));
    }
    let mut acc = Rational::new();
    for j in 1..=tf.ell.min(n) {
        acc += tf.q_at(j, &x) * &a[n - j];
    }
    Ok(-acc / q0)
}

/// Singularities of the leading coefficient and the resulting radius lower bound.
#[derive(Clone, Debug)]
pub struct Radius {
    pub radius: Float,
    pub singularities: Vec<BigComplex>,
    pub exact: Vec<Rational>,
}

#[derive(Serialize)]
pub struct RadiusDoc {
    pub radius: String,
    pub singularities: Vec<ComplexDoc>,
    pub exact: Vec<String>,
}

impl From<&Radius> for RadiusDoc {
    fn from(r: &Radius) -> Self {
        RadiusDoc {
            radius: r.radius.to_string_radix(10, Some(30)),
            singularities: r.singularities.iter().map(ComplexDoc::from).collect(),
            exact: r.exact.iter().map(|x| x.to_string()).collect(),
        }
    }
}

pub fn radius_lower_bound(spec: &GFunctionSpec, bits: u32) -> Result<Radius> {
    let lead = spec.op.leading();
    // Strip the factor z^v: only nonzero singularities matter.
    let v = lead.coeffs().iter().take_while(|c| **c == 0).count();
    let core = crate::poly::RationalPoly::new(lead.coeffs()[v..].to_vec());
    if core.degree().unwrap_or(0) == 0 {
        return Err(Error::NoFiniteSingularity);
    }
    let prec = 2 * bits.max(64);
    let rr = roots::rational_roots(&core);
    let mut sing: Vec<BigComplex> = rr
        .roots
        .iter()
        .map(|(x, _)| BigComplex::from_rational(prec, x))
        .collect();
    for (f, _) in &rr.unfactored {
        sing.extend(roots::complex_roots_squarefree(f, prec));
    }
    let radius = sing
        .iter()
        .map(|z| z.abs())
        .min_by(|a, b| a.partial_cmp(b).unwrap())
        .unwrap();
    Ok(Radius {
        radius,
        singularities: sing,
        exact: rr.roots.into_iter().map(|(x, _)| x).collect(),
    })
}

/// Coefficients `A_k` with an append-only cache.
#[derive(Debug)]
pub struct CoefficientStream {
    spec: Arc<GFunctionSpec>,
    cache: RwLock<Vec<Rational>>,
    radius: OnceLock<std::result::Result<Radius, Error>>,
}

impl CoefficientStream {
    pub fn new(spec: GFunctionSpec) -> Self {
        Self::from_arc(Arc::new(spec))
    }

    pub fn from_arc(spec: Arc<GFunctionSpec>) -> Self {
        let cache = RwLock::new(spec.initial.clone());
        CoefficientStream {
            spec,
            cache,
            radius: OnceLock::new(),
        }
    }

    pub fn spec(&self) -> &GFunctionSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> Arc<GFunctionSpec> {
        self.spec.clone()
    }

    pub fn tf(&self) -> &ThetaForm {
        &self.spec.tf
    }

    /// Extends the cache so that it holds `A_0..=A_n`.
    pub fn ensure(&self, n: usize) -> Result<()> {
        if self.cache.read().len() > n {
            return Ok(());
        }
        let mut w = self.cache.write();
        while w.len() <= n {
            let next = next_coefficient(&self.spec.tf, &w)?;
            w.push(next);
        }
        Ok(())
    }

    /// Borrowed prefix `A_0..=A_n`.
    pub fn prefix(&self, n: usize) -> Result<MappedRwLockReadGuard<'_, [Rational]>> {
        self.ensure(n)?;
        Ok(RwLockReadGuard::map(self.cache.read(), |v| &v[..=n]))
    }

    pub fn get(&self, k: usize) -> Result<Rational> {
        self.ensure(k)?;
        Ok(self.cache.read()[k].clone())
    }

    pub fn radius(&self) -> Result<&Radius> {
        self.radius
            .get_or_init(|| radius_lower_bound(&self.spec, 128))
            .as_ref()
            .map_err(|e| e.clone())
    }
}

/// `A_0..=A_N`.
pub fn coefficients(stream: &CoefficientStream, n: usize) -> Result<Vec<Rational>> {
    Ok(stream.prefix(n)?.to_vec())
}

/// A high-precision value with its heuristic truncation margin.
#[derive(Clone, Debug)]
pub struct ComplexApprox {
    pub value: BigComplex,
    pub bits: u32,
    pub tail_margin: Float,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComplexApproxDoc {
    pub value: ComplexDoc,
    pub bits: u32,
    pub tail_margin: String,
}

impl From<&ComplexApprox> for ComplexApproxDoc {
    fn from(c: &ComplexApprox) -> Self {
        ComplexApproxDoc {
            value: ComplexDoc::from(&c.value),
            bits: c.bits,
            tail_margin: c.tail_margin.to_string_radix(10, Some(6)),
        }
    }
}

impl ComplexApprox {
    pub fn real(value: Float, bits: u32, tail_margin: Float) -> Self {
        ComplexApprox {
            value: BigComplex::from_real(value).with_prec(bits),
            bits,
            tail_margin,
        }
    }

    pub fn re(&self) -> &Float {
        &self.value.re
    }
}

/// Outcome of a stabilized summation.
#[derive(Clone, Debug)]
pub struct SumResult {
    pub value: Float,
    pub tail_margin: Float,
    pub terms: usize,
    pub working_prec: u32,
}

const FIRST_CHECKPOINT: usize = 32;
const MAX_TERMS: usize = 1 << 22;

/// Sums terms produced by `make(prec)` until three successive doublings of the
/// length each move the partial sum by less than `2^{−bits+8}·|sum|`.
/// Heavy cancellation triggers a rerun with correspondingly more precision.
pub fn stabilized_sum<G, F>(bits: u32, mut make: G) -> Result<SumResult>
where
    G: FnMut(u32) -> F,
    F: FnMut() -> Option<Float>,
{
    let mut prec = bits + 32;
    for _attempt in 0..4 {
        let mut next = make(prec);
        let mut sum = Float::new(prec);
        let mut mass = Float::new(prec);
        let mut last_checkpoint = Float::new(prec);
        let mut small_moves = 0;
        let mut checkpoint = FIRST_CHECKPOINT;
        let mut k = 0usize;
        let mut margin = Float::new(prec);
        let mut finished = false;
        while k < MAX_TERMS {
            match next() {
                Some(t) => {
                    mass += Float::with_val(prec, t.abs_ref());
                    sum += &t;
                }
                None => {
                    finished = true;
                    margin = Float::new(prec);
                    break;
                }
            }
            k += 1;
            if k == checkpoint {
                let delta = Float::with_val(prec, &sum - &last_checkpoint).abs();
                let thr = Float::with_val(prec, sum.abs_ref()) << (8 - bits as i32);
                if delta <= thr {
                    small_moves += 1;
                } else {
                    small_moves = 0;
                }
                margin = delta;
                last_checkpoint = sum.clone();
                checkpoint *= 2;
                if small_moves >= 3 {
                    finished = true;
                    break;
                }
            }
        }
        if !finished {
            return Err(Error::NotStabilized(MAX_TERMS));
        }
        let lost = if sum.is_zero() {
            0
        } else {
            let ratio = Float::with_val(prec, &mass / Float::with_val(prec, sum.abs_ref()));
            ratio.log2().to_f64().max(0.0).ceil() as u32
        };
        if lost <= 16 || prec >= bits + 32 + lost {
            return Ok(SumResult {
                value: sum,
                tail_margin: margin,
                terms: k,
                working_prec: prec,
            });
        }
        prec = bits + 48 + lost;
    }
    Err(Error::NotStabilized(MAX_TERMS))
}

pub(crate) fn check_inside(stream: &CoefficientStream, alpha: &Rational) -> Result<()> {
    let r = &stream.radius()?.radius;
    let a = Float::with_val(r.prec(), Rational::from(alpha.abs_ref()));
    if alpha.cmp0() == std::cmp::Ordering::Equal {
        return Err(Error::InvalidArgument("evaluation point must be nonzero".into()));
    }
    if a >= *r {
        return Err(Error::OutsideDisk {
            point: a.to_f64(),
            radius: r.to_f64(),
        });
    }
    Ok(())
}

/// Iterator over `A_k` as floats, extending the exact cache in chunks.
pub(crate) struct FloatCoeffs<'a> {
    stream: &'a CoefficientStream,
    prec: u32,
    buf: Vec<Float>,
    next: usize,
}

impl<'a> FloatCoeffs<'a> {
    pub(crate) fn new(stream: &'a CoefficientStream, prec: u32, start: usize) -> Self {
        FloatCoeffs {
            stream,
            prec,
            buf: Vec::new(),
            next: start,
        }
    }

    fn fill(&mut self) {
        let start = self.next;
        let end = start + 256;
        if let Ok(p) = self.stream.prefix(end) {
            self.buf = p[start..end].iter().rev().map(|a| Float::with_val(self.prec, a)).collect();
        }
    }
}

impl Iterator for FloatCoeffs<'_> {
    type Item = Float;
    fn next(&mut self) -> Option<Float> {
        if self.buf.is_empty() {
            self.fill();
        }
        let v = self.buf.pop()?;
        self.next += 1;
        Some(v)
    }
}

/// `F_n^{[s]}(α) = Σ_k A_k α^{k+n}/(k+n)^s`; for `s = 0` this is `α^n F(α)`.
pub fn eval_shifted(stream: &CoefficientStream, n: usize, s: u32, alpha: &Rational, bits: u32) -> Result<ComplexApprox> {
    if bits < 64 {
        return Err(Error::InvalidArgument("bits must be at least 64".into()));
    }
    check_inside(stream, alpha)?;
    let r = stabilized_sum(bits, |prec| {
        let a = Float::with_val(prec, alpha);
        let mut pow = Float::with_val(prec, (&a).pow(n as u32));
        let mut coeffs = FloatCoeffs::new(stream, prec, 0);
        let mut k = 0usize;
        move || {
            let ak = coeffs.next()?;
            let mut t = Float::with_val(prec, &ak * &pow);
            if s > 0 {
                let d = Float::with_val(prec, (k + n) as u64);
                t /= d.pow(s);
            }
            pow *= &a;
            k += 1;
            Some(t)
        }
    })?;
    Ok(ComplexApprox::real(r.value, bits, r.tail_margin))
}

/// `(θ^q F)(α) = Σ_k k^q A_k α^k`.
pub fn eval_theta(stream: &CoefficientStream, q: u32, alpha: &Rational, bits: u32) -> Result<ComplexApprox> {
    check_inside(stream, alpha)?;
    let r = stabilized_sum(bits, |prec| {
        let a = Float::with_val(prec, alpha);
        let mut pow = Float::with_val(prec, 1);
        let mut coeffs = FloatCoeffs::new(stream, prec, 0);
        let mut k = 0u64;
        move || {
            let ak = coeffs.next()?;
            let mut t = Float::with_val(prec, &ak * &pow);
            if q > 0 {
                t *= Float::with_val(prec, k).pow(q);
            }
            pow *= &a;
            k += 1;
            Some(t)
        }
    })?;
    Ok(ComplexApprox::real(r.value, bits, r.tail_margin))
}

/// A simple rational point below `R/2`: `1/⌈2/R⌉`, capped at 1.
pub fn half_radius_point(stream: &CoefficientStream) -> Result<Rational> {
    let r = &stream.radius()?.radius;
    let m = Float::with_val(r.prec(), 2 / r).ceil().to_integer().unwrap();
    Ok(Rational::from((rug::Integer::from(1), m.max(rug::Integer::from(1)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_operator;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    fn geometric() -> CoefficientStream {
        let op = parse_operator("(1-z)*D - 1").unwrap();
        CoefficientStream::new(GFunctionSpec::new("geometric", op, vec![Rational::from(1)]).unwrap())
    }

    #[test]
    fn geometric_coefficients() {
        let s = geometric();
        assert_eq!(coefficients(&s, 5).unwrap(), vec![Rational::from(1); 6]);
    }

    #[test]
    fn log_coefficients() {
        let op = parse_operator("(1-z)*D^2 - D").unwrap();
        let spec = GFunctionSpec::new("log", op, vec![Rational::new(), Rational::from(1)]).unwrap();
        let s = CoefficientStream::new(spec);
        assert_eq!(
            coefficients(&s, 4).unwrap(),
            vec![Rational::new(), Rational::from(1), q(1, 2), q(1, 3), q(1, 4)]
        );
    }

    #[test]
    fn inconsistent_initial_data() {
        let op = parse_operator("(1-z)*D - 1").unwrap();
        let r = GFunctionSpec::new("bad", op, vec![Rational::from(1), Rational::from(2)]);
        assert_eq!(r.err(), Some(Error::InconsistentInitial(1)));
    }

    #[test]
    fn shifted_log_two() {
        let s = geometric();
        let v = eval_shifted(&s, 1, 1, &q(1, 2), 128).unwrap();
        let ln2 = Float::with_val(160, 2).ln();
        let err = Float::with_val(160, v.re() - &ln2).abs();
        assert!(err < 1e-36, "{err}");
    }

    #[test]
    fn shifted_dilog_half() {
        // Li_2(1/2) = π²/12 − log²2/2
        let s = geometric();
        let v = eval_shifted(&s, 1, 2, &q(1, 2), 128).unwrap();
        let pi = BigComplex::pi(160);
        let ln2 = Float::with_val(160, 2).ln();
        let want = Float::with_val(160, pi.square_ref()) / 12 - Float::with_val(160, ln2.square_ref()) / 2;
        assert!(Float::with_val(160, v.re() - &want).abs() < 1e-36);
    }

    #[test]
    fn weight_zero_is_plain_evaluation() {
        let s = geometric();
        let v = eval_shifted(&s, 1, 0, &q(1, 3), 128).unwrap();
        // (1/3)·1/(1−1/3) = 1/2
        assert!(Float::with_val(160, v.re() - 0.5).abs() < 1e-36);
    }

    #[test]
    fn outside_disk_is_rejected() {
        let s = geometric();
        assert!(matches!(eval_shifted(&s, 1, 1, &q(3, 2), 128), Err(Error::OutsideDisk { .. })));
    }

    #[test]
    fn radius_of_sqrt_and_apery() {
        let op = parse_operator("(z^2-6*z+1)*D + (z-3)").unwrap();
        let s = CoefficientStream::new(GFunctionSpec::new("sqrt", op, vec![Rational::from(1)]).unwrap());
        let r = s.radius().unwrap().radius.to_f64();
        assert!((r - (3.0 - 2.0 * 2f64.sqrt())).abs() < 1e-14);
        let op = parse_operator(
            "z^2*(1-34*z+z^2)*D^3 + z*(3-153*z+6*z^2)*D^2 + (1-112*z+7*z^2)*D + (z-5)",
        )
        .unwrap();
        let s = CoefficientStream::new(
            GFunctionSpec::new("apery", op, vec![Rational::from(1), Rational::from(5)]).unwrap(),
        );
        let r = s.radius().unwrap().radius.to_f64();
        assert!((r - (17.0 - 12.0 * 2f64.sqrt())).abs() < 1e-14);
        assert_eq!(s.get(2).unwrap(), Rational::from(73));
    }
}
