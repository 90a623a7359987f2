//! Polynomial roots: exact rational roots over ℚ, and numeric complex roots
//! by Aberth–Ehrlich in double precision followed by Newton polishing.

use num_complex::Complex64;
use rug::{Float, Integer, Rational};

use crate::bigcomplex::BigComplex;
use crate::poly::RationalPoly;

/// Simultaneous Aberth–Ehrlich iteration on a polynomial given lowest degree first.
/// The constant term may vanish; zero roots are then found like any other.
pub fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|x| x.norm() == 0.0) {
        c.pop();
    }
    let d = c.len().saturating_sub(1);
    if d == 0 {
        return Vec::new();
    }
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    // Cauchy-type radius from the monic coefficients.
    let rad = (0..d)
        .map(|i| monic[i].norm().powf(1.0 / (d - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(rad * 0.9, ang)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for a in monic.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / z[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Newton polishing of an approximate simple root at `prec` bits.
pub fn polish(p: &RationalPoly, start: &BigComplex, prec: u32) -> BigComplex {
    let dp = p.derivative();
    let mut z = start.with_prec(prec);
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 6));
    for _ in 0..200 {
        let f = p.eval_complex(&z);
        let g = dp.eval_complex(&z);
        if g.is_zero() {
            break;
        }
        let step = &f / &g;
        z = &z - &step;
        let scale = z.abs().max(&Float::with_val(prec, 1));
        if step.abs() <= Float::with_val(prec, &tol * &scale) {
            break;
        }
    }
    z
}

/// All complex roots of a square-free polynomial, polished to `prec` bits.
pub fn complex_roots_squarefree(p: &RationalPoly, prec: u32) -> Vec<BigComplex> {
    let c64: Vec<Complex64> = p
        .coeffs()
        .iter()
        .map(|c| Complex64::new(c.to_f64(), 0.0))
        .collect();
    aberth(&c64)
        .into_iter()
        .map(|z| polish(p, &BigComplex::from_c64(prec, z), prec))
        .collect()
}

/// Complex roots with multiplicity; multiple roots are polished on their square-free factor.
pub fn complex_roots(p: &RationalPoly, prec: u32) -> Vec<(BigComplex, usize)> {
    let mut out = Vec::new();
    for (f, mult) in p.square_free_decomposition() {
        for z in complex_roots_squarefree(&f, prec) {
            out.push((z, mult));
        }
    }
    out
}

/// Result of factoring out all rational roots.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalRoots {
    /// Distinct rational roots with multiplicity, sorted increasingly.
    pub roots: Vec<(Rational, usize)>,
    /// Remaining factors without rational roots, each with its multiplicity.
    pub unfactored: Vec<(RationalPoly, usize)>,
}

impl RationalRoots {
    /// Roots repeated according to multiplicity.
    pub fn flat(&self) -> Vec<Rational> {
        self.roots
            .iter()
            .flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m))
            .collect()
    }
}

/// Exact rational roots: every candidate comes from a numeric root and is
/// accepted only after exact evaluation.
pub fn rational_roots(p: &RationalPoly) -> RationalRoots {
    let mut roots = Vec::new();
    let mut unfactored = Vec::new();
    for (f, mult) in p.square_free_decomposition() {
        let mut rest = f.clone();
        let ints = f.primitive_integer();
        let lc = ints.last().cloned().unwrap_or_else(|| Integer::from(1));
        let prec = 128 + lc.significant_bits() + 2 * max_coeff_bits(&ints);
        for z in complex_roots_squarefree(&f, prec) {
            let im_ok = {
                let scale = z.abs().max(&Float::with_val(prec, 1));
                z.im.clone().abs() < Float::with_val(prec, &scale * Float::with_val(prec, 1e-20))
            };
            if !im_ok {
                continue;
            }
            let scaled = Float::with_val(prec, &z.re * &lc);
            let num = match scaled.round().to_integer() {
                Some(n) => n,
                None => continue,
            };
            let cand = Rational::from((num, lc.clone()));
            if f.eval(&cand) == 0 {
                rest = rest.div_rem(&RationalPoly::linear(Rational::from(-&cand))).0;
                roots.push((cand, mult));
            }
        }
        if rest.degree().unwrap_or(0) > 0 {
            unfactored.push((rest.monic(), mult));
        }
    }
    roots.sort_by(|a, b| a.0.cmp(&b.0));
    RationalRoots { roots, unfactored }
}

fn max_coeff_bits(ints: &[Integer]) -> u32 {
    ints.iter().map(|c| c.significant_bits()).max().unwrap_or(1)
}
