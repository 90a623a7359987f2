//! Dense univariate polynomials over the rationals.
//!
//! Coefficients are stored lowest degree first with trailing zeros removed,
//! so the zero polynomial is the empty vector and `degree()` returns `None`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bigcomplex::BigComplex;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RationalPoly {
    coeffs: Vec<Rational>,
}

impl RationalPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        RationalPoly { coeffs }
    }

    pub fn zero() -> Self {
        RationalPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Self::monomial(Rational::from(1), 1)
    }

    pub fn monomial(c: Rational, degree: usize) -> Self {
        let mut v = vec![Rational::new(); degree];
        v.push(c);
        Self::new(v)
    }

    /// `X + a`.
    pub fn linear(a: Rational) -> Self {
        Self::new(vec![a, Rational::from(1)])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    /// Coefficient of `X^i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&Rational::from(x))
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = Float::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, x: &BigComplex) -> BigComplex {
        let prec = x.prec();
        let mut acc = BigComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &acc * x;
            acc.re += c;
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if *c == 0 {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    /// Multiply by `X^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut v = vec![Rational::new(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    /// `p(a·X + b)` by Horner in the polynomial ring.
    pub fn compose_linear(&self, a: &Rational, b: &Rational) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * &lin) + &Self::constant(c.clone());
        }
        acc
    }

    /// `p(X + c)`.
    pub fn translate(&self, c: &Rational) -> Self {
        self.compose_linear(&Rational::from(1), c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| Rational::from(c * i as u64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead = d.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = Rational::from(&rem[i + dd] / &lead);
            if c != 0 {
                for (k, dk) in d.coeffs.iter().enumerate() {
                    rem[i + k] -= Rational::from(&c * dk);
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> Integer {
        self.coeffs
            .iter()
            .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer-coefficient multiple with content 1 and positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<Integer> {
        if self.is_zero() {
            return Vec::new();
        }
        let den = self.denominator_lcm();
        let mut ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&den / c.denom()))
            .collect();
        let g = ints.iter().fold(Integer::new(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().cmp0() == std::cmp::Ordering::Less {
            -1
        } else {
            1
        };
        for c in ints.iter_mut() {
            *c /= &g;
            *c *= sign;
        }
        ints
    }

    /// Yun's square-free decomposition: returns `(f_i, i)` with `p = c·∏ f_i^i`.
    pub fn square_free_decomposition(&self) -> Vec<(Self, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let mut c = fp.div_rem(&a0).0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    pub fn max_abs_coeff(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| Rational::from(c.abs_ref()))
            .max()
            .unwrap_or_default()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings<S: AsRef<str>>(items: &[S]) -> Result<Self, String> {
        items
            .iter()
            .map(|s| parse_rational(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

/// Parse `"a"`, `"-a/b"` or a decimal-free rational literal.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let t = s.trim();
    let r: Rational = t
        .parse()
        .map_err(|_| format!("not a rational number: {t:?}"))?;
    Ok(r)
}

impl fmt::Display for RationalPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if *c == 0 {
                continue;
            }
            let neg = c.cmp0() == std::cmp::Ordering::Less;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mono = match i {
                0 => String::new(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            };
            if i == 0 {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{mag}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for RationalPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Self::from_strings(&v).map_err(serde::de::Error::custom)
    }
}

impl Add for &RationalPoly {
    type Output = RationalPoly;
    fn add(self, o: &RationalPoly) -> RationalPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        RationalPoly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), o.coeffs.get(i)) {
                    (Some(a), Some(b)) => Rational::from(a + b),
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub for &RationalPoly {
    type Output = RationalPoly;
    fn sub(self, o: &RationalPoly) -> RationalPoly {
        self + &(-o)
    }
}

impl Neg for &RationalPoly {
    type Output = RationalPoly;
    fn neg(self) -> RationalPoly {
        RationalPoly {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl Mul for &RationalPoly {
    type Output = RationalPoly;
    fn mul(self, o: &RationalPoly) -> RationalPoly {
        if self.is_zero() || o.is_zero() {
            return RationalPoly::zero();
        }
        let mut v = vec![Rational::new(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += Rational::from(a * b);
            }
        }
        RationalPoly::new(v)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalPoly {
            type Output = RationalPoly;
            fn $m(self, o: RationalPoly) -> RationalPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Falling factorial `X(X-1)…(X-j+1)`.
pub fn falling_factorial(j: usize) -> RationalPoly {
    (0..j).fold(RationalPoly::one(), |acc, i| {
        &acc * &RationalPoly::linear(Rational::from(-(i as i64)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(a: i64, b: i64) -> Rational {
        Rational::from((a, b))
    }

    #[test]
    fn trailing_zeros_are_stripped() {
        let p = RationalPoly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(RationalPoly::from_ints(&[0, 0]).is_zero());
        assert_eq!(RationalPoly::zero().degree(), None);
    }

    #[test]
    fn reflection_of_indicial_polynomial() {
        // Q(X) = X - 1 composed with -X + 2 gives 1 - X.
        let p = RationalPoly::from_ints(&[-1, 1]);
        let r = p.compose_linear(&Rational::from(-1), &Rational::from(2));
        assert_eq!(r, RationalPoly::from_ints(&[1, -1]));
    }

    #[test]
    fn falling_factorial_three() {
        assert_eq!(falling_factorial(3), RationalPoly::from_ints(&[0, 2, -3, 1]));
    }

    #[test]
    fn square_free_of_cube_times_linear() {
        // (X-1)^3 (X+2)
        let p = &RationalPoly::from_ints(&[-1, 1]).pow(3) * &RationalPoly::from_ints(&[2, 1]);
        let sf = p.square_free_decomposition();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (RationalPoly::from_ints(&[2, 1]), 1));
        assert_eq!(sf[1], (RationalPoly::from_ints(&[-1, 1]), 3));
    }

    #[test]
    fn display_and_strings() {
        let p = RationalPoly::new(vec![q(1, 2), q(-3, 1), Rational::from(1)]);
        assert_eq!(p.to_string(), "X^2 - 3*X + 1/2");
        let back = RationalPoly::from_strings(&p.to_strings()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn primitive_integer_form() {
        let p = RationalPoly::new(vec![q(-1, 2), q(-3, 4)]);
        let ints = p.primitive_integer();
        assert_eq!(ints, vec![Integer::from(2), Integer::from(3)]);
    }

    fn small_poly() -> impl Strategy<Value = RationalPoly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..6)
            .prop_map(|v| RationalPoly::new(v.into_iter().map(|(a, b)| q(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (qq, r) = a.div_rem(&b);
            prop_assert_eq!(&(&qq * &b) + &r, a);
            prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
        }

        #[test]
        fn eval_is_ring_homomorphism(a in small_poly(), b in small_poly(), x in -7i64..7) {
            let x = Rational::from(x);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }

        #[test]
        fn translate_round_trip(a in small_poly(), c in -5i64..5) {
            let c = Rational::from(c);
            let back = a.translate(&c).translate(&Rational::from(-&c));
            prop_assert_eq!(back, a);
        }
    }
}
