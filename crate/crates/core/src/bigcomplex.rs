//! Arbitrary-precision complex numbers as a pair of MPFR floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::{Assign, Float, Rational};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn zero(prec: u32) -> Self {
        BigComplex {
            re: Float::new(prec),
            im: Float::new(prec),
        }
    }

    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        BigComplex {
            re,
            im: Float::new(prec),
        }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_rational(prec: u32, q: &Rational) -> Self {
        Self::from_real(Float::with_val(prec, q))
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex {
            re: Float::with_val(prec, &self.re),
            im: Float::with_val(prec, &self.im),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let mut n = Float::with_val(self.prec(), self.re.square_ref());
        n += Float::with_val(self.prec(), self.im.square_ref());
        n
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> Self {
        let prec = self.prec();
        let n = self.norm_sqr();
        BigComplex {
            re: Float::with_val(prec, &self.re / &n),
            im: Float::with_val(prec, -Float::with_val(prec, &self.im / &n)),
        }
    }

    pub fn powu(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_real(Float::with_val(self.prec(), 1));
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let prec = self.prec();
        BigComplex {
            re: Float::with_val(prec, self.abs().ln_ref()),
            im: self.arg(),
        }
    }

    pub fn exp(&self) -> Self {
        let prec = self.prec();
        let m = Float::with_val(prec, self.re.exp_ref());
        let mut s = Float::new(prec);
        let mut c = Float::new(prec);
        (&mut s, &mut c).assign(self.im.sin_cos_ref());
        BigComplex {
            re: Float::with_val(prec, &m * &c),
            im: Float::with_val(prec, &m * &s),
        }
    }

    pub fn scale_f(&self, f: &Float) -> Self {
        let prec = self.prec();
        BigComplex {
            re: Float::with_val(prec, &self.re * f),
            im: Float::with_val(prec, &self.im * f),
        }
    }

    pub fn add_real(&self, x: &Float) -> Self {
        BigComplex {
            re: Float::with_val(self.prec(), &self.re + x),
            im: self.im.clone(),
        }
    }

    pub fn real_minus(x: &Float, z: &Self) -> Self {
        let prec = z.prec();
        BigComplex {
            re: Float::with_val(prec, x - &z.re),
            im: Float::with_val(prec, -&z.im),
        }
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    /// Decimal rendering with `digits` significant digits per component.
    pub fn to_string_digits(&self, digits: usize) -> String {
        if self.im.is_zero() {
            self.re.to_string_radix(10, Some(digits))
        } else {
            format!(
                "{} + {}i",
                self.re.to_string_radix(10, Some(digits)),
                self.im.to_string_radix(10, Some(digits))
            )
        }
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_digits(30))
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let prec = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re + &o.re),
            im: Float::with_val(prec, &self.im + &o.im),
        }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let prec = self.prec().max(o.prec());
        BigComplex {
            re: Float::with_val(prec, &self.re - &o.re),
            im: Float::with_val(prec, &self.im - &o.im),
        }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let prec = self.prec().max(o.prec());
        let ac = Float::with_val(prec, &self.re * &o.re);
        let bd = Float::with_val(prec, &self.im * &o.im);
        let ad = Float::with_val(prec, &self.re * &o.im);
        let bc = Float::with_val(prec, &self.im * &o.re);
        BigComplex {
            re: ac - bd,
            im: ad + bc,
        }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        self * &o.recip()
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: Float::with_val(self.re.prec(), -&self.re),
            im: Float::with_val(self.im.prec(), -&self.im),
        }
    }
}

/// Serialized form of a high-precision value: decimal strings plus the bit count.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct ComplexDoc {
    pub re: String,
    pub im: String,
    pub bits: u32,
}

impl From<&BigComplex> for ComplexDoc {
    fn from(z: &BigComplex) -> Self {
        let digits = ((z.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        ComplexDoc {
            re: z.re.to_string_radix(10, Some(digits)),
            im: z.im.to_string_radix(10, Some(digits)),
            bits: z.prec(),
        }
    }
}
