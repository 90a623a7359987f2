//! Serde adapters that write big integers and rationals as decimal strings.

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub mod integer {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
        let t = String::deserialize(d)?;
        t.parse().map_err(serde::de::Error::custom)
    }
}

pub mod rational {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        v.to_string().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let t = String::deserialize(d)?;
        crate::poly::parse_rational(&t).map_err(serde::de::Error::custom)
    }
}

pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| crate::poly::parse_rational(t).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod rational_table {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Rational>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Rational>>, D::Error> {
        Vec::<Vec<String>>::deserialize(d)?
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| crate::poly::parse_rational(t).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

pub mod rational_mult {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[(Rational, usize)], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|(x, m)| (x.to_string(), *m))
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Vec<(Rational, usize)>, D::Error> {
        Vec::<(String, usize)>::deserialize(d)?
            .iter()
            .map(|(t, m)| {
                crate::poly::parse_rational(t)
                    .map(|x| (x, *m))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

pub mod integer_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|t| t.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// A `Float` as a decimal string with as many digits as its precision carries.
pub mod float {
    use super::*;
    use rug::Float;

    pub fn serialize<S: Serializer>(v: &Float, s: S) -> Result<S::Ok, S::Error> {
        let digits = ((v.prec() as f64) * std::f64::consts::LOG10_2).ceil() as usize;
        v.to_string_radix(10, Some(digits)).serialize(s)
    }
}

pub mod complex_approx {
    use super::*;
    use crate::series::{ComplexApprox, ComplexApproxDoc};

    pub fn serialize<S: Serializer>(v: &ComplexApprox, s: S) -> Result<S::Ok, S::Error> {
        ComplexApproxDoc::from(v).serialize(s)
    }
}

pub mod integer_table {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Integer>], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

pub mod complex {
    use super::*;
    use crate::bigcomplex::{BigComplex, ComplexDoc};

    pub fn serialize<S: Serializer>(v: &BigComplex, s: S) -> Result<S::Ok, S::Error> {
        ComplexDoc::from(v).serialize(s)
    }
}
