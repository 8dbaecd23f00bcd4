//! Exact rational helpers and their `{num, den}` wire form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// The integer value of `r` if it is an integer that fits in `i64`.
pub fn to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.to_integer().to_i64()
    } else {
        None
    }
}

pub fn is_nonneg_integer(r: &Rational) -> bool {
    r.is_integer() && !r.is_negative()
}

/// Renders `3`, `-1/2`, ...
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Serialize, Deserialize)]
struct Repr {
    num: i64,
    den: i64,
}

impl Repr {
    fn from_rational<E: serde::ser::Error>(r: &Rational) -> Result<Repr, E> {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(num), Some(den)) => Ok(Repr { num, den }),
            _ => Err(E::custom(format!("rational {r} exceeds 64-bit wire range"))),
        }
    }

    fn into_rational<E: serde::de::Error>(self) -> Result<Rational, E> {
        if self.den == 0 {
            return Err(E::custom("zero denominator"));
        }
        Ok(rat(self.num, self.den))
    }
}

/// `#[serde(with = "exact::serde_rational")]`
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        Repr::from_rational(r)?.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        Repr::deserialize(d)?.into_rational()
    }
}

pub mod serde_rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for r in v {
            seq.serialize_element(&Repr::from_rational::<S::Error>(r)?)?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        Vec::<Repr>::deserialize(d)?
            .into_iter()
            .map(Repr::into_rational)
            .collect()
    }
}

/// A rational wrapper that serialises as `{num, den}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exact(#[serde(with = "serde_rational")] pub Rational);

impl Exact {
    pub fn int(n: i64) -> Exact {
        Exact(int(n))
    }
}

impl std::fmt::Display for Exact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl From<Rational> for Exact {
    fn from(r: Rational) -> Exact {
        Exact(r)
    }
}

pub fn zero() -> Rational {
    Rational::zero()
}
