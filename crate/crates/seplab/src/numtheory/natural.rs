use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Rem, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision non-negative integer.
///
/// In every JSON artifact a `Natural` is rendered as canonical lowercase
/// hexadecimal: no leading zeros, `"0"` for zero. Parsing rejects anything
/// that is not already in canonical form, so serialize/deserialize
/// round-trips are byte-identical.
///
/// ```
/// use seplab::numtheory::Natural;
///
/// let n = Natural::from(55u64);
/// assert_eq!(n.to_hex(), "37");
/// assert_eq!(Natural::from_hex("37").unwrap(), n);
/// assert!(Natural::from_hex("037").is_err());
/// ```
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Natural(BigUint);

impl Natural {
    pub fn zero() -> Self {
        Natural(BigUint::zero())
    }

    pub fn one() -> Self {
        Natural(BigUint::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_even(&self) -> bool {
        self.0.is_even()
    }

    /// Number of bits in the binary representation; 0 for zero.
    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// Bit `i` of the binary representation, 0-indexed from the least
    /// significant bit.
    pub fn bit(&self, i: u64) -> bool {
        self.0.bit(i)
    }

    /// Largest `k` such that `2^k` divides `self`; `None` for zero.
    pub fn two_adic_valuation(&self) -> Option<u64> {
        self.0.trailing_zeros()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn to_f64_lossy(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    pub fn gcd(&self, other: &Natural) -> Natural {
        Natural(self.0.gcd(&other.0))
    }

    pub fn lcm(&self, other: &Natural) -> Natural {
        Natural(self.0.lcm(&other.0))
    }

    pub fn pow(&self, exp: u32) -> Natural {
        Natural(self.0.pow(exp))
    }

    pub fn from_bytes_be(bytes: &[u8]) -> Natural {
        Natural(BigUint::from_bytes_be(bytes))
    }

    /// Canonical lowercase hex: no leading zeros, `"0"` for zero.
    pub fn to_hex(&self) -> String {
        self.0.to_str_radix(16)
    }

    /// Parse canonical lowercase hex. Rejects empty strings, uppercase
    /// digits, and leading zeros.
    pub fn from_hex(s: &str) -> Result<Natural> {
        if s.is_empty() {
            return Err(Error::domain("empty hex string"));
        }
        if s.len() > 1 && s.starts_with('0') {
            return Err(Error::domain(format!("non-canonical hex {s:?}: leading zero")));
        }
        if !s.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(Error::domain(format!("non-canonical hex {s:?}")));
        }
        let v = BigUint::parse_bytes(s.as_bytes(), 16)
            .ok_or_else(|| Error::domain(format!("unparseable hex {s:?}")))?;
        Ok(Natural(v))
    }

    pub(crate) fn as_biguint(&self) -> &BigUint {
        &self.0
    }
}

impl From<BigUint> for Natural {
    fn from(v: BigUint) -> Self {
        Natural(v)
    }
}

impl From<u64> for Natural {
    fn from(v: u64) -> Self {
        Natural(BigUint::from(v))
    }
}

impl From<u32> for Natural {
    fn from(v: u32) -> Self {
        Natural(BigUint::from(v))
    }
}

impl fmt::Display for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Natural {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Natural {
            type Output = Natural;
            fn $method(self, rhs: Natural) -> Natural {
                Natural(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Natural> for Natural {
            type Output = Natural;
            fn $method(self, rhs: &Natural) -> Natural {
                Natural(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Natural> for &Natural {
            type Output = Natural;
            fn $method(self, rhs: Natural) -> Natural {
                Natural((&self.0).$method(rhs.0))
            }
        }
        impl $trait<&Natural> for &Natural {
            type Output = Natural;
            fn $method(self, rhs: &Natural) -> Natural {
                Natural((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);
forward_binop!(Rem, rem);

impl AddAssign<u64> for Natural {
    fn add_assign(&mut self, rhs: u64) {
        self.0 += rhs;
    }
}

impl MulAssign<&Natural> for Natural {
    fn mul_assign(&mut self, rhs: &Natural) {
        self.0 *= &rhs.0;
    }
}

impl Serialize for Natural {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

struct NaturalVisitor;

impl Visitor<'_> for NaturalVisitor {
    type Value = Natural;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a canonical lowercase hex string")
    }

    fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Natural, E> {
        Natural::from_hex(s).map_err(|e| E::custom(e.to_string()))
    }
}

impl<'de> Deserialize<'de> for Natural {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Natural, D::Error> {
        deserializer.deserialize_str(NaturalVisitor)
    }
}
