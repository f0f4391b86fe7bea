//! Modular arithmetic at desk scale: powering, multiplicative orders,
//! subgroup discrete logs, congruence combination, and factoring of values
//! that fit in a machine word or two.
//!
//! Everything is deterministic: the same inputs always produce the same
//! outputs, including the factoring probes and primality witnesses.

mod factor;
mod natural;
mod ops;

pub use factor::{factor_small, is_probable_prime};
pub use natural::Natural;
pub use ops::{crt_combine, discrete_log_subgroup, mod_pow, multiplicative_order};

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default witness-round count used when validating factorizations.
pub const DEFAULT_PRIMALITY_ROUNDS: u32 = 40;

/// A multiset of prime powers, sorted by prime in ascending order.
///
/// ```
/// use seplab::numtheory::{factor_small, Natural, PrimePowerFactorization};
///
/// let f = factor_small(&Natural::from(40u64)).unwrap();
/// assert_eq!(f, PrimePowerFactorization::from_u64_pairs(&[(2, 3), (5, 1)]).unwrap());
/// assert_eq!(f.value(), Natural::from(40u64));
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimePowerFactorization {
    pairs: Vec<(Natural, u32)>,
}

impl PrimePowerFactorization {
    /// Build from `(prime, exponent)` pairs. The pairs must be sorted by
    /// strictly ascending prime, every exponent must be at least 1, and
    /// every base must pass a primality check.
    pub fn new(pairs: Vec<(Natural, u32)>) -> Result<Self> {
        for window in pairs.windows(2) {
            if window[0].0 >= window[1].0 {
                return Err(Error::domain(format!(
                    "factor bases must be strictly ascending: {} then {}",
                    window[0].0, window[1].0
                )));
            }
        }
        for (p, k) in &pairs {
            if *k == 0 {
                return Err(Error::domain(format!("zero exponent for base {p}")));
            }
            if !is_probable_prime(p, DEFAULT_PRIMALITY_ROUNDS)? {
                return Err(Error::domain(format!("factor base {p} is not prime")));
            }
        }
        Ok(PrimePowerFactorization { pairs })
    }

    pub fn from_u64_pairs(pairs: &[(u64, u32)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(p, k)| (Natural::from(p), k)).collect())
    }

    pub fn empty() -> Self {
        PrimePowerFactorization { pairs: Vec::new() }
    }

    pub fn factors(&self) -> &[(Natural, u32)] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Product of all prime powers; 1 for the empty factorization.
    pub fn value(&self) -> Natural {
        let mut acc = Natural::one();
        for (p, k) in &self.pairs {
            acc *= &p.pow(*k);
        }
        acc
    }

    /// Exponent of `prime` in the factorization, 0 when absent.
    pub fn exponent_of(&self, prime: &Natural) -> u32 {
        self.pairs
            .iter()
            .find(|(p, _)| p == prime)
            .map(|(_, k)| *k)
            .unwrap_or(0)
    }

    /// Factorization with the prime 2 removed.
    pub fn odd_part(&self) -> Self {
        let two = Natural::from(2u64);
        PrimePowerFactorization {
            pairs: self.pairs.iter().filter(|(p, _)| *p != two).cloned().collect(),
        }
    }

    /// Factorization of the product `self.value() * other.value()`.
    pub fn merge(&self, other: &Self) -> Self {
        let mut pairs = self.pairs.clone();
        for (p, k) in &other.pairs {
            match pairs.iter_mut().find(|(q, _)| q == p) {
                Some((_, e)) => *e += k,
                None => pairs.push((p.clone(), *k)),
            }
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        PrimePowerFactorization { pairs }
    }
}

/// A residue constraint `x = residue (mod modulus)` with
/// `0 <= residue < modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Congruence {
    pub residue: Natural,
    pub modulus: Natural,
}

impl Congruence {
    /// The residue is reduced into `[0, modulus)`; a zero modulus is a
    /// domain error.
    pub fn new(residue: Natural, modulus: Natural) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::domain("congruence modulus must be at least 1"));
        }
        Ok(Congruence { residue: residue % &modulus, modulus })
    }

    pub fn from_u64(residue: u64, modulus: u64) -> Result<Self> {
        Self::new(Natural::from(residue), Natural::from(modulus))
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

/// `phi(p^k)` for prime `p`.
pub fn euler_phi_prime_power(p: &Natural, k: u32) -> Natural {
    p.pow(k) - p.pow(k - 1)
}

/// Euler phi of the factored value: product over prime-power components.
pub fn euler_phi(factorization: &PrimePowerFactorization) -> Natural {
    factorization
        .factors()
        .iter()
        .fold(Natural::one(), |acc, (p, k)| &acc * &euler_phi_prime_power(p, *k))
}

/// The exponent of the unit group `(Z/n)^*` computed from the
/// factorization of `n`: lcm of the cyclic component orders.
pub fn carmichael_lambda(factorization: &PrimePowerFactorization) -> Natural {
    let two = Natural::from(2u64);
    let mut lambda = Natural::one();
    for (p, k) in factorization.factors() {
        let component = if *p == two {
            match k {
                1 => Natural::one(),
                2 => Natural::from(2u64),
                k => Natural::from(2u64).pow(k - 2),
            }
        } else {
            euler_phi_prime_power(p, *k)
        };
        lambda = lambda.lcm(&component);
    }
    lambda
}

/// Modular inverse of `a` in `(Z/m)^*`, or `None` when `gcd(a, m) != 1`.
pub fn inv_mod(a: &Natural, modulus: &Natural) -> Option<Natural> {
    if modulus.is_zero() {
        return None;
    }
    if modulus.is_one() {
        return Some(Natural::zero());
    }
    let a = BigInt::from(a.as_biguint() % modulus.as_biguint());
    let m = BigInt::from(modulus.as_biguint().clone());
    let ext = a.extended_gcd(&m);
    if !ext.gcd.is_one() {
        return None;
    }
    let mut x = ext.x % &m;
    if x.is_negative() {
        x += &m;
    }
    let unsigned: BigUint = x.to_biguint().expect("normalized to non-negative");
    Some(Natural::from(unsigned))
}
