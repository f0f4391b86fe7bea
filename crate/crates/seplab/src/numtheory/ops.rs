use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

use super::{Congruence, Natural, PrimePowerFactorization};

/// `base^exponent mod modulus`.
///
/// A zero modulus is a domain error; modulus 1 maps everything to 0.
///
/// ```
/// use seplab::numtheory::{mod_pow, Natural};
///
/// let r = mod_pow(&Natural::from(8u64), &Natural::from(27u64), &Natural::from(55u64)).unwrap();
/// assert_eq!(r, Natural::from(2u64));
/// ```
pub fn mod_pow(base: &Natural, exponent: &Natural, modulus: &Natural) -> Result<Natural> {
    if modulus.is_zero() {
        return Err(Error::domain("mod_pow: zero modulus"));
    }
    if modulus.is_one() {
        return Ok(Natural::zero());
    }
    if let Some(m) = modulus.to_u64() {
        let b = (base % modulus).to_u64().expect("reduced below a u64 modulus");
        return Ok(Natural::from(mod_pow_u64(b, exponent, m)));
    }
    let r = base.as_biguint().modpow(exponent.as_biguint(), modulus.as_biguint());
    Ok(Natural::from(r))
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn mod_pow_u64(mut base: u64, exponent: &Natural, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    for i in 0..exponent.bits() {
        if exponent.bit(i) {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
    }
    acc
}

/// Least `r >= 1` with `x^r = 1 (mod modulus)`.
///
/// `exponent_factorization` must factor a multiple of the group exponent
/// (for example `phi` or `lambda` of the modulus); the order is found by
/// dividing primes out of that multiple.
///
/// ```
/// use seplab::numtheory::{factor_small, multiplicative_order, Natural};
///
/// let lambda_factors = factor_small(&Natural::from(20u64)).unwrap();
/// let r = multiplicative_order(&Natural::from(2u64), &Natural::from(55u64), &lambda_factors).unwrap();
/// assert_eq!(r, Natural::from(20u64));
/// ```
pub fn multiplicative_order(
    x: &Natural,
    modulus: &Natural,
    exponent_factorization: &PrimePowerFactorization,
) -> Result<Natural> {
    if modulus < &Natural::from(2u64) {
        return Err(Error::domain("multiplicative_order: modulus must be at least 2"));
    }
    let x = x % modulus;
    if !x.gcd(modulus).is_one() {
        return Err(Error::domain(format!(
            "multiplicative_order: {x} is not a unit mod {modulus}"
        )));
    }
    let multiple = exponent_factorization.value();
    if !mod_pow(&x, &multiple, modulus)?.is_one() {
        return Err(Error::integrity(format!(
            "multiplicative_order: {multiple} is not a multiple of the order of {x} mod {modulus}"
        )));
    }
    let mut order = multiple;
    for (p, k) in exponent_factorization.factors() {
        for _ in 0..*k {
            let candidate = &order / p;
            if mod_pow(&x, &candidate, modulus)?.is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(order)
}

// Meet-in-the-middle table sizes beyond this would not fit in memory.
const MAX_BABY_STEPS: u64 = 1 << 24;

/// Least positive `l <= base_order` with `base^l = target (mod modulus)`.
///
/// The identity gets the full order, never 0, so the result doubles as the
/// exponent convention for unit groups: `discrete_log_subgroup(a, 1, p, r) = r`.
/// Cost is `O(sqrt(base_order))` group operations.
///
/// ```
/// use seplab::numtheory::{discrete_log_subgroup, Natural};
///
/// let l = discrete_log_subgroup(
///     &Natural::from(2u64),
///     &Natural::from(18u64),
///     &Natural::from(55u64),
///     &Natural::from(20u64),
/// )
/// .unwrap();
/// assert_eq!(l, Natural::from(7u64));
/// ```
pub fn discrete_log_subgroup(
    base: &Natural,
    target: &Natural,
    modulus: &Natural,
    base_order: &Natural,
) -> Result<Natural> {
    if modulus < &Natural::from(2u64) {
        return Err(Error::domain("discrete_log_subgroup: modulus must be at least 2"));
    }
    if base_order.is_zero() {
        return Err(Error::domain("discrete_log_subgroup: base_order must be at least 1"));
    }
    let base = base % modulus;
    let target = target % modulus;
    if base.is_zero() || target.is_zero() {
        return Err(Error::domain("discrete_log_subgroup: arguments must be units"));
    }
    if !mod_pow(&base, base_order, modulus)?.is_one() {
        return Err(Error::integrity(format!(
            "discrete_log_subgroup: base^{base_order} != 1 mod {modulus}"
        )));
    }

    let order = base_order.clone();
    let m = isqrt_ceil(&order);
    if m > Natural::from(MAX_BABY_STEPS) {
        return Err(Error::exhausted(format!(
            "discrete_log_subgroup: order {order} needs more than {MAX_BABY_STEPS} baby steps"
        )));
    }
    let m_u64 = m.to_u64().expect("baby step count bounded");

    let found = if let Some(modulus_u64) = modulus.to_u64() {
        bsgs_u64(
            base.to_u64().expect("reduced"),
            target.to_u64().expect("reduced"),
            modulus_u64,
            &order,
            m_u64,
        )?
    } else {
        bsgs_big(&base, &target, modulus, &order, m_u64)?
    };

    match found {
        Some(l) if l.is_zero() => Ok(order),
        Some(l) => Ok(l),
        None => Err(Error::NotInSubgroup),
    }
}

fn bsgs_u64(
    base: u64,
    target: u64,
    modulus: u64,
    order: &Natural,
    m: u64,
) -> Result<Option<Natural>> {
    let mut table: HashMap<u64, u64> = HashMap::with_capacity(m as usize);
    let mut cur = 1u64 % modulus;
    for j in 0..m {
        table.entry(cur).or_insert(j);
        cur = mul_mod_u64(cur, base, modulus);
    }
    // giant stride: base^(-m), computed as base^(m * (order - 1) mod order)
    let stride_exp = (Natural::from(m) * (order - &Natural::one())) % order;
    let stride = mod_pow_u64(base, &stride_exp, modulus);
    let giant_count = order.clone().to_u64().map_or(u64::MAX, |o| o / m + 1);
    let mut cur = target;
    for i in 0..=giant_count {
        if let Some(&j) = table.get(&cur) {
            let l = Natural::from(i) * Natural::from(m) + Natural::from(j);
            if &l < order || l == *order {
                return Ok(Some(l % order));
            }
        }
        cur = mul_mod_u64(cur, stride, modulus);
    }
    Ok(None)
}

fn bsgs_big(
    base: &Natural,
    target: &Natural,
    modulus: &Natural,
    order: &Natural,
    m: u64,
) -> Result<Option<Natural>> {
    let mut table: HashMap<BigUint, u64> = HashMap::with_capacity(m as usize);
    let mut cur = Natural::one();
    for j in 0..m {
        table.entry(cur.as_biguint().clone()).or_insert(j);
        cur = (cur * base) % modulus;
    }
    let stride_exp = (Natural::from(m) * (order - &Natural::one())) % order;
    let stride = mod_pow(base, &stride_exp, modulus)?;
    let giant_count = order.to_u64().map_or(u64::MAX, |o| o / m + 1);
    let mut cur = target.clone();
    for i in 0..=giant_count {
        if let Some(&j) = table.get(cur.as_biguint()) {
            let l = Natural::from(i) * Natural::from(m) + Natural::from(j);
            if &l < order || l == *order {
                return Ok(Some(l % order));
            }
        }
        cur = (cur * &stride) % modulus;
    }
    Ok(None)
}

fn isqrt_ceil(n: &Natural) -> Natural {
    let root = Natural::from(n.as_biguint().sqrt());
    if &(&root * &root) < n {
        root + Natural::one()
    } else {
        root
    }
}

/// Combine a system of congruences into a single one. The moduli do not
/// need to be pairwise coprime; the combined modulus is their lcm.
///
/// An unsatisfiable system reports a specific offending input pair. The
/// empty system combines to the trivial constraint `0 (mod 1)`.
///
/// ```
/// use seplab::numtheory::{crt_combine, Congruence};
///
/// let combined = crt_combine(&[
///     Congruence::from_u64(2, 5).unwrap(),
///     Congruence::from_u64(7, 8).unwrap(),
/// ])
/// .unwrap();
/// assert_eq!(combined, Congruence::from_u64(7, 40).unwrap());
/// ```
pub fn crt_combine(congruences: &[Congruence]) -> Result<Congruence> {
    let mut acc = Congruence::new(Natural::zero(), Natural::one())?;
    for (i, c) in congruences.iter().enumerate() {
        match merge_pair(&acc, c) {
            Some(next) => acc = next,
            None => {
                let (a, b) = find_offending_pair(&congruences[..=i])
                    .unwrap_or_else(|| (acc.clone(), c.clone()));
                return Err(Error::Inconsistent { a, b });
            }
        }
    }
    Ok(acc)
}

/// Solve `x = a.residue (mod a.modulus)` and `x = b.residue (mod b.modulus)`
/// simultaneously, or `None` when the pair conflicts.
fn merge_pair(a: &Congruence, b: &Congruence) -> Option<Congruence> {
    let m1 = BigInt::from(a.modulus.as_biguint().clone());
    let m2 = BigInt::from(b.modulus.as_biguint().clone());
    let r1 = BigInt::from(a.residue.as_biguint().clone());
    let r2 = BigInt::from(b.residue.as_biguint().clone());

    let ext = m1.extended_gcd(&m2);
    let g = &ext.gcd;
    let diff = &r2 - &r1;
    if !(&diff % g).is_zero() {
        return None;
    }
    let lcm: BigInt = (&m1 / g) * &m2;
    // x = r1 + m1 * (diff / g) * x_coeff  (mod lcm), where
    // m1 * x_coeff = g (mod m2).
    let mut x = (&r1 + (&m1 * ((&diff / g) * &ext.x))) % &lcm;
    if x.is_negative() {
        x += &lcm;
    }
    let residue = Natural::from(x.to_biguint().expect("normalized"));
    let modulus = Natural::from(lcm.to_biguint().expect("lcm of positives"));
    Some(Congruence { residue, modulus })
}

/// A system with non-coprime moduli is solvable iff it is pairwise
/// solvable, so any failed merge is witnessed by some input pair.
fn find_offending_pair(congruences: &[Congruence]) -> Option<(Congruence, Congruence)> {
    for i in 0..congruences.len() {
        for j in (i + 1)..congruences.len() {
            let (a, b) = (&congruences[i], &congruences[j]);
            let g = a.modulus.gcd(&b.modulus);
            if (&a.residue % &g) != (&b.residue % &g) {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}
