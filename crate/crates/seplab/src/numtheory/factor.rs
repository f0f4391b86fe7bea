use std::sync::OnceLock;

use num_bigint::BigUint;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

use super::{mod_pow, Natural, PrimePowerFactorization};

const SIEVE_BOUND: u64 = 1 << 16;
// Correct for every input below 2^64 (Sinclair / Feitsma verification).
const U64_MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const RHO_ITERATION_BUDGET: u64 = 1 << 22;

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = SIEVE_BOUND as usize;
        let mut composite = vec![false; n];
        let mut primes = Vec::new();
        for p in 2..n {
            if !composite[p] {
                primes.push(p as u32);
                let mut q = p * p;
                while q < n {
                    composite[q] = true;
                    q += p;
                }
            }
        }
        primes
    })
}

/// Primality test: exact below 2^64, witness-based above with error
/// probability at most `4^(-rounds)` per call. Deterministic for a given
/// input, so repeated calls always agree.
///
/// ```
/// use seplab::numtheory::{is_probable_prime, Natural};
///
/// assert!(is_probable_prime(&Natural::from(1009u64), 24).unwrap());
/// assert!(!is_probable_prime(&Natural::from(55u64), 24).unwrap());
/// ```
pub fn is_probable_prime(value: &Natural, rounds: u32) -> Result<bool> {
    if rounds == 0 {
        return Err(Error::domain("is_probable_prime: rounds must be at least 1"));
    }
    if let Some(v) = value.to_u64() {
        return Ok(is_prime_u64(v));
    }
    if value.is_even() {
        return Ok(false);
    }
    for &p in small_primes() {
        if (value % &Natural::from(p)).is_zero() {
            return Ok(false);
        }
    }
    Ok(miller_rabin_big(value, rounds))
}

fn is_prime_u64(v: u64) -> bool {
    if v < 2 {
        return false;
    }
    if v < SIEVE_BOUND {
        return small_primes().binary_search(&(v as u32)).is_ok();
    }
    for &p in U64_MR_BASES.iter() {
        if v == p {
            return true;
        }
        if v % p == 0 {
            return false;
        }
    }
    let d = v - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for &a in U64_MR_BASES.iter() {
        let mut x = pow_mod_u64(a % v, d, v);
        if x == 1 || x == v - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, v);
            if x == v - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u64(acc, base, m);
        }
        base = mul_mod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Witness rounds seeded from the value itself: deterministic replay with
/// honestly random witnesses.
fn miller_rabin_big(n: &Natural, rounds: u32) -> bool {
    let n_minus_1 = n - &Natural::one();
    let s = n_minus_1.two_adic_valuation().expect("odd input > 1");
    let d = Natural::from(n_minus_1.as_biguint() >> s);
    let mut seed = 0xcafe_f00d_u64;
    for i in 0..8.min(n.bits() / 8) {
        seed = seed.rotate_left(8) ^ (n.as_biguint().to_bytes_le()[i as usize] as u64);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'round: for _ in 0..rounds {
        let a = loop {
            let bits = n.bits();
            let words = bits.div_ceil(64);
            let mut bytes = Vec::with_capacity((words * 8) as usize);
            for _ in 0..words {
                bytes.extend_from_slice(&rng.gen::<u64>().to_be_bytes());
            }
            let cand = Natural::from_bytes_be(&bytes) % n;
            if cand >= Natural::from(2u64) && cand < n_minus_1 {
                break cand;
            }
        };
        let mut x = mod_pow(&a, &d, n).expect("modulus >= 2");
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

/// Factor `value` into prime powers sorted by ascending prime.
///
/// Strategy: trial division by all primes below 2^16, then deterministic
/// Brent-style cycle probing on word-sized cofactors. Values whose
/// composite cofactor exceeds 64 bits are out of scope and exhaust the
/// budget.
///
/// ```
/// use seplab::numtheory::{factor_small, Natural, PrimePowerFactorization};
///
/// let f = factor_small(&Natural::from(20u64)).unwrap();
/// assert_eq!(f, PrimePowerFactorization::from_u64_pairs(&[(2, 2), (5, 1)]).unwrap());
/// assert!(factor_small(&Natural::from(1u64)).unwrap().is_empty());
/// ```
pub fn factor_small(value: &Natural) -> Result<PrimePowerFactorization> {
    if value.is_zero() {
        return Err(Error::domain("factor_small: value must be at least 1"));
    }
    let mut pairs: Vec<(Natural, u32)> = Vec::new();
    let mut rest = value.as_biguint().clone();
    for &p in small_primes() {
        if rest.is_one() {
            break;
        }
        let pb = BigUint::from(p);
        if (&pb * &pb) > rest {
            break;
        }
        let mut k = 0u32;
        while (&rest % &pb).is_zero() {
            rest /= &pb;
            k += 1;
        }
        if k > 0 {
            pairs.push((Natural::from(p as u64), k));
        }
    }
    if !rest.is_one() {
        let rest_nat = Natural::from(rest.clone());
        if is_probable_prime(&rest_nat, super::DEFAULT_PRIMALITY_ROUNDS)? {
            push_factor(&mut pairs, rest_nat, 1);
        } else {
            let v = rest_nat.to_u64().ok_or_else(|| {
                Error::exhausted(format!("factor_small: composite cofactor {rest_nat} exceeds 64 bits"))
            })?;
            let mut stack = vec![v];
            while let Some(n) = stack.pop() {
                if is_prime_u64(n) {
                    push_factor(&mut pairs, Natural::from(n), 1);
                    continue;
                }
                let d = split_composite_u64(n)?;
                stack.push(d);
                stack.push(n / d);
            }
        }
    }
    pairs.sort_by(|a, b| a.0.cmp(&b.0));
    PrimePowerFactorization::new(pairs)
}

fn push_factor(pairs: &mut Vec<(Natural, u32)>, p: Natural, k: u32) {
    match pairs.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += k,
        None => pairs.push((p, k)),
    }
}

/// Find a nontrivial divisor of an odd composite with no factor below 2^16.
fn split_composite_u64(n: u64) -> Result<u64> {
    for c in 1..=24u64 {
        if let Some(d) = brent_rho(n, c, RHO_ITERATION_BUDGET) {
            return Ok(d);
        }
    }
    Err(Error::exhausted(format!("factor_small: cycle probing gave up on {n}")))
}

fn brent_rho(n: u64, c: u64, budget: u64) -> Option<u64> {
    let step = |x: u64| (mul_mod_u64(x, x, n) + c) % n;
    let mut y = 2u64;
    let mut spent = 0u64;
    let (mut q, mut g, mut xs, mut x) = (1u64, 1u64, 0u64, 0u64);
    let mut r = 1u64;
    const BATCH: u64 = 128;
    while g == 1 && spent < budget {
        x = y;
        for _ in 0..r {
            y = step(y);
        }
        let mut k = 0;
        while k < r && g == 1 && spent < budget {
            xs = y;
            let count = BATCH.min(r - k);
            for _ in 0..count {
                y = step(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            spent += count;
            g = gcd_u64(q, n);
            k += count;
        }
        r <<= 1;
    }
    if g == n {
        // backtrack one step at a time
        loop {
            xs = step(xs);
            g = gcd_u64(x.abs_diff(xs), n);
            if g > 1 {
                break;
            }
        }
    }
    if g > 1 && g < n {
        Some(g)
    } else {
        None
    }
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(v: u64) -> Natural {
        Natural::from(v)
    }

    #[test]
    fn primality_known_values() {
        assert!(is_probable_prime(&nat(2), 24).unwrap());
        assert!(is_probable_prime(&nat(1009), 24).unwrap());
        assert!(!is_probable_prime(&nat(55), 24).unwrap());
        assert!(!is_probable_prime(&nat(0), 24).unwrap());
        assert!(!is_probable_prime(&nat(1), 24).unwrap());
        assert!(is_probable_prime(&nat(2), 1).unwrap());
        assert!(is_probable_prime(&nat(1), 0).is_err());
    }

    #[test]
    fn primality_matches_trial_division_below_10k() {
        let naive = |v: u64| v >= 2 && (2..v).take_while(|d| d * d <= v).all(|d| v % d != 0);
        for v in 0u64..10_000 {
            assert_eq!(is_probable_prime(&nat(v), 8).unwrap(), naive(v), "v = {v}");
        }
    }

    #[test]
    fn primality_on_wide_values() {
        // 2^89 - 1 is a Mersenne prime; 2^89 + 1 = 3 * 179 * 62020897 * 18584774046020617
        let p = Natural::from(BigUint::from(1u8) << 89) - Natural::one();
        assert!(is_probable_prime(&p, 24).unwrap());
        let c = Natural::from(BigUint::from(1u8) << 89) + Natural::one();
        assert!(!is_probable_prime(&c, 24).unwrap());
    }

    #[test]
    fn factor_known_values() {
        assert!(factor_small(&nat(1)).unwrap().is_empty());
        assert_eq!(
            factor_small(&nat(40)).unwrap(),
            PrimePowerFactorization::from_u64_pairs(&[(2, 3), (5, 1)]).unwrap()
        );
        assert_eq!(
            factor_small(&nat(20)).unwrap(),
            PrimePowerFactorization::from_u64_pairs(&[(2, 2), (5, 1)]).unwrap()
        );
        assert_eq!(
            factor_small(&nat(1009)).unwrap(),
            PrimePowerFactorization::from_u64_pairs(&[(1009, 1)]).unwrap()
        );
        assert!(factor_small(&nat(0)).is_err());
    }

    #[test]
    fn factor_recomposes_for_a_range() {
        for v in 1u64..5_000 {
            let f = factor_small(&nat(v)).unwrap();
            assert_eq!(f.value(), nat(v), "v = {v}");
        }
    }

    #[test]
    fn factor_splits_wide_semiprimes() {
        // product of two primes just above 2^31
        let p = 2_147_483_659u64;
        let q = 2_147_483_693u64;
        let f = factor_small(&nat(p * q)).unwrap();
        assert_eq!(
            f,
            PrimePowerFactorization::new(vec![(nat(p), 1), (nat(q), 1)]).unwrap()
        );
    }
}
