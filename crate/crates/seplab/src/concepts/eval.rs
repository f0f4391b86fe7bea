//! Pure evaluators for every concept and hypothesis family.

use crate::error::{Error, Result};
use crate::instances::{PrimeGroup, RsaPublic, RsaSecret};
use crate::numtheory::{mod_pow, Natural};

use super::BitString;

fn ensure_unit(x: &Natural, modulus: &Natural) -> Result<()> {
    if x.is_zero() || x >= modulus || !x.gcd(modulus).is_one() {
        return Err(Error::domain(format!("{x} is not a unit mod {modulus}")));
    }
    Ok(())
}

/// True iff `log` lies in the wrap-around window `[i, i + (p-3)/2]` taken
/// modulo `p-1` on the exponent range `{1, ..., p-1}`.
///
/// `p` must be an odd prime and `i`, `log` exponents in range. Every window
/// covers exactly `(p-1)/2` exponents.
pub fn dlp_window_contains(p: &Natural, i: &Natural, log: &Natural) -> bool {
    let pm1 = p - &Natural::one();
    let half_span = (p - &Natural::from(3u64)) / &Natural::from(2u64);
    let offset = (log + &pm1 - i) % &pm1;
    offset <= half_span
}

/// Label of `x` under the exponent-window concept starting at `i`.
///
/// `dlog` supplies `log_a x` in `{1, ..., p-1}`; pass a secret-side table or
/// a capability-oracle call, whichever the caller is entitled to.
pub fn dlp_concept_eval(
    group: &PrimeGroup,
    i: &Natural,
    x: &Natural,
    dlog: impl FnOnce(&Natural) -> Result<Natural>,
) -> Result<u8> {
    if i.is_zero() || i >= &group.p {
        return Err(Error::domain(format!("window start {i} outside 1..{}", group.p)));
    }
    if x.is_zero() || x >= &group.p {
        return Err(Error::domain(format!("{x} is not in the unit group mod {}", group.p)));
    }
    let log = dlog(x)?;
    Ok(u8::from(dlp_window_contains(&group.p, i, &log)))
}

/// Bit `i` of the cube root of `x`, 1-indexed from the least significant bit.
pub fn dcr_concept_eval(secret: &RsaSecret, i: u32, x: &Natural) -> Result<u8> {
    let d = secret
        .d_star
        .as_ref()
        .ok_or_else(|| Error::domain("instance has no trapdoor exponent: 3 divides phi"))?;
    let n_modulus = &secret.p * &secret.q;
    trapdoor_bit_eval(&n_modulus, d, i, x)
}

/// `bin(x^d mod N, i)` with `i` 1-indexed from the least significant bit.
pub fn trapdoor_bit_eval(n_modulus: &Natural, d: &Natural, i: u32, x: &Natural) -> Result<u8> {
    let width = n_modulus.bits() as u32;
    if i == 0 || i > width {
        return Err(Error::domain(format!("bit index {i} outside 1..={width}")));
    }
    ensure_unit(x, n_modulus)?;
    let y = mod_pow(x, d, n_modulus)?;
    Ok(u8::from(y.bit(u64::from(i) - 1)))
}

/// `x^d mod N`. Labels are ring elements, not bits.
pub fn modexp_concept_eval(public: &RsaPublic, d: &Natural, x: &Natural) -> Result<Natural> {
    ensure_unit(x, &public.modulus)?;
    mod_pow(x, d, &public.modulus)
}

/// Bit of `m^3 mod N` addressed by the leading coordinates of `x`.
pub fn dcri_concept_eval(public: &RsaPublic, m: &Natural, x: &BitString) -> Result<u8> {
    ensure_unit(m, &public.modulus)?;
    let cube = mod_pow(m, &Natural::from(3u64), &public.modulus)?;
    dcri_cube_bit(&cube, public.n, x)
}

/// Bit `k` of a fixed ring element, where `k` is the integer value of the
/// first `log2(n)` coordinates of `x` and bit 0 is least significant. The
/// remaining coordinates of `x` are ignored by construction.
pub fn dcri_cube_bit(cube: &Natural, n: u32, x: &BitString) -> Result<u8> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::domain(format!("input length {n} is not a power of two")));
    }
    if x.len() != n as usize {
        return Err(Error::domain(format!("expected {n} coordinates, got {}", x.len())));
    }
    let k = x.prefix_int(n.trailing_zeros());
    Ok(u8::from(cube.bit(k)))
}

/// `alpha * cos(theta - beta) + gamma`.
pub fn pqc_cosine_eval(alpha: f64, beta: f64, gamma: f64, theta: f64) -> f64 {
    alpha * (theta - beta).cos() + gamma
}

/// Inclusive interval membership on ring elements, wrapping when `lo > hi`;
/// members map to `inside`, everything else to its complement.
pub fn interval_on_x_eval(lo: &Natural, hi: &Natural, inside: u8, x: &Natural) -> u8 {
    let member = if lo <= hi { lo <= x && x <= hi } else { x >= lo || x <= hi };
    if member {
        inside
    } else {
        1 - inside
    }
}

/// 1 iff `bias + sum of weights over set bits of x` is nonnegative. Weight
/// `j` multiplies bit `j`, least significant first.
pub fn linear_threshold_eval(weights: &[f64], bias: f64, x: &Natural) -> u8 {
    let mut acc = bias;
    for (j, w) in weights.iter().enumerate() {
        if x.bit(j as u64) {
            acc += w;
        }
    }
    u8::from(acc >= 0.0)
}

/// Memorized-table lookup. `entries` must be sorted by key; `key` is the
/// canonical encoding of the input.
pub fn lookup_table_eval(entries: &[(String, u8)], default: u8, key: &str) -> u8 {
    match entries.binary_search_by(|(k, _)| k.as_str().cmp(key)) {
        Ok(idx) => entries[idx].1,
        Err(_) => default,
    }
}
