//! Seed derivation and uniform sampling.
//!
//! All experiment randomness flows through `ChaCha8Rng` streams created
//! here. Per-trial seeds come from a splittable counter scheme so trials
//! can run in parallel yet replay individually.

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::numtheory::Natural;

/// Derive the seed for trial `index` from a master seed (SplitMix64 of
/// `master + golden-ratio stride * index`).
pub fn trial_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform draw from `[0, bound)` by masked rejection, independent of any
/// library sampling internals.
pub fn uniform_below(bound: &Natural, rng: &mut impl RngCore) -> Natural {
    assert!(!bound.is_zero(), "uniform_below: bound must be positive");
    let bits = bound.bits();
    if bits <= 64 {
        let b = bound.to_u64().expect("bounded");
        let mask = u64::MAX >> (64 - bits);
        loop {
            let v = rng.next_u64() & mask;
            if v < b {
                return Natural::from(v);
            }
        }
    }
    let words = bits.div_ceil(64);
    let top_mask = match bits % 64 {
        0 => u64::MAX,
        r => u64::MAX >> (64 - r),
    };
    loop {
        let mut bytes = Vec::with_capacity((words * 8) as usize);
        for i in 0..words {
            let mut w = rng.next_u64();
            if i == 0 {
                w &= top_mask;
            }
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        let v = Natural::from_bytes_be(&bytes);
        if &v < bound {
            return v;
        }
    }
}

/// Uniform draw from the inclusive range `[lo, hi]`.
pub fn uniform_range(lo: &Natural, hi: &Natural, rng: &mut impl RngCore) -> Natural {
    assert!(lo <= hi, "uniform_range: empty range");
    let width = hi - lo + Natural::one();
    lo + &uniform_below(&width, rng)
}

/// Uniform element of the unit group `(Z/modulus)^*`.
pub fn uniform_unit(modulus: &Natural, rng: &mut impl RngCore) -> Natural {
    assert!(modulus >= &Natural::from(2u64), "uniform_unit: modulus must be at least 2");
    loop {
        let x = uniform_range(&Natural::one(), &(modulus - &Natural::one()), rng);
        if x.gcd(modulus).is_one() {
            return x;
        }
    }
}
