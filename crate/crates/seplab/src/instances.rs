//! Seeded generation and validation of the reference instances every
//! experiment runs against: prime groups with a certified generator, and
//! RSA-style moduli `N = p*q` with controlled 2-adic structure.
//!
//! An [`InstanceRecord`] splits cleanly into a public payload (safe to hand
//! to any learner) and a secret payload behind an access-counting box, so
//! tests can assert that a code path never touched the secret.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::{
    factor_small, is_probable_prime, mod_pow, Natural, PrimePowerFactorization,
    DEFAULT_PRIMALITY_ROUNDS,
};
use crate::rng::{rng_from_seed, uniform_below, uniform_range, uniform_unit};
use crate::SCHEMA_VERSION;

/// Rejection-sampling budget shared by all generators.
pub const CANDIDATE_BUDGET: u64 = 100_000;

/// Default acceptance thresholds for the 2-adic profile `(c, c')`,
/// matching the profile of publicly factored RSA moduli.
pub const DEFAULT_2C_THRESHOLDS: (u32, u32) = (8, 2);

/// A prime `p` with a certified generator `a` of `(Z/p)^*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeGroup {
    /// Bit length of `p`.
    pub n: u32,
    pub p: Natural,
    pub a: Natural,
    pub p_minus_1_factors: PrimePowerFactorization,
}

impl PrimeGroup {
    /// Re-check every invariant: primality, bit length, factorization of
    /// `p - 1`, and the generator certificate
    /// `a^((p-1)/q) != 1` for every prime `q | p - 1`.
    pub fn validate(&self) -> Result<()> {
        if !is_probable_prime(&self.p, DEFAULT_PRIMALITY_ROUNDS)? {
            return Err(Error::integrity(format!("p = {} is not prime", self.p)));
        }
        if self.p.bits() != self.n as u64 {
            return Err(Error::integrity(format!(
                "p has {} bits, record claims {}",
                self.p.bits(),
                self.n
            )));
        }
        let p_minus_1 = &self.p - &Natural::one();
        if self.p_minus_1_factors.value() != p_minus_1 {
            return Err(Error::integrity("p_minus_1_factors does not recompose p - 1"));
        }
        if self.a <= Natural::one() || self.a >= self.p {
            return Err(Error::integrity(format!("a = {} is out of range", self.a)));
        }
        for (q, _) in self.p_minus_1_factors.factors() {
            let e = &p_minus_1 / q;
            if mod_pow(&self.a, &e, &self.p)?.is_one() {
                return Err(Error::integrity(format!(
                    "a = {} fails the generator certificate at prime {q}",
                    self.a
                )));
            }
        }
        Ok(())
    }
}

/// Public half of an RSA-style instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsaPublic {
    /// Bit length of the modulus.
    pub n: u32,
    #[serde(rename = "N")]
    pub modulus: Natural,
}

/// Secret half of an RSA-style instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsaSecret {
    pub p: Natural,
    pub q: Natural,
    pub phi: Natural,
    pub lambda: Natural,
    /// Factorization of the odd part of `phi`.
    pub odd_part_factors: PrimePowerFactorization,
    /// 2-adic valuation of `phi`.
    pub c: u32,
    /// 2-adic valuation of `gcd(p - 1, q - 1)`.
    pub c_prime: u32,
    /// Cube-root exponent: `3 * d_star = 1 (mod phi)`. Present exactly
    /// when `gcd(3, phi) = 1`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_star: Option<Natural>,
}

impl RsaSecret {
    /// Derive the full secret payload from two distinct primes.
    pub fn from_primes(p: Natural, q: Natural) -> Result<Self> {
        if p == q {
            return Err(Error::domain("from_primes: p and q must be distinct"));
        }
        for v in [&p, &q] {
            if !is_probable_prime(v, DEFAULT_PRIMALITY_ROUNDS)? {
                return Err(Error::domain(format!("from_primes: {v} is not prime")));
            }
        }
        let one = Natural::one();
        let p1 = &p - &one;
        let q1 = &q - &one;
        let phi = &p1 * &q1;
        let lambda = p1.lcm(&q1);
        let phi_factors = factor_small(&p1)?.merge(&factor_small(&q1)?);
        let odd_part_factors = phi_factors.odd_part();
        let c = phi.two_adic_valuation().expect("phi of odd primes is even") as u32;
        let c_prime = p1.gcd(&q1).two_adic_valuation().expect("gcd of evens is even") as u32;
        let three = Natural::from(3u64);
        let d_star = crate::numtheory::inv_mod(&three, &phi);
        Ok(RsaSecret { p, q, phi, lambda, odd_part_factors, c, c_prime, d_star })
    }

    /// Factorization of all of `phi`, including the 2-part.
    pub fn phi_factors(&self) -> PrimePowerFactorization {
        let two_part = PrimePowerFactorization::from_u64_pairs(&[(2, self.c)])
            .expect("2^c is a valid prime power");
        two_part.merge(&self.odd_part_factors)
    }
}

/// 2-adic profile of an RSA-style secret, judged against thresholds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoAdicProfile {
    pub c: u32,
    pub c_prime: u32,
    /// Whether `gcd(p - 1, q - 1)` is exactly a power of two.
    pub gcd_is_two_power: bool,
    pub c_ok: bool,
    pub c_prime_ok: bool,
}

impl TwoAdicProfile {
    pub fn passes(&self) -> bool {
        self.gcd_is_two_power && self.c_ok && self.c_prime_ok
    }
}

/// Extract `(c, c')` from a secret and judge it against `(c_max, c'_max)`
/// thresholds (defaults in [`DEFAULT_2C_THRESHOLDS`]).
pub fn validate_2c(secret: &RsaSecret, thresholds: (u32, u32)) -> TwoAdicProfile {
    let gcd = (&secret.p - &Natural::one()).gcd(&(&secret.q - &Natural::one()));
    let v2 = gcd.two_adic_valuation().unwrap_or(0) as u32;
    let gcd_is_two_power = gcd == Natural::from(2u64).pow(v2);
    TwoAdicProfile {
        c: secret.c,
        c_prime: secret.c_prime,
        gcd_is_two_power,
        c_ok: secret.c <= thresholds.0,
        c_prime_ok: secret.c_prime <= thresholds.1,
    }
}

/// Wrapper that counts every access to the value inside. Deserialization
/// and cloning start the counter at zero.
#[derive(Debug)]
pub struct SecretBox<T> {
    value: T,
    accesses: AtomicU64,
}

impl<T> SecretBox<T> {
    pub fn new(value: T) -> Self {
        SecretBox { value, accesses: AtomicU64::new(0) }
    }

    pub fn reveal(&self) -> &T {
        self.accesses.fetch_add(1, Ordering::Relaxed);
        &self.value
    }

    pub fn access_count(&self) -> u64 {
        self.accesses.load(Ordering::Relaxed)
    }
}

impl<T: Clone> Clone for SecretBox<T> {
    fn clone(&self) -> Self {
        SecretBox::new(self.value.clone())
    }
}

impl<T: Serialize> Serialize for SecretBox<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.value.serialize(s)
    }
}

impl<'de, T: Deserialize<'de>> Deserialize<'de> for SecretBox<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(SecretBox::new(T::deserialize(d)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Dlp,
    Dcr,
    Modexp2c,
    Dcri,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceKind::Dlp => "dlp",
            InstanceKind::Dcr => "dcr",
            InstanceKind::Modexp2c => "modexp2c",
            InstanceKind::Dcri => "dcri",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PublicPayload {
    Group(PrimeGroup),
    Rsa(RsaPublic),
}

/// Secret payload: the RSA trapdoor data plus, for point-recovery
/// instances, the hidden target element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecretPayload {
    #[serde(flatten)]
    pub rsa: RsaSecret,
    /// Hidden target `m` of a point-recovery instance.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub m: Option<Natural>,
}

/// One generated instance: public payload always present, secret payload
/// behind an access counter. `created_at` is optional metadata that
/// generation leaves unset so that identical `(kind, n, seed)` runs
/// produce byte-identical records.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InstanceRecord {
    pub schema_version: u32,
    pub kind: InstanceKind,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub created_at: Option<String>,
    public: PublicPayload,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    secret: Option<SecretBox<SecretPayload>>,
}

impl InstanceRecord {
    pub fn public(&self) -> &PublicPayload {
        &self.public
    }

    pub fn prime_group(&self) -> Result<&PrimeGroup> {
        match &self.public {
            PublicPayload::Group(g) => Ok(g),
            PublicPayload::Rsa(_) => Err(Error::domain("instance is not a prime-group instance")),
        }
    }

    pub fn rsa_public(&self) -> Result<&RsaPublic> {
        match &self.public {
            PublicPayload::Rsa(r) => Ok(r),
            PublicPayload::Group(_) => Err(Error::domain("instance is not an RSA-style instance")),
        }
    }

    /// Access-counted view of the secret payload.
    pub fn secret(&self) -> Result<&SecretPayload> {
        self.secret
            .as_ref()
            .map(|b| b.reveal())
            .ok_or_else(|| Error::domain("instance carries no secret payload"))
    }

    /// How many times `secret()` has been called on this record.
    pub fn secret_access_count(&self) -> u64 {
        self.secret.as_ref().map_or(0, |b| b.access_count())
    }

    /// Stable identifier used by concept and hypothesis descriptors.
    pub fn instance_id(&self) -> String {
        let n = match &self.public {
            PublicPayload::Group(g) => g.n,
            PublicPayload::Rsa(r) => r.n,
        };
        format!("{}-n{}-s{}", self.kind, n, self.seed)
    }

    /// Re-check every invariant the record claims, without consuming
    /// secret accesses observable by callers (the count is restored).
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::integrity(format!(
                "unsupported schema_version {}",
                self.schema_version
            )));
        }
        match (self.kind, &self.public) {
            (InstanceKind::Dlp, PublicPayload::Group(g)) => {
                if self.secret.is_some() {
                    return Err(Error::integrity("dlp instances carry no secret payload"));
                }
                g.validate()
            }
            (InstanceKind::Dlp, _) | (_, PublicPayload::Group(_)) => {
                Err(Error::integrity("kind does not match the public payload"))
            }
            (kind, PublicPayload::Rsa(public)) => {
                let boxed = self
                    .secret
                    .as_ref()
                    .ok_or_else(|| Error::integrity("RSA-style instance lacks its secret"))?;
                let before = boxed.access_count();
                let result = validate_rsa_record(kind, public, boxed.reveal(), self.seed);
                boxed.accesses.store(before, Ordering::Relaxed);
                result
            }
        }
    }
}

fn validate_rsa_record(
    kind: InstanceKind,
    public: &RsaPublic,
    secret: &SecretPayload,
    seed: u64,
) -> Result<()> {
    let s = &secret.rsa;
    let rebuilt = RsaSecret::from_primes(s.p.clone(), s.q.clone())?;
    if &rebuilt != s {
        return Err(Error::integrity("secret payload disagrees with its own primes"));
    }
    if public.modulus != &s.p * &s.q {
        return Err(Error::integrity("modulus is not p * q"));
    }
    if public.modulus.bits() != public.n as u64 {
        return Err(Error::integrity(format!(
            "modulus has {} bits, record claims {}",
            public.modulus.bits(),
            public.n
        )));
    }
    let half = (public.n / 2) as u64;
    if s.p.bits() != half || s.q.bits() != half {
        return Err(Error::integrity("primes do not have floor(n/2) bits"));
    }
    match kind {
        InstanceKind::Dcr | InstanceKind::Modexp2c | InstanceKind::Dcri => {
            let d_star = s
                .d_star
                .as_ref()
                .ok_or_else(|| Error::integrity("cube map instance lacks d_star"))?;
            if (&Natural::from(3u64) * d_star) % &s.phi != Natural::one() {
                return Err(Error::integrity("3 * d_star != 1 (mod phi)"));
            }
            // spot-check the cube/root round trip on derived sample points
            let mut rng = rng_from_seed(crate::rng::trial_seed(seed, 0xd57a));
            for _ in 0..32 {
                let x = uniform_unit(&public.modulus, &mut rng);
                let cube = mod_pow(&x, &Natural::from(3u64), &public.modulus)?;
                if mod_pow(&cube, d_star, &public.modulus)? != x {
                    return Err(Error::integrity("cube-root exponent fails a sampled round trip"));
                }
            }
        }
        InstanceKind::Dlp => unreachable!("handled by caller"),
    }
    if kind == InstanceKind::Modexp2c {
        let profile = validate_2c(s, DEFAULT_2C_THRESHOLDS);
        if !profile.passes() {
            return Err(Error::integrity(format!(
                "2-adic profile (c = {}, c' = {}) misses the thresholds",
                profile.c, profile.c_prime
            )));
        }
    }
    match (kind, &secret.m) {
        (InstanceKind::Dcri, None) => {
            return Err(Error::integrity("point-recovery instance lacks its target m"))
        }
        (InstanceKind::Dcri, Some(m)) => {
            if !public.n.is_power_of_two() {
                return Err(Error::integrity("point-recovery bit length must be a power of two"));
            }
            if !m.gcd(&public.modulus).is_one() || m >= &public.modulus || m.is_zero() {
                return Err(Error::integrity("target m is not a unit of the modulus"));
            }
        }
        (_, Some(_)) => return Err(Error::integrity("unexpected target m on this kind")),
        (_, None) => {}
    }
    Ok(())
}

/// Assemble a record straight from primes, skipping generation and the
/// bit-length checks. Worked-example rings such as 5 * 11 are far too
/// small for the generators but exercise every other code path.
#[cfg(test)]
pub(crate) fn build_record_for_tests(
    kind: InstanceKind,
    n: u32,
    seed: u64,
    p: Natural,
    q: Natural,
    m: Option<Natural>,
) -> InstanceRecord {
    let rsa = RsaSecret::from_primes(p, q).expect("test primes are valid");
    let public = RsaPublic { n, modulus: &rsa.p * &rsa.q };
    InstanceRecord {
        schema_version: SCHEMA_VERSION,
        kind,
        seed,
        created_at: None,
        public: PublicPayload::Rsa(public),
        secret: Some(SecretBox::new(SecretPayload { rsa, m })),
    }
}

/// Result of a generator run: the record plus how many candidates the
/// rejection sampler discarded along the way.
#[derive(Clone, Debug)]
pub struct Generated {
    pub record: InstanceRecord,
    pub rejected_candidates: u64,
}

struct Budget {
    rejected: u64,
}

impl Budget {
    fn new() -> Self {
        Budget { rejected: 0 }
    }

    fn reject(&mut self, what: &str) -> Result<()> {
        self.rejected += 1;
        if self.rejected >= CANDIDATE_BUDGET {
            return Err(Error::exhausted(format!(
                "instance generation: {CANDIDATE_BUDGET} candidates rejected while searching for {what}"
            )));
        }
        Ok(())
    }
}

fn sample_prime(bits: u32, rng: &mut ChaCha8Rng, budget: &mut Budget) -> Result<Natural> {
    assert!(bits >= 2);
    let top = Natural::from(2u64).pow(bits - 1);
    loop {
        let mut candidate = &top + &uniform_below(&top, rng);
        if candidate.is_even() {
            // stays below 2^bits: the largest even candidate is 2^bits - 2
            candidate = candidate + Natural::one();
        }
        if is_probable_prime(&candidate, DEFAULT_PRIMALITY_ROUNDS)? {
            return Ok(candidate);
        }
        budget.reject("a prime")?;
    }
}

/// Generate a prime-group instance with a certified generator.
pub fn gen_dlp_instance(n: u32, seed: u64) -> Result<Generated> {
    if !(8..=64).contains(&n) {
        return Err(Error::domain(format!("dlp bit length n = {n} must lie in [8, 64]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut budget = Budget::new();
    let p = sample_prime(n, &mut rng, &mut budget)?;
    let p_minus_1 = &p - &Natural::one();
    let p_minus_1_factors = factor_small(&p_minus_1)?;
    let a = loop {
        let candidate = uniform_range(&Natural::from(2u64), &p_minus_1, &mut rng);
        let mut ok = true;
        for (q, _) in p_minus_1_factors.factors() {
            if mod_pow(&candidate, &(&p_minus_1 / q), &p)?.is_one() {
                ok = false;
                break;
            }
        }
        if ok {
            break candidate;
        }
        budget.reject("a generator")?;
    };
    let group = PrimeGroup { n, p, a, p_minus_1_factors };
    group.validate()?;
    let record = InstanceRecord {
        schema_version: SCHEMA_VERSION,
        kind: InstanceKind::Dlp,
        seed,
        created_at: None,
        public: PublicPayload::Group(group),
        secret: None,
    };
    Ok(Generated { record, rejected_candidates: budget.rejected })
}

struct RsaConstraints {
    kind: InstanceKind,
    c_max: Option<u32>,
    with_target: bool,
}

fn gen_rsa_instance(n: u32, seed: u64, constraints: RsaConstraints) -> Result<Generated> {
    if n % 2 != 0 {
        // two floor(n/2)-bit primes cannot multiply to an odd bit length
        return Err(Error::domain(format!("modulus bit length n = {n} must be even")));
    }
    if !(12..=64).contains(&n) {
        return Err(Error::domain(format!("modulus bit length n = {n} must lie in [12, 64]")));
    }
    let mut rng = rng_from_seed(seed);
    let mut budget = Budget::new();
    let half = n / 2;
    let three = Natural::from(3u64);
    let (public, secret) = loop {
        let p = sample_prime(half, &mut rng, &mut budget)?;
        let q = sample_prime(half, &mut rng, &mut budget)?;
        if p == q {
            budget.reject("distinct primes")?;
            continue;
        }
        let modulus = &p * &q;
        if modulus.bits() != n as u64 {
            budget.reject("a full-width modulus")?;
            continue;
        }
        let secret = RsaSecret::from_primes(p, q)?;
        if !secret.phi.gcd(&three).is_one() {
            budget.reject("a modulus with gcd(3, phi) = 1")?;
            continue;
        }
        if let Some(c_max) = constraints.c_max {
            if secret.c > c_max {
                budget.reject("a bounded 2-adic valuation")?;
                continue;
            }
            let profile = validate_2c(&secret, (c_max, DEFAULT_2C_THRESHOLDS.1));
            if !profile.passes() {
                budget.reject("a clean 2-adic profile")?;
                continue;
            }
        }
        break (RsaPublic { n, modulus }, secret);
    };
    let m = if constraints.with_target {
        Some(uniform_unit(&public.modulus, &mut rng))
    } else {
        None
    };
    let record = InstanceRecord {
        schema_version: SCHEMA_VERSION,
        kind: constraints.kind,
        seed,
        created_at: None,
        public: PublicPayload::Rsa(public),
        secret: Some(SecretBox::new(SecretPayload { rsa: secret, m })),
    };
    record.validate()?;
    Ok(Generated { record, rejected_candidates: budget.rejected })
}

/// Generate an RSA-style instance where cubing is a bijection of the unit
/// group (`gcd(3, phi) = 1`).
pub fn gen_dcr_instance(n: u32, seed: u64) -> Result<Generated> {
    gen_rsa_instance(n, seed, RsaConstraints { kind: InstanceKind::Dcr, c_max: None, with_target: false })
}

/// Generate an RSA-style instance whose `phi` additionally has 2-adic
/// valuation at most `c_max` and whose `p - 1`, `q - 1` share only a
/// power-of-two factor.
pub fn gen_2c_instance(n: u32, c_max: u32, seed: u64) -> Result<Generated> {
    if c_max < 2 {
        return Err(Error::domain("c_max must be at least 2: phi of two odd primes is divisible by 4"));
    }
    gen_rsa_instance(
        n,
        seed,
        RsaConstraints { kind: InstanceKind::Modexp2c, c_max: Some(c_max), with_target: false },
    )
}

/// Generate a point-recovery instance: a cube-bijection modulus plus a
/// uniformly drawn hidden unit `m`. The bit length must be a power of two
/// in `[16, 64]`.
pub fn gen_dcri_instance(n: u32, seed: u64) -> Result<Generated> {
    if !n.is_power_of_two() || !(16..=64).contains(&n) {
        return Err(Error::domain(format!(
            "point-recovery bit length n = {n} must be a power of two in [16, 64]"
        )));
    }
    gen_rsa_instance(n, seed, RsaConstraints { kind: InstanceKind::Dcri, c_max: None, with_target: true })
}
