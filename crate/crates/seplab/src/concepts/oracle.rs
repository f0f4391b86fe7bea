//! Seeded example streams for every concept family.
//!
//! Each oracle owns its generator and counts draws. Labels are produced
//! from the sampled witness, never by inverting the underlying problem: the
//! discrete-log stream samples the exponent and publishes the group element,
//! the cube-root streams sample the root and publish the cube.

use rand::RngCore;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::instances::{PrimeGroup, RsaPublic};
use crate::numtheory::{mod_pow, Natural};
use crate::rng::{rng_from_seed, uniform_range, uniform_unit};

use super::eval::{dcri_cube_bit, dlp_window_contains, pqc_cosine_eval};
use super::{check_cosine_params, BitString, LabeledExample};

/// Seeded i.i.d. stream of labeled examples for one fixed concept.
pub trait ExampleOracle {
    type X;
    type Y;

    /// Next labeled draw.
    fn draw(&mut self) -> LabeledExample<Self::X, Self::Y>;

    /// Total draws so far.
    fn queries(&self) -> u64;
}

/// Draws `y` uniform over exponents and emits `(a^y mod p, window label)`.
pub struct DlpOracle {
    p: Natural,
    a: Natural,
    i: Natural,
    rng: ChaCha8Rng,
    queries: u64,
}

impl DlpOracle {
    pub fn new(group: &PrimeGroup, i: &Natural, seed: u64) -> Result<Self> {
        if group.p < Natural::from(3u64) {
            return Err(Error::domain("group modulus must be an odd prime"));
        }
        if i.is_zero() || i >= &group.p {
            return Err(Error::domain(format!("window start {i} outside 1..{}", group.p)));
        }
        Ok(DlpOracle {
            p: group.p.clone(),
            a: group.a.clone(),
            i: i.clone(),
            rng: rng_from_seed(seed),
            queries: 0,
        })
    }
}

impl ExampleOracle for DlpOracle {
    type X = Natural;
    type Y = u8;

    fn draw(&mut self) -> LabeledExample<Natural, u8> {
        let pm1 = &self.p - &Natural::one();
        let y = uniform_range(&Natural::one(), &pm1, &mut self.rng);
        self.queries += 1;
        let x = mod_pow(&self.a, &y, &self.p).expect("modulus checked at construction");
        LabeledExample { x, y: u8::from(dlp_window_contains(&self.p, &self.i, &y)) }
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// Draws a unit `y` and emits `(y^3 mod N, bit i of y)`.
pub struct DcrOracle {
    modulus: Natural,
    i: u32,
    rng: ChaCha8Rng,
    queries: u64,
}

impl DcrOracle {
    pub fn new(public: &RsaPublic, i: u32, seed: u64) -> Result<Self> {
        if i == 0 || i > public.n {
            return Err(Error::domain(format!("bit index {i} outside 1..={}", public.n)));
        }
        Ok(DcrOracle { modulus: public.modulus.clone(), i, rng: rng_from_seed(seed), queries: 0 })
    }
}

impl ExampleOracle for DcrOracle {
    type X = Natural;
    type Y = u8;

    fn draw(&mut self) -> LabeledExample<Natural, u8> {
        let y = uniform_unit(&self.modulus, &mut self.rng);
        self.queries += 1;
        let x = mod_pow(&y, &Natural::from(3u64), &self.modulus).expect("nonzero modulus");
        LabeledExample { x, y: u8::from(y.bit(u64::from(self.i) - 1)) }
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// Draws a unit `x` and emits `(x, x^d mod N)`.
pub struct ModExpOracle {
    modulus: Natural,
    d: Natural,
    rng: ChaCha8Rng,
    queries: u64,
}

impl ModExpOracle {
    pub fn new(public: &RsaPublic, d: &Natural, seed: u64) -> Result<Self> {
        if d.is_zero() {
            return Err(Error::domain("exponent must be positive"));
        }
        Ok(ModExpOracle {
            modulus: public.modulus.clone(),
            d: d.clone(),
            rng: rng_from_seed(seed),
            queries: 0,
        })
    }
}

impl ExampleOracle for ModExpOracle {
    type X = Natural;
    type Y = Natural;

    fn draw(&mut self) -> LabeledExample<Natural, Natural> {
        let x = uniform_unit(&self.modulus, &mut self.rng);
        self.queries += 1;
        let y = mod_pow(&x, &self.d, &self.modulus).expect("nonzero modulus");
        LabeledExample { x, y }
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// Draws a unit `y` and emits `(y^3 mod N, y)`: cube paired with its root.
pub struct CubeRootOracle {
    modulus: Natural,
    rng: ChaCha8Rng,
    queries: u64,
}

impl CubeRootOracle {
    pub fn new(public: &RsaPublic, seed: u64) -> Self {
        CubeRootOracle { modulus: public.modulus.clone(), rng: rng_from_seed(seed), queries: 0 }
    }
}

impl ExampleOracle for CubeRootOracle {
    type X = Natural;
    type Y = Natural;

    fn draw(&mut self) -> LabeledExample<Natural, Natural> {
        let y = uniform_unit(&self.modulus, &mut self.rng);
        self.queries += 1;
        let x = mod_pow(&y, &Natural::from(3u64), &self.modulus).expect("nonzero modulus");
        LabeledExample { x, y }
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// Draws uniform bit vectors and labels them with bits of a fixed cube.
///
/// Built either from the secret `m` or directly from a challenge cube; the
/// stream is identical because only `m^3 mod N` enters the labels.
pub struct DcriOracle {
    cube: Natural,
    n: u32,
    rng: ChaCha8Rng,
    queries: u64,
}

impl DcriOracle {
    pub fn from_secret(public: &RsaPublic, m: &Natural, seed: u64) -> Result<Self> {
        if m.is_zero() || m >= &public.modulus || !m.gcd(&public.modulus).is_one() {
            return Err(Error::domain(format!("{m} is not a unit mod {}", public.modulus)));
        }
        let cube = mod_pow(m, &Natural::from(3u64), &public.modulus)?;
        DcriOracle::from_cube(public, cube, seed)
    }

    pub fn from_cube(public: &RsaPublic, cube: Natural, seed: u64) -> Result<Self> {
        if public.n == 0 || !public.n.is_power_of_two() {
            return Err(Error::domain(format!("input length {} is not a power of two", public.n)));
        }
        if cube.is_zero() || cube >= public.modulus || !cube.gcd(&public.modulus).is_one() {
            return Err(Error::domain(format!("{cube} is not a unit mod {}", public.modulus)));
        }
        Ok(DcriOracle { cube, n: public.n, rng: rng_from_seed(seed), queries: 0 })
    }
}

impl ExampleOracle for DcriOracle {
    type X = BitString;
    type Y = u8;

    fn draw(&mut self) -> LabeledExample<BitString, u8> {
        let x = BitString::random(self.n as usize, &mut self.rng);
        self.queries += 1;
        let y = dcri_cube_bit(&self.cube, self.n, &x).expect("shape checked at construction");
        LabeledExample { x, y }
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

/// Draws angles uniform on `[0, 2pi)` and labels with the cosine curve.
pub struct CosineOracle {
    alpha: f64,
    beta: f64,
    gamma: f64,
    rng: ChaCha8Rng,
    queries: u64,
}

impl CosineOracle {
    pub fn new(alpha: f64, beta: f64, gamma: f64, seed: u64) -> Result<Self> {
        check_cosine_params(alpha, beta, gamma)?;
        Ok(CosineOracle { alpha, beta, gamma, rng: rng_from_seed(seed), queries: 0 })
    }
}

impl ExampleOracle for CosineOracle {
    type X = f64;
    type Y = f64;

    fn draw(&mut self) -> LabeledExample<f64, f64> {
        let theta = uniform_angle(&mut self.rng);
        self.queries += 1;
        LabeledExample { x: theta, y: pqc_cosine_eval(self.alpha, self.beta, self.gamma, theta) }
    }

    fn queries(&self) -> u64 {
        self.queries
    }
}

// 53 uniform mantissa bits scaled into [0, 2pi)
fn uniform_angle(rng: &mut impl RngCore) -> f64 {
    let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
    u * std::f64::consts::TAU
}
