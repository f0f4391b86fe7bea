//! Concept families, hypothesis descriptions, and seeded example oracles.
//!
//! A concept is a hidden labeling function over a number-theoretic domain; a
//! hypothesis is whatever a learner hands back. Both serialize as tagged JSON
//! so stored experiment records stay self-describing. Example oracles stream
//! i.i.d. labeled draws and are built so that labeling never requires the
//! hard direction of the underlying problem: discrete-log streams label
//! sampled exponents, cube-root streams label sampled preimages.

mod eval;
mod oracle;

pub use eval::{
    dcr_concept_eval, dcri_concept_eval, dcri_cube_bit, dlp_concept_eval, dlp_window_contains,
    interval_on_x_eval, linear_threshold_eval, lookup_table_eval, modexp_concept_eval,
    pqc_cosine_eval, trapdoor_bit_eval,
};
pub use oracle::{
    CosineOracle, CubeRootOracle, DcrOracle, DcriOracle, DlpOracle, ExampleOracle, ModExpOracle,
};

use std::fmt;
use std::str::FromStr;

use rand::RngCore;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instances::{PrimeGroup, RsaPublic};
use crate::numtheory::Natural;

/// Fixed-length bit vector; index 0 is the first, most significant
/// coordinate, so integer prefixes read left to right.
///
/// Serializes as a string of `0`/`1` characters.
///
/// ```
/// let x: seplab::concepts::BitString = "0011".parse().unwrap();
/// assert_eq!(x.prefix_int(4), 3);
/// assert_eq!(x.to_string(), "0011");
/// ```
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitString(Vec<bool>);

impl BitString {
    pub fn new(bits: Vec<bool>) -> Self {
        BitString(bits)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Integer value of the first `count` coordinates, most significant
    /// first. `count` must not exceed the length or 63.
    pub fn prefix_int(&self, count: u32) -> u64 {
        assert!(count as usize <= self.0.len() && count < 64);
        self.0[..count as usize]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | u64::from(b))
    }

    /// Uniform draw over all strings of the given length.
    pub fn random(len: usize, rng: &mut impl RngCore) -> Self {
        BitString((0..len).map(|_| rng.next_u32() & 1 == 1).collect())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::domain(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitString)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// One draw from an example oracle: an input and its label.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledExample<X, Y> {
    pub x: X,
    pub y: Y,
}

/// Description of a target function, tagged by family.
///
/// Constructors validate the family-specific parameter against the instance
/// it refers to; deserialized specs are trusted to have been built that way.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConceptSpec {
    /// Indicator of the wrap-around exponent window starting at `i`.
    DlpInterval { instance_ref: String, i: Natural },
    /// Bit `i` of the cube root, 1-indexed from the least significant bit.
    DcrBit { instance_ref: String, i: u32 },
    /// Ring-valued power map `x -> x^d mod N`.
    Modexp { instance_ref: String, d: Natural },
    /// Bit of `m^3 mod N` addressed by the input's leading coordinates.
    Dcri { instance_ref: String, m: Natural },
    /// Shifted, scaled cosine on angles.
    PqcCosine { instance_ref: String, alpha: f64, beta: f64, gamma: f64 },
}

impl ConceptSpec {
    pub fn dlp_interval(group: &PrimeGroup, i: Natural, instance_ref: impl Into<String>) -> Result<Self> {
        if i.is_zero() || i >= group.p {
            return Err(Error::domain(format!("window start {i} outside 1..{}", group.p)));
        }
        Ok(ConceptSpec::DlpInterval { instance_ref: instance_ref.into(), i })
    }

    pub fn dcr_bit(public: &RsaPublic, i: u32, instance_ref: impl Into<String>) -> Result<Self> {
        if i == 0 || i > public.n {
            return Err(Error::domain(format!("bit index {i} outside 1..={}", public.n)));
        }
        Ok(ConceptSpec::DcrBit { instance_ref: instance_ref.into(), i })
    }

    /// `phi` is needed only to check invertibility of the exponent.
    pub fn modexp(phi: &Natural, d: Natural, instance_ref: impl Into<String>) -> Result<Self> {
        if d.is_zero() || &d >= phi || !d.gcd(phi).is_one() {
            return Err(Error::domain(format!("exponent {d} is not a unit exponent below {phi}")));
        }
        Ok(ConceptSpec::Modexp { instance_ref: instance_ref.into(), d })
    }

    pub fn dcri(public: &RsaPublic, m: Natural, instance_ref: impl Into<String>) -> Result<Self> {
        if m.is_zero() || m >= public.modulus || !m.gcd(&public.modulus).is_one() {
            return Err(Error::domain(format!("{m} is not a unit mod {}", public.modulus)));
        }
        Ok(ConceptSpec::Dcri { instance_ref: instance_ref.into(), m })
    }

    pub fn pqc_cosine(
        alpha: f64,
        beta: f64,
        gamma: f64,
        instance_ref: impl Into<String>,
    ) -> Result<Self> {
        check_cosine_params(alpha, beta, gamma)?;
        Ok(ConceptSpec::PqcCosine { instance_ref: instance_ref.into(), alpha, beta, gamma })
    }

    pub fn instance_ref(&self) -> &str {
        match self {
            ConceptSpec::DlpInterval { instance_ref, .. }
            | ConceptSpec::DcrBit { instance_ref, .. }
            | ConceptSpec::Modexp { instance_ref, .. }
            | ConceptSpec::Dcri { instance_ref, .. }
            | ConceptSpec::PqcCosine { instance_ref, .. } => instance_ref,
        }
    }
}

/// Learner output. The first five families mirror [`ConceptSpec`]; the rest
/// are restricted families used by classical baselines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum HypothesisSpec {
    DlpInterval { i: Natural },
    /// `bin(x^d mod N, i)`: explicit trapdoor exponent plus bit position.
    TrapdoorBit { d: Natural, i: u32 },
    Modexp { d: Natural },
    Dcri { m: Natural },
    PqcCosine { alpha: f64, beta: f64, gamma: f64 },
    /// Memorized inputs with a default for everything unseen. Keys are the
    /// canonical input encoding (lowercase hex for ring elements, `0`/`1`
    /// strings for bit vectors) and must be sorted.
    LookupTable { entries: Vec<(String, u8)>, default: u8 },
    Constant { bit: u8 },
    /// Ring-valued constant: every input maps to the same element.
    ConstantRing { value: Natural },
    /// Inclusive interval on ring elements, wrapping when `lo > hi`;
    /// membership maps to `inside`, everything else to its complement.
    IntervalOnX { lo: Natural, hi: Natural, inside: u8 },
    /// 1 iff the weighted sum of input bits (least significant first) plus
    /// `bias` is nonnegative.
    LinearThresholdOnBits { weights: Vec<f64>, bias: f64 },
}

impl HypothesisSpec {
    /// The hypothesis that evaluates exactly like the concept, when one is
    /// expressible without instance secrets. Cube-root bit concepts are not:
    /// their hypothesis form needs the trapdoor exponent.
    pub fn from_concept(concept: &ConceptSpec) -> Option<Self> {
        match concept {
            ConceptSpec::DlpInterval { i, .. } => {
                Some(HypothesisSpec::DlpInterval { i: i.clone() })
            }
            ConceptSpec::DcrBit { .. } => None,
            ConceptSpec::Modexp { d, .. } => Some(HypothesisSpec::Modexp { d: d.clone() }),
            ConceptSpec::Dcri { m, .. } => Some(HypothesisSpec::Dcri { m: m.clone() }),
            ConceptSpec::PqcCosine { alpha, beta, gamma, .. } => {
                Some(HypothesisSpec::PqcCosine { alpha: *alpha, beta: *beta, gamma: *gamma })
            }
        }
    }
}

pub(crate) fn check_cosine_params(alpha: f64, beta: f64, gamma: f64) -> Result<()> {
    if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
        return Err(Error::domain("cosine parameters must be finite"));
    }
    if alpha < 0.0 {
        return Err(Error::domain("cosine amplitude must be nonnegative"));
    }
    if !(0.0..std::f64::consts::TAU).contains(&beta) {
        return Err(Error::domain("cosine phase must lie in [0, 2pi)"));
    }
    Ok(())
}
