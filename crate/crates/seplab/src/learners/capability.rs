//! Call-counted stand-in for the quantum subroutines.
//!
//! Order finding, subgroup discrete logs, and factoring are the three
//! capabilities a quantum learner is allowed to invoke. At desk scale they
//! are implemented classically from public data; the counters record what a
//! learner asked for, not what the stand-in does internally, so reports can
//! separate learner classes by their capability footprint.

use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::instances::{PrimeGroup, RsaPublic};
use crate::numtheory::{
    carmichael_lambda, discrete_log_subgroup, factor_small, multiplicative_order, Natural,
    PrimePowerFactorization,
};

/// Snapshot of capability usage.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CapabilityCalls {
    pub order: u64,
    pub dlog: u64,
    pub factor: u64,
}

impl CapabilityCalls {
    pub fn is_zero(&self) -> bool {
        *self == CapabilityCalls::default()
    }

    /// Calls made between two snapshots.
    pub fn since(&self, earlier: &CapabilityCalls) -> CapabilityCalls {
        CapabilityCalls {
            order: self.order - earlier.order,
            dlog: self.dlog - earlier.dlog,
            factor: self.factor - earlier.factor,
        }
    }
}

/// Classical implementation of the quantum subroutines over one instance.
///
/// Construction does the factoring work once, from public values only;
/// afterwards every call is cheap and thread-safe.
pub struct QuantumCapabilityOracle {
    modulus: Natural,
    modulus_factors: PrimePowerFactorization,
    exponent_factors: PrimePowerFactorization,
    order_calls: AtomicU64,
    dlog_calls: AtomicU64,
    factor_calls: AtomicU64,
}

impl QuantumCapabilityOracle {
    pub fn for_rsa(public: &RsaPublic) -> Result<Self> {
        let modulus_factors = factor_small(&public.modulus)?;
        let lambda = carmichael_lambda(&modulus_factors);
        let exponent_factors = factor_small(&lambda)?;
        Ok(QuantumCapabilityOracle {
            modulus: public.modulus.clone(),
            modulus_factors,
            exponent_factors,
            order_calls: AtomicU64::new(0),
            dlog_calls: AtomicU64::new(0),
            factor_calls: AtomicU64::new(0),
        })
    }

    pub fn for_prime_group(group: &PrimeGroup) -> Self {
        QuantumCapabilityOracle {
            modulus: group.p.clone(),
            modulus_factors: PrimePowerFactorization::new(vec![(group.p.clone(), 1)])
                .expect("a prime is its own factorization"),
            exponent_factors: group.p_minus_1_factors.clone(),
            order_calls: AtomicU64::new(0),
            dlog_calls: AtomicU64::new(0),
            factor_calls: AtomicU64::new(0),
        }
    }

    /// Multiplicative order of `x` modulo the instance modulus.
    pub fn order(&self, x: &Natural) -> Result<Natural> {
        self.order_calls.fetch_add(1, Ordering::Relaxed);
        multiplicative_order(x, &self.modulus, &self.exponent_factors)
    }

    /// Discrete log of `target` in the subgroup generated by `base`,
    /// in `{1, ..., ord(base)}`.
    pub fn dlog(&self, base: &Natural, target: &Natural) -> Result<Natural> {
        self.dlog_calls.fetch_add(1, Ordering::Relaxed);
        let base_order = multiplicative_order(base, &self.modulus, &self.exponent_factors)?;
        discrete_log_subgroup(base, target, &self.modulus, &base_order)
    }

    /// Complete factorization of the instance modulus.
    pub fn factor(&self) -> PrimePowerFactorization {
        self.factor_calls.fetch_add(1, Ordering::Relaxed);
        self.modulus_factors.clone()
    }

    pub fn calls(&self) -> CapabilityCalls {
        CapabilityCalls {
            order: self.order_calls.load(Ordering::Relaxed),
            dlog: self.dlog_calls.load(Ordering::Relaxed),
            factor: self.factor_calls.load(Ordering::Relaxed),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn public_55() -> RsaPublic {
        RsaPublic { n: 6, modulus: Natural::from(55u64) }
    }

    #[test]
    fn rsa_oracle_answers_the_worked_values() {
        let qco = QuantumCapabilityOracle::for_rsa(&public_55()).unwrap();
        assert!(qco.calls().is_zero());
        assert_eq!(qco.order(&Natural::from(2u64)).unwrap(), Natural::from(20u64));
        assert_eq!(qco.dlog(&Natural::from(2u64), &Natural::from(18u64)).unwrap(), 7u64.into());
        let factors = qco.factor();
        assert_eq!(factors.factors().len(), 2);
        assert_eq!(factors.value(), Natural::from(55u64));
        assert_eq!(qco.calls(), CapabilityCalls { order: 1, dlog: 1, factor: 1 });
    }

    #[test]
    fn prime_group_oracle_uses_the_public_factorization() {
        let group = PrimeGroup {
            n: 4,
            p: Natural::from(11u64),
            a: Natural::from(2u64),
            p_minus_1_factors: PrimePowerFactorization::from_u64_pairs(&[(2, 1), (5, 1)]).unwrap(),
        };
        let qco = QuantumCapabilityOracle::for_prime_group(&group);
        assert_eq!(qco.order(&Natural::from(2u64)).unwrap(), Natural::from(10u64));
        // log of 1 is reported as the full order
        assert_eq!(qco.dlog(&Natural::from(2u64), &Natural::one()).unwrap(), 10u64.into());
        assert_eq!(qco.calls(), CapabilityCalls { order: 1, dlog: 1, factor: 0 });
    }

    #[test]
    fn snapshots_subtract() {
        let a = CapabilityCalls { order: 5, dlog: 3, factor: 1 };
        let b = CapabilityCalls { order: 2, dlog: 3, factor: 0 };
        assert_eq!(a.since(&b), CapabilityCalls { order: 3, dlog: 0, factor: 1 });
    }
}
