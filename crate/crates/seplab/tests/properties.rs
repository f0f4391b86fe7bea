//! Randomized and exhaustive invariant checks for the arithmetic core:
//! orders, discrete logs, congruence combination, factoring, the two
//! bijections the oracles rely on, and sampler uniformity.

use std::collections::HashSet;

use proptest::prelude::*;

use seplab::numtheory::{
    carmichael_lambda, crt_combine, discrete_log_subgroup, factor_small, is_probable_prime,
    mod_pow, multiplicative_order, Congruence, Natural,
};
use seplab::rng::{rng_from_seed, uniform_range, uniform_unit};

fn nat(v: u64) -> Natural {
    Natural::from(v)
}

/// Order by repeated multiplication, `None` when `x` is not a unit.
fn naive_order(x: u64, modulus: u64) -> Option<u64> {
    let m = nat(modulus);
    let x = &nat(x) % &m;
    if !x.gcd(&m).is_one() {
        return None;
    }
    let mut acc = x.clone();
    let mut count = 1u64;
    while !acc.is_one() {
        acc = &(&acc * &x) % &m;
        count += 1;
        if count > modulus {
            return None;
        }
    }
    Some(count)
}

/// Smallest generator of `(Z/p)^*`, by scanning with certified orders.
fn find_generator(p: u64) -> Natural {
    let p = nat(p);
    let pm1 = &p - &Natural::one();
    let factors = factor_small(&pm1).unwrap();
    let mut a = nat(2);
    loop {
        if multiplicative_order(&a, &p, &factors).unwrap() == pm1 {
            return a;
        }
        a = &a + &Natural::one();
    }
}

proptest! {
    #[test]
    fn order_matches_naive_scan(modulus in 3u64..10_000, x in 2u64..10_000) {
        let x = x % modulus;
        prop_assume!(x > 1);
        prop_assume!(nat(x).gcd(&nat(modulus)).is_one());
        let lambda_factors = {
            let f = factor_small(&nat(modulus)).unwrap();
            factor_small(&carmichael_lambda(&f)).unwrap()
        };
        let fast = multiplicative_order(&nat(x), &nat(modulus), &lambda_factors).unwrap();
        prop_assert_eq!(fast.to_u64().unwrap(), naive_order(x, modulus).unwrap());
    }

    #[test]
    fn order_divides_group_exponent(modulus in 3u64..10_000, x in 2u64..10_000) {
        let x = x % modulus;
        prop_assume!(x > 1);
        prop_assume!(nat(x).gcd(&nat(modulus)).is_one());
        let lambda = carmichael_lambda(&factor_small(&nat(modulus)).unwrap());
        let lambda_factors = factor_small(&lambda).unwrap();
        let order = multiplicative_order(&nat(x), &nat(modulus), &lambda_factors).unwrap();
        prop_assert!((&lambda % &order).is_zero(), "{} does not divide {}", order, lambda);
    }

    #[test]
    fn fermat_little_theorem_holds(p in proptest::sample::select(
        vec![3u64, 5, 7, 11, 97, 193, 1009, 8191, 65537]), x in 1u64..100_000)
    {
        let x = x % p;
        prop_assume!(x >= 1);
        let got = mod_pow(&nat(x), &nat(p - 1), &nat(p)).unwrap();
        prop_assert!(got.is_one());
    }

    #[test]
    fn subgroup_dlog_inverts_powering(modulus in 3u64..5_000, b in 2u64..5_000, pick in any::<u64>()) {
        let b = b % modulus;
        prop_assume!(b > 1);
        prop_assume!(nat(b).gcd(&nat(modulus)).is_one());
        let lambda_factors = {
            let f = factor_small(&nat(modulus)).unwrap();
            factor_small(&carmichael_lambda(&f)).unwrap()
        };
        let order = multiplicative_order(&nat(b), &nat(modulus), &lambda_factors).unwrap();
        let ord = order.to_u64().unwrap();
        let e = 1 + pick % ord;
        let target = mod_pow(&nat(b), &nat(e), &nat(modulus)).unwrap();
        let log = discrete_log_subgroup(&nat(b), &target, &nat(modulus), &order).unwrap();
        prop_assert_eq!(log.to_u64().unwrap(), e);
    }

    #[test]
    fn crt_combines_around_a_known_solution(
        x0 in 0u64..1_000_000,
        m1 in 1u64..1_000,
        m2 in 1u64..1_000,
        m3 in 1u64..1_000,
    ) {
        let congruences = [
            Congruence::from_u64(x0 % m1, m1).unwrap(),
            Congruence::from_u64(x0 % m2, m2).unwrap(),
            Congruence::from_u64(x0 % m3, m3).unwrap(),
        ];
        let combined = crt_combine(&congruences).unwrap();
        let lcm = nat(m1).lcm(&nat(m2)).lcm(&nat(m3));
        prop_assert_eq!(&combined.modulus, &lcm);
        prop_assert_eq!(&combined.residue, &(&nat(x0) % &lcm));
    }

    #[test]
    fn factoring_recomposes_and_certifies(n in 2u64..1_048_576) {
        let f = factor_small(&nat(n)).unwrap();
        prop_assert_eq!(f.value(), nat(n));
        for (p, k) in f.factors() {
            prop_assert!(*k >= 1);
            prop_assert!(is_probable_prime(p, 40).unwrap(), "{} reported as prime factor", p);
        }
    }

    #[test]
    fn cube_map_permutes_units(
        pair in proptest::sample::subsequence(vec![5u64, 11, 17, 23, 29, 41, 47, 53], 2)
    ) {
        // Primes congruent to 2 mod 3, so cubing is invertible mod pq.
        let n = pair[0] * pair[1];
        let modulus = nat(n);
        let mut units = HashSet::new();
        let mut cubes = HashSet::new();
        for x in 1..n {
            if nat(x).gcd(&modulus).is_one() {
                units.insert(nat(x));
                cubes.insert(mod_pow(&nat(x), &nat(3), &modulus).unwrap());
            }
        }
        prop_assert_eq!(cubes, units);
    }
}

#[test]
fn inconsistent_congruences_are_rejected() {
    let system =
        [Congruence::from_u64(0, 2).unwrap(), Congruence::from_u64(1, 2).unwrap()];
    assert!(crt_combine(&system).is_err());
}

#[test]
fn power_map_permutes_nonzero_residues() {
    for p in [11u64, 193, 8191] {
        let a = find_generator(p);
        let modulus = nat(p);
        let mut seen = HashSet::new();
        let mut y = Natural::one();
        for _ in 1..p {
            seen.insert(mod_pow(&a, &y, &modulus).unwrap());
            y = &y + &Natural::one();
        }
        assert_eq!(seen.len() as u64, p - 1, "a^y misses residues mod {p}");
        assert!(!seen.contains(&Natural::zero()));
    }
}

#[test]
fn dlog_identity_convention_is_the_full_order() {
    let order = multiplicative_order(
        &nat(2),
        &nat(55),
        &factor_small(&nat(20)).unwrap(),
    )
    .unwrap();
    let log = discrete_log_subgroup(&nat(2), &Natural::one(), &nat(55), &order).unwrap();
    assert_eq!(log, order);
}

/// Every cell within 4 sigma of its expectation and the chi-square
/// statistic below the df = cells-1, alpha = 0.001 critical value.
fn check_uniform_cells(counts: &[u64], draws: u64, critical: f64) {
    let cells = counts.len() as f64;
    let expected = draws as f64 / cells;
    let sigma = (expected * (1.0 - 1.0 / cells)).sqrt();
    let mut chi2 = 0.0;
    for (i, &c) in counts.iter().enumerate() {
        let dev = (c as f64 - expected).abs();
        assert!(dev < 4.0 * sigma, "cell {i}: count {c} is {:.1} sigma off", dev / sigma);
        chi2 += (c as f64 - expected).powi(2) / expected;
    }
    assert!(chi2 < critical, "chi-square {chi2:.2} exceeds critical {critical}");
}

#[test]
fn unit_sampler_is_uniform_over_units_of_55() {
    let modulus = nat(55);
    let mut rng = rng_from_seed(0x5eed_0001);
    let units: Vec<Natural> =
        (1..55u64).map(nat).filter(|x| x.gcd(&modulus).is_one()).collect();
    assert_eq!(units.len(), 40);
    let index: std::collections::HashMap<&Natural, usize> =
        units.iter().enumerate().map(|(i, u)| (u, i)).collect();

    let draws = 100_000u64;
    let mut counts = vec![0u64; 40];
    for _ in 0..draws {
        let x = uniform_unit(&modulus, &mut rng);
        counts[index[&x]] += 1;
    }
    // df = 39
    check_uniform_cells(&counts, draws, 72.055);
}

#[test]
fn range_sampler_is_uniform_on_small_interval() {
    let mut rng = rng_from_seed(0x5eed_0002);
    let draws = 100_000u64;
    let mut counts = vec![0u64; 10];
    for _ in 0..draws {
        let x = uniform_range(&nat(1), &nat(10), &mut rng);
        counts[x.to_u64().unwrap() as usize - 1] += 1;
    }
    // df = 9
    check_uniform_cells(&counts, draws, 27.877);
}
