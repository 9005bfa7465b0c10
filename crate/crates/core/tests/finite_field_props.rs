//! Property checks for symbol evaluation and the polynomial square tests,
//! driven against brute-force constructions.

use charwalk_core::finite_field::{
    is_prime_u64, legendre_symbol, legendre_symbol_euler, FpPolynomial, PrimeModulus,
};
use proptest::prelude::*;

const TEST_PRIMES: [u64; 12] = [3, 5, 7, 11, 13, 17, 31, 97, 101, 997, 10007, 4611686018427387847];

#[test]
fn largest_test_prime_is_admissible() {
    // 2^62 − 57 is prime and just under the modulus cap.
    assert!(is_prime_u64(4611686018427387847));
    assert!(PrimeModulus::new(4611686018427387847).is_ok());
}

proptest! {
    #[test]
    fn prop_symbol_is_multiplicative(
        prime_idx in 0usize..TEST_PRIMES.len(),
        a in -100_000i64..100_000,
        b in -100_000i64..100_000,
    ) {
        let m = PrimeModulus::new(TEST_PRIMES[prime_idx]).unwrap();
        let lhs = legendre_symbol(a.wrapping_mul(b), m);
        let rhs = legendre_symbol(a, m) * legendre_symbol(b, m);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn prop_fast_symbol_matches_euler(
        prime_idx in 0usize..TEST_PRIMES.len(),
        n in any::<i64>(),
    ) {
        let m = PrimeModulus::new(TEST_PRIMES[prime_idx]).unwrap();
        prop_assert_eq!(legendre_symbol(n, m), legendre_symbol_euler(n, m));
    }

    #[test]
    fn prop_square_of_polynomial_is_perfect_square(
        // primes >= 31 keep deg G² + 1 below the modulus for deg G <= 5
        prime_idx in 6usize..10,
        coeffs in proptest::collection::vec(0u64..1000, 1..=6),
    ) {
        let m = PrimeModulus::new(TEST_PRIMES[prime_idx]).unwrap();
        let g = FpPolynomial::new(m, coeffs).unwrap();
        prop_assume!(!g.is_zero());
        let square = g.mul(&g).unwrap();
        prop_assert!(square.is_perfect_square().unwrap());
    }

    #[test]
    fn prop_square_times_simple_root_is_not(
        prime_idx in 6usize..10,
        coeffs in proptest::collection::vec(0u64..1000, 1..=6),
        c in 0u64..1000,
    ) {
        let m = PrimeModulus::new(TEST_PRIMES[prime_idx]).unwrap();
        let g = FpPolynomial::new(m, coeffs).unwrap();
        prop_assume!(!g.is_zero());
        let square = g.mul(&g).unwrap();
        let c = c % m.value();
        // X + c has root −c; it must not already divide G²
        let root = m.value() - c % m.value();
        prop_assume!(square.eval(root % m.value()) != 0);
        let shifted = square.mul(&FpPolynomial::new(m, vec![c, 1]).unwrap()).unwrap();
        prop_assert!(!shifted.is_perfect_square().unwrap());
    }
}

/// Square-freeness of split polynomials equals pairwise distinctness of
/// their roots; both sides computed independently of the gcd route.
#[test]
fn squarefree_matches_root_distinctness_for_split_polynomials() {
    for &p in &[5u64, 7, 11, 31, 97] {
        let m = PrimeModulus::new(p).unwrap();
        let mut scenario = 0u64;
        for degree in 2..=4usize {
            for _ in 0..40 {
                // deterministic pseudo-random roots
                scenario = scenario.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let roots: Vec<u64> = (0..degree)
                    .map(|i| (scenario >> (8 * i)) % p)
                    .collect();
                let mut poly = FpPolynomial::new(m, vec![1]).unwrap();
                for &r in &roots {
                    let factor = FpPolynomial::from_signed(m, &[-(r as i64), 1]).unwrap();
                    poly = poly.mul(&factor).unwrap();
                }
                let mut sorted = roots.clone();
                sorted.sort_unstable();
                sorted.dedup();
                let distinct = sorted.len() == roots.len();
                assert_eq!(
                    poly.is_squarefree().unwrap(),
                    distinct,
                    "p={p} roots={roots:?}"
                );
            }
        }
    }
}

/// Exhaustive cross-check of the decomposition against naive squaring for
/// quartics over a small field: H of degree 4 is a perfect square iff some
/// c·(X² + bX + a)² matches it coefficient-by-coefficient.
#[test]
fn perfect_square_matches_naive_squaring_for_quartics() {
    let p = 13u64;
    let m = PrimeModulus::new(p).unwrap();
    let mut squares = std::collections::HashSet::new();
    for a in 0..p {
        for b in 0..p {
            for c in 1..p {
                let g = FpPolynomial::new(m, vec![a, b, 1]).unwrap();
                let cc = FpPolynomial::new(m, vec![c]).unwrap();
                // c²·G² covers every leading coefficient that is a square
                let h = g.mul(&g).unwrap().mul(&cc).unwrap().mul(&cc).unwrap();
                squares.insert(h.coefficients().to_vec());
            }
        }
    }
    let mut seed = 0xABCDEFu64;
    let mut checked_true = 0u32;
    for _ in 0..4000 {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let coeffs: Vec<u64> = (0..5).map(|i| (seed >> (12 * i)) % p).collect();
        let h = match FpPolynomial::new(m, coeffs) {
            Ok(h) if h.degree() == Some(4) => h,
            _ => continue,
        };
        let expected = squares.contains(h.coefficients());
        assert_eq!(h.is_perfect_square().unwrap(), expected, "H = {h}");
        if expected {
            checked_true += 1;
        }
    }
    // the sample must actually exercise both outcomes
    assert!(checked_true > 0);
}
