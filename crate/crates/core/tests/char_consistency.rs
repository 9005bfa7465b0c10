//! Consistency of the arithmetic walk statistics: prefix recomputation
//! from scratch, census partitioning, and the bridge between the measured
//! variance and the exact walk-model prediction.

use charwalk_core::char_walk::{
    block_pattern_census, char_walk_distribution, StatisticKind,
};
use charwalk_core::finite_field::{legendre_symbol_residue, FpPolynomial, PrimeModulus};
use charwalk_core::walk_model::{occupation_variance_exact, WalkKind};

/// Prefix value at k recomputed by fresh summation, no running state.
fn signed_prefix_from_scratch(poly: &FpPolynomial, k: u64) -> i64 {
    let modulus = poly.modulus();
    let p = modulus.value();
    (1..=k)
        .map(|n| i64::from(legendre_symbol_residue(poly.eval(n % p), modulus)))
        .sum()
}

#[test]
fn prefix_scan_matches_recomputation_exhaustively() {
    // exhaustive over k for a mid-size prime
    let modulus = PrimeModulus::new(997).unwrap();
    let poly = FpPolynomial::new(modulus, vec![1, 0, 1]).unwrap();
    let p = modulus.value();
    let m = 5u64;
    let mut running: i64 = 0;
    let mut counts = vec![0u64; m as usize];
    for k in 1..=p {
        running += i64::from(legendre_symbol_residue(poly.eval(k % p), modulus));
        assert_eq!(running, signed_prefix_from_scratch(&poly, k), "k={k}");
        counts[running.rem_euclid(m as i64) as usize] += 1;
    }
    let dist = char_walk_distribution(&poly, m, StatisticKind::SignedSum).unwrap();
    assert_eq!(dist.counts, counts);
}

#[test]
fn prefix_scan_matches_recomputation_at_sampled_points() {
    let modulus = PrimeModulus::new(10007).unwrap();
    let poly = FpPolynomial::x(modulus);
    let p = modulus.value();
    // 100 deterministic sample points
    let samples: Vec<u64> = (1..=100u64).map(|i| (i * 99991) % p + 1).collect();
    let mut running: i64 = 0;
    let mut at_sample = std::collections::HashMap::new();
    for k in 1..=p {
        running += i64::from(legendre_symbol_residue(poly.eval(k % p), modulus));
        at_sample.insert(k, running);
    }
    for &k in &samples {
        assert_eq!(
            at_sample[&k],
            signed_prefix_from_scratch(&poly, k),
            "k={k}"
        );
    }
}

#[test]
fn census_partition_is_exact() {
    for &p in &[10007u64, 100003] {
        let modulus = PrimeModulus::new(p).unwrap();
        let poly = FpPolynomial::x(modulus);
        for block_len in [2u32, 3, 4, 7] {
            let census = block_pattern_census(&poly, block_len).unwrap();
            let tallied: u64 = census.counts.iter().sum();
            assert_eq!(
                tallied + census.excluded_blocks,
                p / block_len as u64,
                "p={p} L={block_len}"
            );
            assert_eq!(census.blocks_total, p / block_len as u64);
        }
    }
}

#[test]
fn census_matches_direct_block_walk() {
    // independent recomputation of the census for a small prime
    let p = 499u64;
    let modulus = PrimeModulus::new(p).unwrap();
    let poly = FpPolynomial::new(modulus, vec![3, 1, 1]).unwrap();
    assert!(poly.is_squarefree().unwrap());
    let block_len = 3u32;
    let census = block_pattern_census(&poly, block_len).unwrap();
    let mut expected = vec![0u64; 1 << block_len];
    let mut excluded = 0u64;
    'block: for s in 0..p / block_len as u64 {
        let mut idx = 0usize;
        for j in 1..=block_len as u64 {
            match legendre_symbol_residue(poly.eval((s * block_len as u64 + j) % p), modulus) {
                1 => idx |= 1 << (j - 1),
                -1 => {}
                _ => {
                    excluded += 1;
                    continue 'block;
                }
            }
        }
        expected[idx] += 1;
    }
    assert_eq!(census.counts, expected);
    assert_eq!(census.excluded_blocks, excluded);
}

#[test]
fn measured_variance_dominated_by_walk_model_prediction() {
    // The block-decomposition argument bounds the measured variance by the
    // model variance at block length ⌊log p/log 4⌋. The bound is one-sided:
    // the completion step discards cross-block cancellation, so the real
    // walk sits far below it.
    let p = 100003u64;
    let m = 3u64;
    let modulus = PrimeModulus::new(p).unwrap();
    let poly = FpPolynomial::x(modulus);
    let dist = char_walk_distribution(&poly, m, StatisticKind::SignedSum).unwrap();
    let measured = dist.variance_from_uniform();
    let block_len = ((p as f64).ln() / 4f64.ln()).floor() as u64;
    let model = occupation_variance_exact(WalkKind::Rademacher, block_len, m).unwrap();
    assert!(measured > 0.0);
    assert!(
        measured <= 10.0 * model,
        "measured {measured} exceeds 10x model prediction {model}"
    );
}

#[test]
fn counting_statistics_partition_prefixes() {
    // R(k) + N(k) + zeros(k) = k for every prefix; check the final tallies
    // through the distributions' totals.
    let p = 997u64;
    let modulus = PrimeModulus::new(p).unwrap();
    let poly = FpPolynomial::x(modulus);
    for m in [2u64, 3, 5] {
        for stat in [
            StatisticKind::SignedSum,
            StatisticKind::ResidueCount,
            StatisticKind::NonResidueCount,
        ] {
            let dist = char_walk_distribution(&poly, m, stat).unwrap();
            assert_eq!(dist.total, p);
            assert_eq!(dist.counts.iter().sum::<u64>(), p);
        }
    }
}
