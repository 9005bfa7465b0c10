//! Deliberately naive reference implementations used to cross-check the
//! fast paths. Nothing here shares code with what it verifies: the step-law
//! oracles know nothing of the character expansion, and the prime oracles
//! know nothing of the segmented sieve.

use crate::error::{Error, Result};
use crate::walk_model::WalkKind;

/// k-step law by full 2^k enumeration of step sequences.
///
/// Counts are exact integers divided once by 2^k, so every entry is an
/// exact dyadic rational in f64 for k ≤ 24.
pub fn step_law_enumerated(kind: WalkKind, k: u64, m: u64) -> Result<Vec<f64>> {
    if m < 2 || k < 1 || k > 24 {
        return Err(Error::invalid("enumerated law needs m >= 2, 1 <= k <= 24"));
    }
    let mut counts = vec![0u64; m as usize];
    for walk in 0u64..(1u64 << k) {
        let mut residue = 0u64;
        for j in 0..k {
            let bit = (walk >> j) & 1;
            residue = match kind {
                WalkKind::Rademacher => {
                    if bit == 1 {
                        (residue + 1) % m
                    } else {
                        (residue + m - 1) % m
                    }
                }
                WalkKind::Bernoulli01 => (residue + bit) % m,
            };
        }
        counts[residue as usize] += 1;
    }
    let denom = 2f64.powi(k as i32);
    Ok(counts.iter().map(|&c| c as f64 / denom).collect())
}

/// k-step law by dynamic-programming convolution of the step law over
/// ℤ/mℤ; O(k·m) and structurally independent of the character expansion.
pub fn step_law_convolution(kind: WalkKind, k: u64, m: u64) -> Result<Vec<f64>> {
    if m < 2 || k < 1 {
        return Err(Error::invalid("convolved law needs m >= 2, k >= 1"));
    }
    let mm = m as usize;
    let mut law = vec![0.0f64; mm];
    law[0] = 1.0;
    let mut next = vec![0.0f64; mm];
    for _ in 0..k {
        next.fill(0.0);
        for a in 0..mm {
            let w = law[a] * 0.5;
            if w == 0.0 {
                continue;
            }
            match kind {
                WalkKind::Rademacher => {
                    next[(a + 1) % mm] += w;
                    next[(a + mm - 1) % mm] += w;
                }
                WalkKind::Bernoulli01 => {
                    next[a] += w;
                    next[(a + 1) % mm] += w;
                }
            }
        }
        std::mem::swap(&mut law, &mut next);
    }
    Ok(law)
}

/// All primes ≤ n by trial division.
pub fn primes_by_trial_division(n: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    'outer: for q in 2..=n {
        let mut d = 2;
        while d * d <= q {
            if q % d == 0 {
                continue 'outer;
            }
            d += 1;
        }
        primes.push(q);
    }
    primes
}

/// Classic one-shot Eratosthenes bitmap, independent of the segmented
/// implementation. Intended for cross-checks up to ~10^7.
pub fn primes_by_flat_sieve(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for q in 2..=n {
        if composite[q] {
            continue;
        }
        primes.push(q as u64);
        let mut multiple = q * q;
        while multiple <= n {
            composite[multiple] = true;
            multiple += q;
        }
    }
    primes
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerated_and_convolved_laws_agree() {
        for kind in [WalkKind::Rademacher, WalkKind::Bernoulli01] {
            for m in 2..=7u64 {
                for k in 1..=12u64 {
                    let a = step_law_enumerated(kind, k, m).unwrap();
                    let b = step_law_convolution(kind, k, m).unwrap();
                    for i in 0..m as usize {
                        assert!((a[i] - b[i]).abs() < 1e-13, "{kind:?} k={k} m={m} a={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn prime_oracles_agree() {
        assert_eq!(primes_by_trial_division(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_by_trial_division(1), Vec::<u64>::new());
        assert_eq!(
            primes_by_trial_division(1000),
            primes_by_flat_sieve(1000)
        );
        assert_eq!(primes_by_flat_sieve(100).len(), 25);
    }
}
