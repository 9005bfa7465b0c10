//! Fixed-length symbol walks indexed by the prime modulus: for each prime
//! p up to a limit, the walk Σ_{j≤k} χ_p(q_j) over the first k primes q_j,
//! binned mod m and compared against the exact walk-model law. Includes the
//! segmented sieve that feeds the prime ensemble.

use crate::char_walk::ResidueDistribution;
use crate::error::{Error, Result};
use crate::finite_field::{legendre_symbol_residue, PrimeModulus};
use crate::walk_model::{step_law_exact, WalkKind};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Domain cap for the sieve.
pub const MAX_SIEVE_LIMIT: u64 = 1_000_000_000;

/// Default memory budget for the sieve output (bytes).
pub const DEFAULT_SIEVE_BUDGET_BYTES: u64 = 2 << 30;

const SEGMENT_LEN: u64 = 1 << 20;

/// All primes up to a limit, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    #[inline]
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// π(limit).
    pub fn count(&self) -> usize {
        self.primes.len()
    }

    /// The i-th prime q_i (1-indexed).
    pub fn nth_prime(&self, i: usize) -> Option<u64> {
        self.primes.get(i.checked_sub(1)?).copied()
    }
}

/// Segmented sieve of Eratosthenes with the default memory budget.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    sieve_primes_with_budget(limit, DEFAULT_SIEVE_BUDGET_BYTES)
}

/// Segmented sieve with an explicit budget for the output table.
pub fn sieve_primes_with_budget(limit: u64, budget_bytes: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::invalid("sieve needs limit >= 2"));
    }
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::invalid(format!(
            "sieve limit capped at {MAX_SIEVE_LIMIT}"
        )));
    }
    // π(x) < 1.26 x/ln x for x ≥ 17; pad for small x and the segment buffer.
    let estimated = 1.26 * limit as f64 / (limit as f64).ln().max(1.0) + 64.0;
    let estimated_bytes = estimated as u64 * 8 + SEGMENT_LEN;
    if estimated_bytes > budget_bytes {
        return Err(Error::resource(format!(
            "sieve to {limit} needs ~{estimated_bytes} bytes, budget {budget_bytes}"
        )));
    }

    let root = (limit as f64).sqrt() as u64 + 1;
    let mut base_composite = vec![false; (root + 1) as usize];
    let mut base_primes = Vec::new();
    for q in 2..=root {
        if base_composite[q as usize] {
            continue;
        }
        base_primes.push(q);
        let mut multiple = q * q;
        while multiple <= root {
            base_composite[multiple as usize] = true;
            multiple += q;
        }
    }

    let mut primes = Vec::with_capacity(estimated as usize);
    let mut segment = vec![false; SEGMENT_LEN as usize];
    let mut low = 2u64;
    while low <= limit {
        let high = (low + SEGMENT_LEN - 1).min(limit);
        let len = (high - low + 1) as usize;
        segment[..len].fill(false);
        for &q in &base_primes {
            if q * q > high {
                break;
            }
            let mut start = q * q;
            if start < low {
                start = low.div_ceil(q) * q;
            }
            let mut n = start;
            while n <= high {
                segment[(n - low) as usize] = true;
                n += q;
            }
        }
        for (offset, &composite) in segment[..len].iter().enumerate() {
            if !composite {
                primes.push(low + offset as u64);
            }
        }
        low = high + 1;
    }
    Ok(PrimeTable { limit, primes })
}

/// Distribution of the k-step prime-indexed walk mod m, alongside the
/// exact ±1 walk-model law it is expected to track.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrimeWalkResult {
    pub limit: u64,
    pub k: usize,
    pub m: u64,
    pub distribution: ResidueDistribution,
    /// Primes q_k < p ≤ limit actually used.
    pub included_prime_count: u64,
    /// Primes p ≤ q_k dropped so every symbol is ±1; always equals k.
    pub excluded_prime_count: u64,
    /// π(limit) over the full table, for reference.
    pub prime_count_to_limit: u64,
    /// Exact ±1 walk law for the same (k, m).
    pub model_law: Vec<f64>,
    /// max_a |frequency(a) − model_law[a]|.
    pub max_abs_discrepancy: f64,
    /// Advisory cap (ln ln limit)/(ln ln ln limit) when defined.
    pub k_advisory_cap: Option<f64>,
    pub within_k_advisory: Option<bool>,
}

fn included_slice<'a>(table: &'a PrimeTable, k: usize) -> Result<(&'a [u64], u64)> {
    if k < 1 {
        return Err(Error::invalid("walk length k must be >= 1"));
    }
    let q_k = table
        .nth_prime(k)
        .ok_or_else(|| Error::invalid(format!("table holds fewer than {k} primes")))?;
    if q_k >= table.limit() {
        return Err(Error::invalid(format!(
            "q_{k} = {q_k} must be below the limit {}",
            table.limit()
        )));
    }
    let included = &table.primes()[k..];
    if included.is_empty() {
        return Err(Error::invalid("no primes in (q_k, limit]"));
    }
    Ok((included, q_k))
}

/// Walk length advisory cap (ln ln N)/(ln ln ln N); `None` when the
/// iterated logarithms are not all positive.
fn k_advisory_cap(limit: u64) -> Option<f64> {
    let l2 = (limit as f64).ln().ln();
    if l2 <= 0.0 {
        return None;
    }
    let l3 = l2.ln();
    if l3 <= 0.0 {
        return None;
    }
    Some(l2 / l3)
}

/// Bins S_k(p) = Σ_{j≤k} χ_p(q_j) mod m over the primes q_k < p ≤ limit.
///
/// Primes up to q_k are excluded so no symbol vanishes; the exclusion is
/// reported (it removes exactly k primes from the π(limit) ensemble).
pub fn prime_walk_distribution(table: &PrimeTable, k: usize, m: u64) -> Result<PrimeWalkResult> {
    if m < 2 {
        return Err(Error::invalid("modulus m must be >= 2"));
    }
    let (included, _) = included_slice(table, k)?;
    let steps = &table.primes()[..k];
    let counts = included
        .par_chunks(4096)
        .map(|chunk| {
            let mut local = vec![0u64; m as usize];
            for &p in chunk {
                let modulus = PrimeModulus::new(p).expect("sieve output is prime");
                let mut sum: i64 = 0;
                for &q in steps {
                    sum += i64::from(legendre_symbol_residue(q % p, modulus));
                }
                local[sum.rem_euclid(m as i64) as usize] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; m as usize],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x += y;
                }
                a
            },
        );
    let included_prime_count = included.len() as u64;
    let distribution = ResidueDistribution {
        m,
        counts,
        total: included_prime_count,
    };
    let model_law = step_law_exact(WalkKind::Rademacher, k as u64, m)?.probabilities;
    let max_abs_discrepancy = (0..m as usize)
        .map(|a| (distribution.frequency(a) - model_law[a]).abs())
        .fold(0.0, f64::max);
    let cap = k_advisory_cap(table.limit());
    Ok(PrimeWalkResult {
        limit: table.limit(),
        k,
        m,
        distribution,
        included_prime_count,
        excluded_prime_count: k as u64,
        prime_count_to_limit: table.count() as u64,
        model_law,
        max_abs_discrepancy,
        k_advisory_cap: cap,
        within_k_advisory: cap.map(|c| k as f64 <= c),
    })
}

/// Counts of every length-k symbol vector over the included primes.
///
/// Patterns are encoded as k-bit integers, bit j−1 set iff χ_p(q_j) = +1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeSignCensus {
    pub limit: u64,
    pub k: usize,
    pub counts: Vec<u64>,
    pub included_prime_count: u64,
}

impl PrimeSignCensus {
    pub fn fraction(&self, pattern: usize) -> f64 {
        self.counts[pattern] as f64 / self.included_prime_count as f64
    }
}

/// One pass over the included primes tallying all 2^k symbol vectors.
pub fn sign_pattern_census(table: &PrimeTable, k: usize) -> Result<PrimeSignCensus> {
    if k > 20 {
        return Err(Error::invalid("pattern length capped at 20"));
    }
    let (included, _) = included_slice(table, k)?;
    let steps = &table.primes()[..k];
    let counts = included
        .par_chunks(4096)
        .map(|chunk| {
            let mut local = vec![0u64; 1 << k];
            for &p in chunk {
                let modulus = PrimeModulus::new(p).expect("sieve output is prime");
                let mut pattern = 0usize;
                for (j, &q) in steps.iter().enumerate() {
                    if legendre_symbol_residue(q % p, modulus) == 1 {
                        pattern |= 1 << j;
                    }
                }
                local[pattern] += 1;
            }
            local
        })
        .reduce(
            || vec![0u64; 1 << k],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x += y;
                }
                a
            },
        );
    Ok(PrimeSignCensus {
        limit: table.limit(),
        k,
        counts,
        included_prime_count: included.len() as u64,
    })
}

/// Fraction of included primes whose symbol vector (χ_p(q_1),…,χ_p(q_k))
/// equals `signs`; entries must be ±1.
pub fn sign_pattern_fraction(table: &PrimeTable, signs: &[i8]) -> Result<f64> {
    let k = signs.len();
    if k == 0 || k > 20 {
        return Err(Error::invalid("pattern length must lie in [1, 20]"));
    }
    if signs.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::invalid("pattern entries must be +1 or -1"));
    }
    let (included, _) = included_slice(table, k)?;
    let steps = &table.primes()[..k];
    let matches: u64 = included
        .par_chunks(4096)
        .map(|chunk| {
            let mut hits = 0u64;
            'prime: for &p in chunk {
                let modulus = PrimeModulus::new(p).expect("sieve output is prime");
                for (&q, &want) in steps.iter().zip(signs.iter()) {
                    if legendre_symbol_residue(q % p, modulus) != want {
                        continue 'prime;
                    }
                }
                hits += 1;
            }
            hits
        })
        .sum();
    Ok(matches as f64 / included.len() as f64)
}
