//! The arithmetic side: prefix sums of χ_p(F(n)) viewed as walks, their
//! residue-class distributions mod m, block sign-pattern censuses, and the
//! normalized equidistribution budget checks run across prime families.

use crate::error::{Error, Result};
use crate::finite_field::{legendre_symbol_residue, FpPolynomial, PrimeModulus};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which prefix statistic drives the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StatisticKind {
    /// Σ_{n≤k} χ_p(F(n)); zeros of F contribute step 0.
    SignedSum,
    /// #{n ≤ k : F(n) a nonzero quadratic residue}.
    ResidueCount,
    /// #{n ≤ k : F(n) a quadratic non-residue}.
    NonResidueCount,
}

impl std::fmt::Display for StatisticKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            StatisticKind::SignedSum => write!(f, "signed"),
            StatisticKind::ResidueCount => write!(f, "residue"),
            StatisticKind::NonResidueCount => write!(f, "nonresidue"),
        }
    }
}

/// Counts of prefix indices landing in each residue class mod m.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueDistribution {
    pub m: u64,
    pub counts: Vec<u64>,
    pub total: u64,
}

impl ResidueDistribution {
    pub fn frequency(&self, a: usize) -> f64 {
        self.counts[a] as f64 / self.total as f64
    }

    pub fn frequencies(&self) -> Vec<f64> {
        (0..self.counts.len()).map(|a| self.frequency(a)).collect()
    }

    /// Σ_a (frequency(a) − 1/m)².
    pub fn variance_from_uniform(&self) -> f64 {
        let u = 1.0 / self.m as f64;
        (0..self.counts.len())
            .map(|a| {
                let d = self.frequency(a) - u;
                d * d
            })
            .sum()
    }

    /// max_a |frequency(a) − 1/m|.
    pub fn max_abs_deviation_from_uniform(&self) -> f64 {
        let u = 1.0 / self.m as f64;
        (0..self.counts.len())
            .map(|a| (self.frequency(a) - u).abs())
            .fold(0.0, f64::max)
    }
}

/// Distribution of the running statistic mod m over prefixes k = 1..p.
///
/// Single sequential pass (each prefix extends the previous one). Zeros of
/// F step the signed sum by 0 and are counted by neither counting variant.
/// Errors if F is not square-free: every downstream comparison assumes it.
pub fn char_walk_distribution(
    poly: &FpPolynomial,
    m: u64,
    stat: StatisticKind,
) -> Result<ResidueDistribution> {
    if m < 2 {
        return Err(Error::invalid("distribution needs modulus m >= 2"));
    }
    if !poly.is_squarefree()? {
        return Err(Error::invalid(
            "polynomial must be square-free for walk statistics",
        ));
    }
    let modulus = poly.modulus();
    let p = modulus.value();
    let mut counts = vec![0u64; m as usize];
    let mut value: u64 = 0;
    for k in 1..=p {
        let sym = legendre_symbol_residue(poly.eval(k % p), modulus);
        match stat {
            StatisticKind::SignedSum => match sym {
                1 => {
                    value += 1;
                    if value == m {
                        value = 0;
                    }
                }
                -1 => {
                    value = if value == 0 { m - 1 } else { value - 1 };
                }
                _ => {}
            },
            StatisticKind::ResidueCount => {
                if sym == 1 {
                    value += 1;
                    if value == m {
                        value = 0;
                    }
                }
            }
            StatisticKind::NonResidueCount => {
                if sym == -1 {
                    value += 1;
                    if value == m {
                        value = 0;
                    }
                }
            }
        }
        counts[value as usize] += 1;
    }
    Ok(ResidueDistribution {
        m,
        counts,
        total: p,
    })
}

/// Hard cap on block length; bounds census memory at 2^20 counters.
pub const MAX_BLOCK_LEN: u32 = 20;

/// Census of length-L sign patterns over consecutive blocks.
///
/// Block s (s = 0..blocks_total−1) carries the sign vector
/// (χ_p(F(sL+1)), …, χ_p(F(sL+L))); patterns are indexed by an L-bit
/// integer whose bit j−1 is set iff the j-th sign is +1. Blocks containing
/// a zero of F are tallied separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternCensus {
    pub p: u64,
    pub block_len: u32,
    /// 2^L counts, indexed by the encoded pattern.
    pub counts: Vec<u64>,
    pub blocks_total: u64,
    pub excluded_blocks: u64,
    /// Model prediction p/(2^L·L) for every pattern count.
    pub model_prediction: f64,
    /// Whether L falls inside the advisory regime L ≤ log p / log(4·deg F).
    pub within_advisory_regime: bool,
}

impl PatternCensus {
    /// (count − prediction)/prediction for one pattern.
    pub fn relative_deviation(&self, pattern: usize) -> f64 {
        (self.counts[pattern] as f64 - self.model_prediction) / self.model_prediction
    }

    pub fn max_abs_relative_deviation(&self) -> f64 {
        (0..self.counts.len())
            .map(|v| self.relative_deviation(v).abs())
            .fold(0.0, f64::max)
    }

    /// Renders an encoded pattern as a +/− string, first position leftmost.
    pub fn pattern_string(pattern: usize, block_len: u32) -> String {
        (0..block_len)
            .map(|j| if pattern >> j & 1 == 1 { '+' } else { '-' })
            .collect()
    }
}

/// Encoded sign vector of one block; `None` if any value of F vanishes.
/// The last argument can reach p when L = 1, so arguments reduce mod p.
#[inline]
fn block_pattern(poly: &FpPolynomial, modulus: PrimeModulus, start: u64, len: u32) -> Option<usize> {
    let p = modulus.value();
    let mut pattern = 0usize;
    for j in 0..len {
        let sym = legendre_symbol_residue(poly.eval((start + 1 + j as u64) % p), modulus);
        match sym {
            1 => pattern |= 1 << j,
            -1 => {}
            _ => return None,
        }
    }
    Some(pattern)
}

/// Tallies every length-L block of consecutive arguments by its sign
/// pattern. Blocks are independent, so the scan is partitioned across
/// threads and merged by exact integer addition.
pub fn block_pattern_census(poly: &FpPolynomial, block_len: u32) -> Result<PatternCensus> {
    let modulus = poly.modulus();
    let p = modulus.value();
    if block_len < 1 || block_len > MAX_BLOCK_LEN {
        return Err(Error::invalid(format!(
            "block length must lie in [1, {MAX_BLOCK_LEN}]"
        )));
    }
    if 2 * block_len as u64 > p {
        return Err(Error::invalid("census needs 2L <= p"));
    }
    if !poly.is_squarefree()? {
        return Err(Error::invalid(
            "polynomial must be square-free for the census",
        ));
    }
    let blocks_total = p / block_len as u64; // N + 1 with N = ⌊p/L⌋ − 1
    let n_patterns = 1usize << block_len;

    const CHUNK: u64 = 1 << 16;
    let n_chunks = blocks_total.div_ceil(CHUNK);
    let (counts, excluded_blocks) = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut local = vec![0u64; n_patterns];
            let mut excluded = 0u64;
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(blocks_total);
            for s in lo..hi {
                match block_pattern(poly, modulus, s * block_len as u64, block_len) {
                    Some(pattern) => local[pattern] += 1,
                    None => excluded += 1,
                }
            }
            (local, excluded)
        })
        .reduce(
            || (vec![0u64; n_patterns], 0u64),
            |mut a, b| {
                for (x, y) in a.0.iter_mut().zip(b.0.iter()) {
                    *x += y;
                }
                (a.0, a.1 + b.1)
            },
        );

    let degree = poly.degree().unwrap() as f64;
    let advisory_cap = (p as f64).ln() / (4.0 * degree).ln();
    Ok(PatternCensus {
        p,
        block_len,
        counts,
        blocks_total,
        excluded_blocks,
        model_prediction: p as f64 / (n_patterns as f64 * block_len as f64),
        within_advisory_regime: (block_len as f64) <= advisory_cap,
    })
}

/// Integer polynomial template, instantiated mod each prime of a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTemplate {
    /// Coefficients lowest degree first; may be negative.
    pub coeffs: Vec<i64>,
}

impl PolyTemplate {
    pub fn new(coeffs: Vec<i64>) -> Self {
        PolyTemplate { coeffs }
    }

    pub fn instantiate(&self, modulus: PrimeModulus) -> Result<FpPolynomial> {
        FpPolynomial::from_signed(modulus, &self.coeffs)
    }
}

/// Per-prime measurements of the normalized deviation ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistributionStats {
    pub variance: f64,
    pub max_abs_deviation: f64,
    /// variance · ln(p) / m²
    pub variance_ratio: f64,
    /// max deviation · √ln(p) / m
    pub max_dev_ratio: f64,
    pub within_budgets: bool,
    /// m / (ln p)^{1/4}; flagged advisory when above [`M_ADVISORY_FACTOR`].
    pub m_advisory_ratio: f64,
    pub within_m_advisory: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum RowOutcome {
    Evaluated(EquidistributionStats),
    Skipped { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistributionRow {
    pub p: u64,
    #[serde(flatten)]
    pub outcome: RowOutcome,
}

/// Budgeted equidistribution check across a family of primes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquidistributionReport {
    pub m: u64,
    pub stat: StatisticKind,
    pub variance_budget: f64,
    pub max_dev_budget: f64,
    pub rows: Vec<EquidistributionRow>,
    /// True iff at least one prime was evaluated and all evaluated primes
    /// stayed within both budgets.
    pub pass: bool,
    /// Coarse trend indicator: variance at the largest evaluated prime does
    /// not exceed the variance at the smallest. Advisory only.
    pub variance_trend_nonincreasing: bool,
}

/// Advisory factor for the modulus range flag m ≤ c·(ln p)^{1/4}.
pub const M_ADVISORY_FACTOR: f64 = 2.0;

/// Runs the walk distribution for each prime of a family and compares the
/// normalized ratios `variance·ln(p)/m²` and `max_dev·√ln(p)/m` against
/// explicit budgets. Primes where the template instance fails the
/// square-free hypothesis are skipped with a note; primes run in parallel.
pub fn equidistribution_check(
    primes: &[u64],
    template: &PolyTemplate,
    m: u64,
    stat: StatisticKind,
    variance_budget: f64,
    max_dev_budget: f64,
) -> Result<EquidistributionReport> {
    if m < 2 {
        return Err(Error::invalid("equidistribution check needs m >= 2"));
    }
    let moduli: Vec<PrimeModulus> = primes
        .iter()
        .map(|&p| PrimeModulus::new(p))
        .collect::<Result<_>>()?;
    let rows: Vec<EquidistributionRow> = moduli
        .par_iter()
        .map(|&modulus| {
            let p = modulus.value();
            let poly = match template.instantiate(modulus) {
                Ok(poly) => poly,
                Err(e) => {
                    return EquidistributionRow {
                        p,
                        outcome: RowOutcome::Skipped {
                            reason: e.to_string(),
                        },
                    }
                }
            };
            match poly.is_squarefree() {
                Ok(true) => {}
                Ok(false) => {
                    return EquidistributionRow {
                        p,
                        outcome: RowOutcome::Skipped {
                            reason: format!("instance {poly} not square-free mod {p}"),
                        },
                    }
                }
                Err(e) => {
                    return EquidistributionRow {
                        p,
                        outcome: RowOutcome::Skipped {
                            reason: e.to_string(),
                        },
                    }
                }
            }
            let dist = char_walk_distribution(&poly, m, stat)
                .expect("square-freeness checked above");
            let variance = dist.variance_from_uniform();
            let max_abs_deviation = dist.max_abs_deviation_from_uniform();
            let log_p = (p as f64).ln();
            let variance_ratio = variance * log_p / (m * m) as f64;
            let max_dev_ratio = max_abs_deviation * log_p.sqrt() / m as f64;
            let m_advisory_ratio = m as f64 / log_p.powf(0.25);
            EquidistributionRow {
                p,
                outcome: RowOutcome::Evaluated(EquidistributionStats {
                    variance,
                    max_abs_deviation,
                    variance_ratio,
                    max_dev_ratio,
                    within_budgets: variance_ratio <= variance_budget
                        && max_dev_ratio <= max_dev_budget,
                    m_advisory_ratio,
                    within_m_advisory: m_advisory_ratio <= M_ADVISORY_FACTOR,
                }),
            }
        })
        .collect();

    let evaluated: Vec<&EquidistributionStats> = rows
        .iter()
        .filter_map(|r| match &r.outcome {
            RowOutcome::Evaluated(s) => Some(s),
            RowOutcome::Skipped { .. } => None,
        })
        .collect();
    let pass = !evaluated.is_empty() && evaluated.iter().all(|s| s.within_budgets);
    let variance_trend_nonincreasing = match (evaluated.first(), evaluated.last()) {
        (Some(first), Some(last)) => last.variance <= first.variance,
        _ => false,
    };
    Ok(EquidistributionReport {
        m,
        stat,
        variance_budget,
        max_dev_budget,
        rows,
        pass,
        variance_trend_nonincreasing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_x(p: u64) -> FpPolynomial {
        FpPolynomial::x(PrimeModulus::new(p).unwrap())
    }

    #[test]
    fn hand_table_p7_signed() {
        // S sequence for F=X mod 7: 1,2,1,2,1,0,0 → residues mod 2:
        // 1,0,1,0,1,0,0
        let dist = char_walk_distribution(&poly_x(7), 2, StatisticKind::SignedSum).unwrap();
        assert_eq!(dist.counts, vec![4, 3]);
        assert_eq!(dist.total, 7);
    }

    #[test]
    fn hand_table_p7_residue_count() {
        // R sequence: 1,2,2,3,3,3,3 → residues mod 2: 1,0,0,1,1,1,1
        let dist = char_walk_distribution(&poly_x(7), 2, StatisticKind::ResidueCount).unwrap();
        assert_eq!(dist.counts, vec![2, 5]);
    }

    #[test]
    fn hand_table_p7_nonresidue_count() {
        // N sequence: 0,0,1,1,2,3,3 → residues mod 2: 0,0,1,1,0,1,1
        let dist = char_walk_distribution(&poly_x(7), 2, StatisticKind::NonResidueCount).unwrap();
        assert_eq!(dist.counts, vec![3, 4]);
        assert_eq!(dist.counts.iter().sum::<u64>(), dist.total);
    }

    #[test]
    fn modulus_below_two_rejected() {
        assert!(char_walk_distribution(&poly_x(7), 1, StatisticKind::SignedSum).is_err());
    }

    #[test]
    fn non_squarefree_rejected() {
        let m = PrimeModulus::new(11).unwrap();
        let sq = FpPolynomial::new(m, vec![0, 0, 1]).unwrap();
        assert!(char_walk_distribution(&sq, 2, StatisticKind::SignedSum).is_err());
        assert!(block_pattern_census(&sq, 2).is_err());
    }

    #[test]
    fn variance_statistic_values() {
        let uniform = ResidueDistribution {
            m: 2,
            counts: vec![5, 5],
            total: 10,
        };
        assert_eq!(uniform.variance_from_uniform(), 0.0);

        let skew = ResidueDistribution {
            m: 2,
            counts: vec![4, 3],
            total: 7,
        };
        assert!((skew.variance_from_uniform() - 1.0 / 98.0).abs() < 1e-15);

        let extreme = ResidueDistribution {
            m: 2,
            counts: vec![7, 0],
            total: 7,
        };
        assert!((extreme.variance_from_uniform() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn census_hand_table_p7() {
        // blocks (1,2),(3,4),(5,6): (+,+), (−,+), (−,−)
        let census = block_pattern_census(&poly_x(7), 2).unwrap();
        assert_eq!(census.blocks_total, 3);
        assert_eq!(census.excluded_blocks, 0);
        assert_eq!(census.counts[0b11], 1); // (+,+)
        assert_eq!(census.counts[0b10], 1); // (−,+)
        assert_eq!(census.counts[0b00], 1); // (−,−)
        assert_eq!(census.counts[0b01], 0); // (+,−)
        let tallied: u64 = census.counts.iter().sum();
        assert_eq!(tallied + census.excluded_blocks, census.blocks_total);
    }

    #[test]
    fn census_partition_invariant() {
        for p in [101u64, 997, 10007] {
            for block_len in [1u32, 2, 3, 5] {
                let census = block_pattern_census(&poly_x(p), block_len).unwrap();
                let tallied: u64 = census.counts.iter().sum();
                assert_eq!(tallied + census.excluded_blocks, p / block_len as u64);
            }
        }
    }

    #[test]
    fn census_rejects_bad_lengths() {
        assert!(block_pattern_census(&poly_x(7), 0).is_err());
        assert!(block_pattern_census(&poly_x(7), 21).is_err());
        assert!(block_pattern_census(&poly_x(7), 4).is_err()); // 2L > p
    }

    #[test]
    fn pattern_strings() {
        assert_eq!(PatternCensus::pattern_string(0b11, 2), "++");
        assert_eq!(PatternCensus::pattern_string(0b01, 2), "+-");
        assert_eq!(PatternCensus::pattern_string(0b10, 2), "-+");
    }

    #[test]
    fn zero_of_f_repeats_signed_value() {
        // F = X: the single zero at k = p forces S(p) = S(p−1), so the last
        // two prefixes land in the same residue class.
        let modulus = PrimeModulus::new(101).unwrap();
        let poly = FpPolynomial::x(modulus);
        let mut value: i64 = 0;
        let mut prefix = Vec::new();
        for k in 1..=101u64 {
            value += i64::from(legendre_symbol_residue(poly.eval(k % 101), modulus));
            prefix.push(value);
        }
        assert_eq!(prefix[100], prefix[99]);
    }

    #[test]
    fn skips_non_squarefree_template() {
        let template = PolyTemplate::new(vec![0, 0, 1]); // X²
        let report = equidistribution_check(
            &[101, 997],
            &template,
            3,
            StatisticKind::SignedSum,
            10.0,
            2.0,
        )
        .unwrap();
        assert!(!report.pass);
        assert!(report
            .rows
            .iter()
            .all(|r| matches!(r.outcome, RowOutcome::Skipped { .. })));
    }

    #[test]
    fn small_family_passes_budgets() {
        let template = PolyTemplate::new(vec![0, 1]); // X
        let report = equidistribution_check(
            &[10007, 100003],
            &template,
            3,
            StatisticKind::SignedSum,
            10.0,
            2.0,
        )
        .unwrap();
        assert!(report.pass, "{report:?}");
    }
}
