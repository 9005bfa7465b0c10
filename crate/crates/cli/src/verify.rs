//! The bundled verification suite. Each criterion pins its tolerance in
//! code and reports the measured value next to it; `fast` covers the
//! oracle-equivalence and exact-identity checks, `full` adds the
//! large-scale empirical ones.

use crate::config::{CharDistArgs, Command, StatArg, VerifyLevel, WalkMcArgs};
use crate::report::CriterionResult;
use charwalk_core::char_walk::{
    block_pattern_census, char_walk_distribution, equidistribution_check, PolyTemplate,
    RowOutcome, StatisticKind,
};
use charwalk_core::exp_sums::{twisted_char_sum, weil_sweep, TwistedSumSpec};
use charwalk_core::finite_field::{FpPolynomial, PrimeModulus};
use charwalk_core::oracles::step_law_enumerated;
use charwalk_core::prime_walk::{
    prime_walk_distribution, sieve_primes, sign_pattern_census,
};
use charwalk_core::walk_model::{
    occupation_variance_enumerated, occupation_variance_exact, step_law_exact,
    uniformity_decay_bound, WalkKind,
};
use std::time::Instant;

/// Primes used by the large-scale equidistribution checks.
pub const DESK_PRIMES: [u64; 4] = [10_007, 100_003, 1_000_003, 9_999_991];

pub fn run(level: VerifyLevel) -> Vec<CriterionResult> {
    let mut results = vec![
        c01_step_law_vs_enumeration(),
        c02_variance_identity(),
        c03_decay_domination(),
        c04_variance_scaling(),
        c05_hand_tables(),
    ];
    if level == VerifyLevel::Full {
        results.extend(c06_signed_equidistribution());
        results.push(c07_count_equidistribution());
        results.extend(c08_census_desk_scale());
        results.extend(c09_prime_walk_desk_scale());
    }
    results.extend(c10_weil_exactness());
    results.push(c11_determinism());
    results
}

fn finish(
    id: &str,
    description: &str,
    measured: f64,
    threshold: f64,
    pass: bool,
    started: Instant,
) -> CriterionResult {
    CriterionResult {
        id: id.into(),
        description: description.into(),
        pass,
        measured,
        threshold,
        seconds: started.elapsed().as_secs_f64(),
    }
}

/// Exact k-step law vs the 2^k enumeration, k ≤ 16, m ∈ 2..=9.
fn c01_step_law_vs_enumeration() -> CriterionResult {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for m in 2..=9u64 {
        for k in 1..=16u64 {
            let fast = step_law_exact(WalkKind::Rademacher, k, m).unwrap();
            let slow = step_law_enumerated(WalkKind::Rademacher, k, m).unwrap();
            for a in 0..m as usize {
                worst = worst.max((fast.probabilities[a] - slow[a]).abs());
            }
        }
    }
    finish(
        "C01",
        "step law matches 2^k enumeration",
        worst,
        1e-12,
        worst <= 1e-12,
        started,
    )
}

/// Closed-form occupation variance vs enumeration, both kinds, N ≤ 16,
/// m ∈ 2..=8, plus the pinned hand values. Arbitrates the diagonal term.
fn c02_variance_identity() -> CriterionResult {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for kind in [WalkKind::Rademacher, WalkKind::Bernoulli01] {
        for m in 2..=8u64 {
            for n in 1..=16u64 {
                let exact = occupation_variance_exact(kind, n, m).unwrap();
                let enumerated = occupation_variance_enumerated(kind, n, m).unwrap();
                worst = worst.max((exact - enumerated.total).abs());
            }
        }
    }
    let pinned = [
        (WalkKind::Rademacher, 1u64, 2u64, 0.5f64),
        (WalkKind::Rademacher, 2, 2, 0.0),
        (WalkKind::Rademacher, 2, 3, 1.0 / 6.0),
        (WalkKind::Bernoulli01, 2, 2, 0.25),
    ];
    for (kind, n, m, want) in pinned {
        let got = occupation_variance_exact(kind, n, m).unwrap();
        worst = worst.max((got - want).abs());
    }
    finish(
        "C02",
        "variance identity matches enumeration and hand values",
        worst,
        1e-12,
        worst <= 1e-12,
        started,
    )
}

/// |law − 1/m| ≤ ((m−1)/m)(1−π²/(3m²))^k for odd m ∈ 3..=15, k ≤ 2000.
fn c03_decay_domination() -> CriterionResult {
    let started = Instant::now();
    let mut worst_excess = f64::NEG_INFINITY;
    for m in (3..=15u64).step_by(2) {
        for k in 1..=2000u64 {
            let law = step_law_exact(WalkKind::Rademacher, k, m).unwrap();
            let bound = uniformity_decay_bound(m, k).unwrap();
            worst_excess = worst_excess.max(law.max_deviation_from_uniform() - bound);
        }
    }
    finish(
        "C03",
        "explicit decay bound dominates the exact law (strict)",
        worst_excess,
        0.0,
        worst_excess <= 0.0,
        started,
    )
}

/// variance·N/m² ≤ 2 for m ∈ 2..=12, N ∈ [m², 5000], both kinds.
fn c04_variance_scaling() -> CriterionResult {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for kind in [WalkKind::Rademacher, WalkKind::Bernoulli01] {
        for m in 2..=12u64 {
            for n in (m * m)..=5000 {
                let v = occupation_variance_exact(kind, n, m).unwrap();
                worst = worst.max(v * n as f64 / (m * m) as f64);
            }
        }
    }
    finish(
        "C04",
        "occupation variance scales below 2·m²/N",
        worst,
        2.0,
        worst <= 2.0,
        started,
    )
}

/// Exact hand tables at p = 7: distributions and census.
fn c05_hand_tables() -> CriterionResult {
    let started = Instant::now();
    let modulus = PrimeModulus::new(7).unwrap();
    let poly = FpPolynomial::x(modulus);
    let mut mismatches = 0u64;
    let signed = char_walk_distribution(&poly, 2, StatisticKind::SignedSum).unwrap();
    if signed.counts != [4, 3] {
        mismatches += 1;
    }
    let residues = char_walk_distribution(&poly, 2, StatisticKind::ResidueCount).unwrap();
    if residues.counts != [2, 5] {
        mismatches += 1;
    }
    let census = block_pattern_census(&poly, 2).unwrap();
    // (+,+):1 (−,+):1 (−,−):1 (+,−):0, encoded by bit j−1 = sign of slot j
    let expected = [1u64, 0, 1, 1];
    if census.counts != expected || census.excluded_blocks != 0 {
        mismatches += 1;
    }
    finish(
        "C05",
        "hand tables at p=7 reproduced exactly",
        mismatches as f64,
        0.0,
        mismatches == 0,
        started,
    )
}

/// Signed-walk equidistribution budgets over the desk-scale primes for
/// F = X and F = X² + 1 at m = 3.
fn c06_signed_equidistribution() -> Vec<CriterionResult> {
    let started = Instant::now();
    let mut worst_variance_ratio = 0.0f64;
    let mut worst_dev_ratio = 0.0f64;
    for template in [PolyTemplate::new(vec![0, 1]), PolyTemplate::new(vec![1, 0, 1])] {
        let report = equidistribution_check(
            &DESK_PRIMES,
            &template,
            3,
            StatisticKind::SignedSum,
            10.0,
            2.0,
        )
        .unwrap();
        for row in &report.rows {
            match &row.outcome {
                RowOutcome::Evaluated(stats) => {
                    worst_variance_ratio = worst_variance_ratio.max(stats.variance_ratio);
                    worst_dev_ratio = worst_dev_ratio.max(stats.max_dev_ratio);
                }
                RowOutcome::Skipped { .. } => {
                    // a skipped desk prime means the check did not run
                    worst_variance_ratio = f64::INFINITY;
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64() / 2.0;
    vec![
        CriterionResult {
            id: "C06a".into(),
            description: "signed-walk variance ratio V·ln(p)/m² within budget".into(),
            pass: worst_variance_ratio <= 10.0,
            measured: worst_variance_ratio,
            threshold: 10.0,
            seconds: elapsed,
        },
        CriterionResult {
            id: "C06b".into(),
            description: "signed-walk max deviation ratio within budget".into(),
            pass: worst_dev_ratio <= 2.0,
            measured: worst_dev_ratio,
            threshold: 2.0,
            seconds: elapsed,
        },
    ]
}

/// Counting-walk variants obey the same variance budget, F = X, m = 3.
fn c07_count_equidistribution() -> CriterionResult {
    let started = Instant::now();
    let template = PolyTemplate::new(vec![0, 1]);
    let mut worst = 0.0f64;
    for stat in [StatisticKind::ResidueCount, StatisticKind::NonResidueCount] {
        let report =
            equidistribution_check(&DESK_PRIMES, &template, 3, stat, 10.0, f64::INFINITY).unwrap();
        for row in &report.rows {
            match &row.outcome {
                RowOutcome::Evaluated(stats) => {
                    worst = worst.max(stats.variance_ratio);
                }
                RowOutcome::Skipped { .. } => worst = f64::INFINITY,
            }
        }
    }
    finish(
        "C07",
        "counting-walk variance ratios within budget",
        worst,
        10.0,
        worst <= 10.0,
        started,
    )
}

/// Census at p = 9999991, L = 4: every pattern within 5% of p/(2^L·L).
fn c08_census_desk_scale() -> Vec<CriterionResult> {
    let started = Instant::now();
    let modulus = PrimeModulus::new(9_999_991).unwrap();
    let poly = FpPolynomial::x(modulus);
    let census = block_pattern_census(&poly, 4).unwrap();
    let max_dev = census.max_abs_relative_deviation();
    let elapsed = started.elapsed().as_secs_f64();
    vec![
        CriterionResult {
            id: "C08a".into(),
            description: "census counts within 5% of p/(2^L·L) at p=9999991, L=4".into(),
            pass: max_dev <= 0.05,
            measured: max_dev,
            threshold: 0.05,
            seconds: elapsed,
        },
        CriterionResult {
            id: "C08b".into(),
            description: "census excluded blocks at most 1".into(),
            pass: census.excluded_blocks <= 1,
            measured: census.excluded_blocks as f64,
            threshold: 1.0,
            seconds: 0.0,
        },
    ]
}

/// Prime-indexed walk at N = 10^6, k = 6, plus the exact hand case N = 13.
fn c09_prime_walk_desk_scale() -> Vec<CriterionResult> {
    let started = Instant::now();
    let table = sieve_primes(1_000_000).unwrap();
    let census = sign_pattern_census(&table, 6).unwrap();
    let expected = 1.0 / 64.0;
    let max_rel = (0..64)
        .map(|v| (census.fraction(v) / expected - 1.0).abs())
        .fold(0.0, f64::max);
    let walk = prime_walk_distribution(&table, 6, 3).unwrap();
    let hand = {
        let small = sieve_primes(13).unwrap();
        let result = prime_walk_distribution(&small, 2, 3).unwrap();
        let want = [0.75, 0.25, 0.0];
        (0..3)
            .map(|a| (result.distribution.frequency(a) - want[a]).abs())
            .fold(0.0, f64::max)
    };
    let elapsed = started.elapsed().as_secs_f64();
    vec![
        CriterionResult {
            id: "C09a".into(),
            description: "all 64 sign-pattern fractions within 10% of 2^-6 at N=10^6".into(),
            pass: max_rel <= 0.10,
            measured: max_rel,
            threshold: 0.10,
            seconds: elapsed,
        },
        CriterionResult {
            id: "C09b".into(),
            description: "walk distribution within 0.01 of the exact law (k=6, m=3)".into(),
            pass: walk.max_abs_discrepancy <= 0.01,
            measured: walk.max_abs_discrepancy,
            threshold: 0.01,
            seconds: 0.0,
        },
        CriterionResult {
            id: "C09c".into(),
            description: "hand case N=13, k=2, m=3 reproduced exactly".into(),
            pass: hand == 0.0,
            measured: hand,
            threshold: 0.0,
            seconds: 0.0,
        },
    ]
}

/// Exhaustive Weil sweep p ≤ 97 plus the p = 5 Gauss-sum probe.
fn c10_weil_exactness() -> Vec<CriterionResult> {
    let started = Instant::now();
    let sweep = weil_sweep(97).unwrap();
    let sweep_elapsed = started.elapsed().as_secs_f64();
    let gauss_started = Instant::now();
    let modulus = PrimeModulus::new(5).unwrap();
    let spec = TwistedSumSpec::complete(FpPolynomial::x(modulus), FpPolynomial::x(modulus))
        .unwrap();
    let gauss = twisted_char_sum(&spec).unwrap();
    let gauss_error = (gauss.norm() - 5f64.sqrt()).abs();
    vec![
        CriterionResult {
            id: "C10a".into(),
            description: format!(
                "Weil margins nonnegative over {} exhaustive checks (min margin)",
                sweep.checks
            ),
            pass: sweep.all_nonnegative,
            measured: sweep.min_margin,
            threshold: 0.0,
            seconds: sweep_elapsed,
        },
        CriterionResult {
            id: "C10b".into(),
            description: "p=5 Gauss sum has modulus sqrt(5)".into(),
            pass: gauss_error <= 1e-9,
            measured: gauss_error,
            threshold: 1e-9,
            seconds: gauss_started.elapsed().as_secs_f64(),
        },
    ]
}

/// Identical configs and seeds produce byte-identical payloads.
fn c11_determinism() -> CriterionResult {
    let started = Instant::now();
    let configs = [
        Command::WalkMc(WalkMcArgs {
            kind: crate::config::KindArg::Bernoulli01,
            n: 64,
            m: 5,
            trials: 20_000,
            seed: 0xC0FFEE,
        }),
        Command::CharDist(CharDistArgs {
            p: 10_007,
            poly: vec![1, 0, 1],
            m: 3,
            stat: StatArg::Signed,
        }),
    ];
    let mut differing = 0u64;
    for command in &configs {
        let first = crate::commands::run(command).unwrap();
        let second = crate::commands::run(command).unwrap();
        if first.canonical_json() != second.canonical_json() {
            differing += 1;
        }
        if first.to_csv() != second.to_csv() {
            differing += 1;
        }
    }
    finish(
        "C11",
        "reruns with the same seed are byte-identical (net of wall time)",
        differing as f64,
        0.0,
        differing == 0,
        started,
    )
}
