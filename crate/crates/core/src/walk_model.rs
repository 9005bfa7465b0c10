//! Exact distributions for the two step models reduced mod m: the ±1
//! (Rademacher) walk and the 0/1 (Bernoulli) walk. Provides the closed-form
//! k-step law, an explicit decay bound towards uniform, the closed-form
//! occupation-variance identity, the 2^N enumeration that arbitrates it,
//! and a reproducible Monte Carlo estimator.

use crate::error::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Step model of the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WalkKind {
    /// Steps ±1 with probability 1/2 each.
    Rademacher,
    /// Steps 0/1 with probability 1/2 each.
    Bernoulli01,
}

impl std::fmt::Display for WalkKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WalkKind::Rademacher => write!(f, "rademacher"),
            WalkKind::Bernoulli01 => write!(f, "bernoulli01"),
        }
    }
}

/// The law of the k-th step of a walk on ℤ/mℤ.
///
/// Entries lie in [0,1] and sum to 1 within 1e−12; for the ±1 walk with
/// even m only residues of the parity of k carry mass.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WalkLaw {
    pub m: u64,
    pub k: u64,
    pub probabilities: Vec<f64>,
}

impl WalkLaw {
    /// Largest |probabilities[a] − 1/m| over all residues.
    pub fn max_deviation_from_uniform(&self) -> f64 {
        let u = 1.0 / self.m as f64;
        self.probabilities
            .iter()
            .map(|&p| (p - u).abs())
            .fold(0.0, f64::max)
    }
}

/// Cached complex exponentials e_m(t) = exp(2πit/m) for t ∈ [0, m).
#[derive(Debug, Clone)]
pub struct RootOfUnityCache {
    m: u64,
    values: Vec<Complex64>,
}

impl RootOfUnityCache {
    pub fn new(m: u64) -> Result<Self> {
        if m < 1 {
            return Err(Error::invalid("root-of-unity cache needs m >= 1"));
        }
        let mut values = Vec::with_capacity(m as usize);
        values.push(Complex64::new(1.0, 0.0));
        for t in 1..m {
            let theta = 2.0 * PI * t as f64 / m as f64;
            values.push(Complex64::new(theta.cos(), theta.sin()));
        }
        Ok(RootOfUnityCache { m, values })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.m
    }

    /// e_m(t) with t taken mod m.
    #[inline]
    pub fn root(&self, t: u64) -> Complex64 {
        self.values[(t % self.m) as usize]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

#[inline]
fn magnitude_guard(z: Complex64) -> Complex64 {
    let n2 = z.norm_sqr();
    if n2 > 1.0 {
        z / n2.sqrt()
    } else {
        z
    }
}

/// z^d by repeated multiplication (square-and-multiply), no polar-form
/// shortcuts. All bases here satisfy |z| ≤ 1 and every product passes the
/// magnitude guard, so powers can never drift above the unit disk.
fn complex_pow_iter(z: Complex64, d: u64) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    let mut base = z;
    let mut e = d;
    loop {
        if e & 1 == 1 {
            acc = magnitude_guard(acc * base);
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = magnitude_guard(base * base);
    }
    acc
}

/// Per-frequency weight of one step: E[e_m(t·X)].
#[inline]
fn step_weight(kind: WalkKind, roots: &RootOfUnityCache, t: u64) -> Complex64 {
    match kind {
        // (e_m(t) + e_m(−t))/2 = cos(2πt/m)
        WalkKind::Rademacher => Complex64::new(roots.root(t).re, 0.0),
        WalkKind::Bernoulli01 => (Complex64::new(1.0, 0.0) + roots.root(t)) / 2.0,
    }
}

/// Exact k-step law of the walk mod m, from the character expansion
/// `P(S_k ≡ a) = (1/m)·Σ_t e_m(−at)·E[e_m(t·X)]^k`.
///
/// For the ±1 walk the t-sum collapses to the real cosine form; tiny
/// negative round-off (within −1e−12) is clamped to zero.
pub fn step_law_exact(kind: WalkKind, k: u64, m: u64) -> Result<WalkLaw> {
    if m < 2 {
        return Err(Error::invalid("step law needs modulus m >= 2"));
    }
    if k < 1 {
        return Err(Error::invalid("step law needs k >= 1"));
    }
    let roots = RootOfUnityCache::new(m)?;
    let mm = m as usize;
    let mut probabilities = Vec::with_capacity(mm);
    match kind {
        WalkKind::Rademacher => {
            let powers: Vec<f64> = (0..m)
                .map(|t| roots.root(t).re.powi(k.min(i32::MAX as u64) as i32))
                .collect();
            for a in 0..m {
                let mut acc = 0.0;
                for t in 0..m {
                    acc += roots.root((a * t) % m).re * powers[t as usize];
                }
                probabilities.push(clamp_probability(acc / m as f64));
            }
        }
        WalkKind::Bernoulli01 => {
            let powers: Vec<Complex64> = (0..m)
                .map(|t| complex_pow_iter(step_weight(kind, &roots, t), k))
                .collect();
            for a in 0..m {
                let mut acc = 0.0;
                for t in 0..m {
                    // e_m(−at) = conj(e_m(at))
                    acc += (roots.root((a * t) % m).conj() * powers[t as usize]).re;
                }
                probabilities.push(clamp_probability(acc / m as f64));
            }
        }
    }
    Ok(WalkLaw {
        m,
        k,
        probabilities,
    })
}

fn clamp_probability(p: f64) -> f64 {
    debug_assert!(p >= -1e-12, "probability {p} below round-off floor");
    if p < 0.0 && p > -1e-12 {
        0.0
    } else {
        p
    }
}

/// Explicit uniformity bound ((m−1)/m)·(1 − π²/(3m²))^k for odd m ≥ 3.
///
/// Dominates |P(S_k ≡ a) − 1/m| for every residue a of the ±1 walk; the
/// cosine bound behind it requires odd m, so even m is rejected.
pub fn uniformity_decay_bound(m: u64, k: u64) -> Result<f64> {
    if m < 3 || m % 2 == 0 {
        return Err(Error::invalid("decay bound needs odd m >= 3"));
    }
    if k < 1 {
        return Err(Error::invalid("decay bound needs k >= 1"));
    }
    let mf = m as f64;
    let rate = 1.0 - PI * PI / (3.0 * mf * mf);
    Ok((mf - 1.0) / mf * rate.powi(k.min(i32::MAX as u64) as i32))
}

/// Σ_d(N−d)·w^d for d = 1..N−1.
///
/// Closed geometric form away from |w| = 1; direct summation near the unit
/// circle (covers w = −1 at even m) to avoid cancellation in the 1/(1−w)²
/// factors.
fn cross_sum(w: Complex64, n: u64) -> Complex64 {
    if n < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let nf = n as f64;
    if w.norm() < 1.0 - 1e-9 {
        let one = Complex64::new(1.0, 0.0);
        let m = n - 1; // top exponent
        let w_m = complex_pow_iter(w, m);
        let geo = w * (one - w_m) / (one - w);
        let weighted =
            w * (one - (m as f64 + 1.0) * w_m + m as f64 * w_m * w) / ((one - w) * (one - w));
        geo * nf - weighted
    } else {
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        for d in 1..n {
            pw = magnitude_guard(pw * w);
            acc += pw * (nf - d as f64);
        }
        acc
    }
}

/// Closed form for Σ_a E[(occupation fraction of a − 1/m)²] after N steps:
///
/// `(m−1)/(mN) + (2/(mN²))·Σ_{t=1}^{m−1} Σ_{d=1}^{N−1} (N−d)·Re[w(t)^d]`
///
/// with w(t) = cos(2πt/m) for the ±1 walk and w(t) = (1+e_m(t))/2 for the
/// 0/1 walk. The diagonal term (m−1)/(mN) is pinned by the exact 2^N
/// enumeration ([`occupation_variance_enumerated`]), which this function
/// must match to 1e−12 for N ≤ 16.
pub fn occupation_variance_exact(kind: WalkKind, n_steps: u64, m: u64) -> Result<f64> {
    if m < 2 {
        return Err(Error::invalid("variance needs modulus m >= 2"));
    }
    if n_steps < 1 {
        return Err(Error::invalid("variance needs N >= 1"));
    }
    let roots = RootOfUnityCache::new(m)?;
    let nf = n_steps as f64;
    let mf = m as f64;
    let mut cross = Complex64::new(0.0, 0.0);
    for t in 1..m {
        cross += cross_sum(step_weight(kind, &roots, t), n_steps);
    }
    debug_assert!(
        cross.im.abs() < 1e-9 * (1.0 + cross.re.abs()),
        "t-sum must be real, got imaginary part {}",
        cross.im
    );
    Ok((mf - 1.0) / (mf * nf) + 2.0 / (mf * nf * nf) * cross.re)
}

/// Exact per-residue occupation variances from full 2^N enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct EnumeratedVariance {
    /// E[(occupation fraction of residue a − 1/m)²] for a = 0..m−1.
    pub per_residue: Vec<f64>,
    /// Sum over residues.
    pub total: f64,
}

/// Maximum enumeration length; cost is 2^N·N.
pub const MAX_ENUMERATION_STEPS: u64 = 24;

/// Brute-force oracle over all 2^N step sequences.
///
/// Accumulates the integer numerators Σ_v (m·c_a(v) − N)² exactly and
/// divides once at the end, so results are exact dyadic-rational values
/// evaluated in f64 for N ≤ 24.
pub fn occupation_variance_enumerated(
    kind: WalkKind,
    n_steps: u64,
    m: u64,
) -> Result<EnumeratedVariance> {
    if m < 2 {
        return Err(Error::invalid("enumeration needs modulus m >= 2"));
    }
    if n_steps < 1 || n_steps > MAX_ENUMERATION_STEPS {
        return Err(Error::invalid(format!(
            "enumeration length must lie in [1, {MAX_ENUMERATION_STEPS}]"
        )));
    }
    let n = n_steps as usize;
    let mm = m as usize;
    let mut numerators = vec![0u64; mm];
    let mut counts = vec![0u64; mm];
    for walk in 0u64..(1u64 << n) {
        counts.fill(0);
        let mut residue: u64 = 0;
        for j in 0..n {
            let bit = (walk >> j) & 1;
            match kind {
                WalkKind::Rademacher => {
                    // bit 1 → +1, bit 0 → −1
                    residue = if bit == 1 {
                        (residue + 1) % m
                    } else {
                        (residue + m - 1) % m
                    };
                }
                WalkKind::Bernoulli01 => {
                    residue = (residue + bit) % m;
                }
            }
            counts[residue as usize] += 1;
        }
        for a in 0..mm {
            let diff = m as i64 * counts[a] as i64 - n_steps as i64;
            numerators[a] += (diff * diff) as u64;
        }
    }
    let denom = 2f64.powi(n as i32) * (m as f64 * n_steps as f64).powi(2);
    let per_residue: Vec<f64> = numerators.iter().map(|&q| q as f64 / denom).collect();
    let total_num: u64 = numerators.iter().sum();
    Ok(EnumeratedVariance {
        per_residue,
        total: total_num as f64 / denom,
    })
}

/// Monte Carlo estimate of the total occupation variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub standard_error: f64,
    pub trials: u64,
}

const SPLITMIX64_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// SplitMix64 (Steele–Lea–Flood), period 2^64. Deterministic and
/// platform-independent; used for the per-trial substreams.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(state: u64) -> Self {
        SplitMix64 { state }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(SPLITMIX64_GAMMA);
        mix64(self.state)
    }
}

/// Substream derivation contract: trial i draws from SplitMix64 seeded
/// with `seed XOR mix64(i)`, so trials are independent of execution order.
#[inline]
pub fn trial_stream(seed: u64, trial: u64) -> SplitMix64 {
    SplitMix64::new(seed ^ mix64(trial))
}

/// Unbiased Monte Carlo estimate of
/// Σ_a E[(occupation fraction of a − 1/m)²] over `trials` independent
/// walks of N steps.
///
/// Per-trial statistics are accumulated as exact integers, so the result
/// is bit-identical for a given (kind, N, m, trials, seed) regardless of
/// thread count or summation order.
pub fn occupation_variance_monte_carlo(
    kind: WalkKind,
    n_steps: u64,
    m: u64,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if m < 2 {
        return Err(Error::invalid("monte carlo needs modulus m >= 2"));
    }
    if n_steps < 1 {
        return Err(Error::invalid("monte carlo needs N >= 1"));
    }
    if trials < 100 {
        return Err(Error::invalid("monte carlo needs trials >= 100"));
    }
    let (sum, sum_sq) = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let numerator = trial_numerator(kind, n_steps, m, seed, trial);
            (numerator as u128, (numerator as u128).pow(2))
        })
        .reduce(
            || (0u128, 0u128),
            |a, b| (a.0 + b.0, a.1 + b.1),
        );
    let denom = (m as f64 * n_steps as f64).powi(2);
    let tf = trials as f64;
    let mean_num = sum as f64 / tf;
    let mean = mean_num / denom;
    // sample variance of the per-trial statistic, from exact integer sums
    let var_num = (sum_sq as f64 - (sum as f64) * mean_num) / (tf - 1.0);
    let standard_error = var_num.max(0.0).sqrt() / denom / tf.sqrt();
    Ok(MonteCarloEstimate {
        mean,
        standard_error,
        trials,
    })
}

/// Integer statistic Σ_a (m·c_a − N)² of one simulated walk.
fn trial_numerator(kind: WalkKind, n_steps: u64, m: u64, seed: u64, trial: u64) -> u64 {
    let mut rng = trial_stream(seed, trial);
    let mut counts = vec![0u64; m as usize];
    let mut residue: u64 = 0;
    let mut bits = 0u64;
    for j in 0..n_steps {
        if j % 64 == 0 {
            bits = rng.next_u64();
        }
        let bit = (bits >> (j % 64)) & 1;
        match kind {
            WalkKind::Rademacher => {
                residue = if bit == 1 {
                    (residue + 1) % m
                } else {
                    (residue + m - 1) % m
                };
            }
            WalkKind::Bernoulli01 => {
                residue = (residue + bit) % m;
            }
        }
        counts[residue as usize] += 1;
    }
    counts
        .iter()
        .map(|&c| {
            let diff = m as i64 * c as i64 - n_steps as i64;
            (diff * diff) as u64
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn law_rejects_bad_domains() {
        assert!(step_law_exact(WalkKind::Rademacher, 1, 1).is_err());
        assert!(step_law_exact(WalkKind::Rademacher, 0, 3).is_err());
        assert!(uniformity_decay_bound(4, 1).is_err());
        assert!(uniformity_decay_bound(3, 0).is_err());
        assert!(occupation_variance_exact(WalkKind::Bernoulli01, 0, 2).is_err());
        assert!(occupation_variance_exact(WalkKind::Bernoulli01, 2, 1).is_err());
        assert!(occupation_variance_enumerated(WalkKind::Rademacher, 25, 2).is_err());
    }

    #[test]
    fn one_step_law_by_hand() {
        let law = step_law_exact(WalkKind::Rademacher, 1, 3).unwrap();
        let expect = [0.0, 0.5, 0.5];
        for (a, &e) in expect.iter().enumerate() {
            assert!((law.probabilities[a] - e).abs() < 1e-14, "a={a}");
        }
    }

    #[test]
    fn two_step_law_by_hand() {
        // 4 walks: S_2 ∈ {−2, 0, 0, 2} → residues mod 3 {1, 0, 0, 2}
        let law = step_law_exact(WalkKind::Rademacher, 2, 3).unwrap();
        let expect = [0.5, 0.25, 0.25];
        for (a, &e) in expect.iter().enumerate() {
            assert!((law.probabilities[a] - e).abs() < 1e-14, "a={a}");
        }
    }

    #[test]
    fn long_walk_approaches_uniform_within_decay_bound() {
        for k in [50u64, 200, 1000] {
            let law = step_law_exact(WalkKind::Rademacher, k, 3).unwrap();
            let bound = uniformity_decay_bound(3, k).unwrap();
            for &p in &law.probabilities {
                assert!((p - 1.0 / 3.0).abs() <= bound, "k={k}");
            }
        }
    }

    #[test]
    fn decay_bound_values() {
        let b = uniformity_decay_bound(3, 1).unwrap();
        let direct = (2.0 / 3.0) * (1.0 - PI * PI / 27.0);
        assert!((b - direct).abs() < 1e-15);
        assert!((b - 0.42297).abs() < 1e-4);

        // monotone decay to zero
        let mut prev = f64::INFINITY;
        for k in 1..200 {
            let b = uniformity_decay_bound(3, k).unwrap();
            assert!(b < prev && b > 0.0);
            prev = b;
        }

        let b100 = uniformity_decay_bound(5, 100).unwrap();
        let direct100 = 0.8 * (1.0 - PI * PI / 75.0).powi(100);
        assert!((b100 - direct100).abs() < 1e-18);
        let law = step_law_exact(WalkKind::Rademacher, 100, 5).unwrap();
        assert!(law.max_deviation_from_uniform() <= b100);
    }

    #[test]
    fn parity_support_for_even_modulus() {
        for k in 1u64..=9 {
            let law = step_law_exact(WalkKind::Rademacher, k, 4).unwrap();
            for a in 0..4u64 {
                if a % 2 != k % 2 {
                    assert!(
                        law.probabilities[a as usize].abs() < 1e-13,
                        "k={k} a={a} got {}",
                        law.probabilities[a as usize]
                    );
                }
            }
        }
    }

    #[test]
    fn variance_hand_values() {
        let cases = [
            (WalkKind::Rademacher, 1, 2, 0.5),
            (WalkKind::Rademacher, 2, 2, 0.0),
            (WalkKind::Rademacher, 2, 3, 1.0 / 6.0),
            (WalkKind::Bernoulli01, 2, 2, 0.25),
        ];
        for &(kind, n, m, expect) in &cases {
            let v = occupation_variance_exact(kind, n, m).unwrap();
            assert!(
                (v - expect).abs() < 1e-13,
                "{kind:?} N={n} m={m}: got {v}, want {expect}"
            );
            let e = occupation_variance_enumerated(kind, n, m).unwrap();
            assert!((e.total - expect).abs() < 1e-13);
        }
    }

    #[test]
    fn enumeration_hand_values() {
        let e = occupation_variance_enumerated(WalkKind::Rademacher, 1, 3).unwrap();
        assert!((e.total - 2.0 / 3.0).abs() < 1e-15);
        let expect = [1.0 / 9.0, 5.0 / 18.0, 5.0 / 18.0];
        for (a, &x) in expect.iter().enumerate() {
            assert!((e.per_residue[a] - x).abs() < 1e-15, "a={a}");
        }

        let b = occupation_variance_enumerated(WalkKind::Bernoulli01, 1, 2).unwrap();
        assert!((b.total - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_enumeration_small() {
        for kind in [WalkKind::Rademacher, WalkKind::Bernoulli01] {
            for m in 2..=6u64 {
                for n in 1..=12u64 {
                    let exact = occupation_variance_exact(kind, n, m).unwrap();
                    let enumerated = occupation_variance_enumerated(kind, n, m).unwrap();
                    assert!(
                        (exact - enumerated.total).abs() < 1e-12,
                        "{kind:?} N={n} m={m}: {exact} vs {}",
                        enumerated.total
                    );
                }
            }
        }
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let a = occupation_variance_monte_carlo(WalkKind::Rademacher, 8, 3, 500, 42).unwrap();
        let b = occupation_variance_monte_carlo(WalkKind::Rademacher, 8, 3, 500, 42).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
        let c = occupation_variance_monte_carlo(WalkKind::Rademacher, 8, 3, 500, 43).unwrap();
        assert_ne!(a.mean.to_bits(), c.mean.to_bits());
    }

    #[test]
    fn monte_carlo_matches_exact_within_four_standard_errors() {
        // N=2, m=3 is degenerate: every walk yields the same statistic, so
        // the standard error is 0 and only round-off separates the two
        // routes.
        let exact = occupation_variance_exact(WalkKind::Rademacher, 2, 3).unwrap();
        let mc =
            occupation_variance_monte_carlo(WalkKind::Rademacher, 2, 3, 1_000_000, 1).unwrap();
        assert!(
            (mc.mean - exact).abs() <= 4.0 * mc.standard_error + 1e-12,
            "mc {} vs exact {exact} (se {})",
            mc.mean,
            mc.standard_error
        );

        let exact = occupation_variance_exact(WalkKind::Bernoulli01, 9, 4).unwrap();
        let mc =
            occupation_variance_monte_carlo(WalkKind::Bernoulli01, 9, 4, 200_000, 7).unwrap();
        assert!(mc.standard_error > 0.0);
        assert!(
            (mc.mean - exact).abs() <= 4.0 * mc.standard_error,
            "mc {} vs exact {exact} (se {})",
            mc.mean,
            mc.standard_error
        );
    }

    #[test]
    fn monte_carlo_rejects_tiny_trial_counts() {
        assert!(occupation_variance_monte_carlo(WalkKind::Rademacher, 2, 3, 99, 1).is_err());
    }

    #[test]
    fn roots_of_unity_invariants() {
        let cache = RootOfUnityCache::new(12).unwrap();
        assert_eq!(cache.root(0), Complex64::new(1.0, 0.0));
        for t in 0..12 {
            assert!((cache.root(t).norm() - 1.0).abs() < 1e-12);
        }
        assert_eq!(cache.root(13), cache.root(1));
    }
}
