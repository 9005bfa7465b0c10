//! Twisted character sums Σ_{n∈I} χ_p(P1(n))·e_p(P2(n)) over subintervals
//! of {0,…,p−1}, with Weil-bound verification: complete sums against D√p,
//! incomplete sums against 2D√p·log p.

use crate::error::{Error, Result};
use crate::finite_field::{legendre_symbol_residue, FpPolynomial, PrimeModulus};
use crate::walk_model::RootOfUnityCache;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Direct-evaluation cap: O(|I|·log p) per sum.
pub const MAX_DIRECT_PRIME: u64 = 10_000_000;

/// Phase-table cap; larger moduli fall back to per-term trig.
pub const MAX_PHASE_TABLE: u64 = 1 << 22;

/// A validated twisted-sum instance.
///
/// `P1` must be square-free of degree ≥ 1 (the multiplicative factor is
/// genuinely oscillating); `P2` may be zero. `D` is the degree sum driving
/// both bound shapes.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedSumSpec {
    modulus: PrimeModulus,
    p1: FpPolynomial,
    p2: FpPolynomial,
    start: u64,
    length: u64,
    degree_sum: u32,
}

impl TwistedSumSpec {
    pub fn new(
        p1: FpPolynomial,
        p2: FpPolynomial,
        start: u64,
        length: u64,
    ) -> Result<TwistedSumSpec> {
        let modulus = p1.modulus();
        if p2.modulus() != modulus {
            return Err(Error::invalid("P1 and P2 must share the modulus"));
        }
        let p = modulus.value();
        if !p1.is_squarefree()? {
            return Err(Error::invalid("P1 must be square-free of degree >= 1"));
        }
        if start >= p || length < 1 || start + length > p {
            return Err(Error::invalid(
                "interval must be a nonempty contiguous subset of [0, p)",
            ));
        }
        let degree_sum = p1.degree().unwrap() as u32 + p2.degree().unwrap_or(0) as u32;
        Ok(TwistedSumSpec {
            modulus,
            p1,
            p2,
            start,
            length,
            degree_sum,
        })
    }

    /// Full-range instance I = {0,…,p−1}.
    pub fn complete(p1: FpPolynomial, p2: FpPolynomial) -> Result<TwistedSumSpec> {
        let p = p1.modulus().value();
        Self::new(p1, p2, 0, p)
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn interval(&self) -> (u64, u64) {
        (self.start, self.length)
    }

    #[inline]
    pub fn is_complete(&self) -> bool {
        self.length == self.modulus.value()
    }

    /// D = deg P1 + deg P2.
    #[inline]
    pub fn degree_sum(&self) -> u32 {
        self.degree_sum
    }
}

/// Direct evaluation of the twisted sum.
pub fn twisted_char_sum(spec: &TwistedSumSpec) -> Result<Complex64> {
    let p = spec.modulus.value();
    if p > MAX_DIRECT_PRIME {
        return Err(Error::resource(format!(
            "direct evaluation capped at p <= {MAX_DIRECT_PRIME}"
        )));
    }
    let roots = if p <= MAX_PHASE_TABLE {
        Some(RootOfUnityCache::new(p)?)
    } else {
        None
    };
    Ok(sum_with_roots(spec, roots.as_ref()))
}

/// Direct evaluation reusing a caller-held phase table (must match p).
pub fn twisted_char_sum_with_roots(
    spec: &TwistedSumSpec,
    roots: &RootOfUnityCache,
) -> Result<Complex64> {
    if roots.modulus() != spec.modulus.value() {
        return Err(Error::invalid("phase table modulus mismatch"));
    }
    Ok(sum_with_roots(spec, Some(roots)))
}

fn sum_with_roots(spec: &TwistedSumSpec, roots: Option<&RootOfUnityCache>) -> Complex64 {
    let p = spec.modulus.value();
    let twist = !spec.p2.is_zero();
    let mut acc = Complex64::new(0.0, 0.0);
    for n in spec.start..spec.start + spec.length {
        let sym = legendre_symbol_residue(spec.p1.eval(n), spec.modulus);
        if sym == 0 {
            continue;
        }
        let phase = if twist {
            let t = spec.p2.eval(n);
            match roots {
                Some(cache) => cache.root(t),
                None => {
                    let theta = 2.0 * PI * t as f64 / p as f64;
                    Complex64::new(theta.cos(), theta.sin())
                }
            }
        } else {
            Complex64::new(1.0, 0.0)
        };
        if sym == 1 {
            acc += phase;
        } else {
            acc -= phase;
        }
    }
    acc
}

/// Outcome of one bound verification.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeilCheck {
    pub value_re: f64,
    pub value_im: f64,
    pub modulus_of_sum: f64,
    pub bound: f64,
    /// bound − |S|; both bounds are theorems, so a negative margin means an
    /// implementation bug.
    pub margin: f64,
    pub complete: bool,
}

/// Evaluates the sum and checks it against the applicable bound:
/// D√p for complete intervals, 2D√p·log p for incomplete ones.
pub fn weil_bound_check(spec: &TwistedSumSpec) -> Result<WeilCheck> {
    let value = twisted_char_sum(spec)?;
    Ok(bound_report(spec, value))
}

pub fn weil_bound_check_with_roots(
    spec: &TwistedSumSpec,
    roots: &RootOfUnityCache,
) -> Result<WeilCheck> {
    let value = twisted_char_sum_with_roots(spec, roots)?;
    Ok(bound_report(spec, value))
}

fn bound_report(spec: &TwistedSumSpec, value: Complex64) -> WeilCheck {
    let p = spec.modulus.value() as f64;
    let d = spec.degree_sum as f64;
    let complete = spec.is_complete();
    let bound = if complete {
        d * p.sqrt()
    } else {
        2.0 * d * p.sqrt() * p.ln()
    };
    let modulus_of_sum = value.norm();
    WeilCheck {
        value_re: value.re,
        value_im: value.im,
        modulus_of_sum,
        bound,
        margin: bound - modulus_of_sum,
        complete,
    }
}

/// Summary of the exhaustive small-prime sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeilSweepReport {
    pub max_p: u64,
    pub checks: u64,
    pub min_margin: f64,
    pub min_margin_case: String,
    pub all_nonnegative: bool,
}

/// Checks every monic square-free P1 of degree ≤ 2 against P2 ∈ {0, X, X²}
/// on the full interval and the first half, for every odd prime p ≤ max_p.
///
/// This is the executable content of both bound statements: a negative
/// margin anywhere indicates a bug in the evaluator or the bounds.
pub fn weil_sweep(max_p: u64) -> Result<WeilSweepReport> {
    if max_p < 3 {
        return Err(Error::invalid("sweep needs max_p >= 3"));
    }
    let mut checks = 0u64;
    let mut min_margin = f64::INFINITY;
    let mut min_case = String::new();
    for p in 3..=max_p {
        if !crate::finite_field::is_prime_u64(p) {
            continue;
        }
        let modulus = PrimeModulus::new(p)?;
        let roots = RootOfUnityCache::new(p)?;
        let twists = [
            FpPolynomial::zero(modulus),
            FpPolynomial::x(modulus),
            FpPolynomial::new(modulus, vec![0, 0, 1])?,
        ];
        let mut p1_candidates: Vec<FpPolynomial> = Vec::new();
        for c in 0..p {
            p1_candidates.push(FpPolynomial::new(modulus, vec![c, 1])?);
        }
        for b in 0..p {
            for c in 0..p {
                // X² + bX + c is square-free iff b² − 4c ≠ 0 (p odd)
                let disc = (b * b % p + 4 * (p - c) % p) % p;
                if disc == 0 {
                    continue;
                }
                p1_candidates.push(FpPolynomial::new(modulus, vec![c, b, 1])?);
            }
        }
        for p1 in &p1_candidates {
            for p2 in &twists {
                for length in [p, p / 2] {
                    let spec = TwistedSumSpec::new(p1.clone(), p2.clone(), 0, length)?;
                    let check = weil_bound_check_with_roots(&spec, &roots)?;
                    checks += 1;
                    if check.margin < min_margin {
                        min_margin = check.margin;
                        min_case = format!("p={p} P1={p1} P2={p2} |I|={length}");
                    }
                }
            }
        }
    }
    Ok(WeilSweepReport {
        max_p,
        checks,
        min_margin,
        min_margin_case: min_case,
        all_nonnegative: min_margin >= 0.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn modulus(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn orthogonality_full_sum_vanishes() {
        let m = modulus(7);
        let spec = TwistedSumSpec::complete(FpPolynomial::x(m), FpPolynomial::zero(m)).unwrap();
        let s = twisted_char_sum(&spec).unwrap();
        assert!(s.norm() < 1e-12);
    }

    #[test]
    fn gauss_sum_modulus() {
        let m = modulus(5);
        let spec = TwistedSumSpec::complete(FpPolynomial::x(m), FpPolynomial::x(m)).unwrap();
        let s = twisted_char_sum(&spec).unwrap();
        assert!((s.norm() - 5f64.sqrt()).abs() < 1e-12);
        let check = weil_bound_check(&spec).unwrap();
        assert!(check.complete);
        assert!((check.bound - 2.0 * 5f64.sqrt()).abs() < 1e-12);
        assert!((check.margin - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn short_interval_hand_value() {
        // χ_7(1) + χ_7(2) + χ_7(3) = 1 + 1 − 1
        let m = modulus(7);
        let spec =
            TwistedSumSpec::new(FpPolynomial::x(m), FpPolynomial::zero(m), 1, 3).unwrap();
        let s = twisted_char_sum(&spec).unwrap();
        assert!((s.re - 1.0).abs() < 1e-12 && s.im.abs() < 1e-12);
        assert!(!weil_bound_check(&spec).unwrap().complete);
    }

    #[test]
    fn spec_validation() {
        let m = modulus(11);
        let sq = FpPolynomial::new(m, vec![0, 0, 1]).unwrap();
        assert!(TwistedSumSpec::complete(sq, FpPolynomial::zero(m)).is_err());
        let x = FpPolynomial::x(m);
        assert!(TwistedSumSpec::new(x.clone(), FpPolynomial::zero(m), 0, 12).is_err());
        assert!(TwistedSumSpec::new(x.clone(), FpPolynomial::zero(m), 11, 1).is_err());
        assert!(TwistedSumSpec::new(x.clone(), FpPolynomial::zero(m), 5, 0).is_err());
        assert!(TwistedSumSpec::new(x, FpPolynomial::zero(m), 5, 7).is_err());
    }

    #[test]
    fn conjugation_symmetry() {
        let m = modulus(13);
        let p1 = FpPolynomial::new(m, vec![1, 1]).unwrap();
        let p2 = FpPolynomial::new(m, vec![2, 0, 3]).unwrap();
        let spec = TwistedSumSpec::new(p1.clone(), p2.clone(), 2, 9).unwrap();
        let neg = TwistedSumSpec::new(p1, p2.neg(), 2, 9).unwrap();
        let s = twisted_char_sum(&spec).unwrap();
        let t = twisted_char_sum(&neg).unwrap();
        assert!((s.conj() - t).norm() < 1e-12);
    }

    #[test]
    fn interval_additivity() {
        let m = modulus(41);
        let p1 = FpPolynomial::new(m, vec![3, 1, 1]).unwrap();
        let p2 = FpPolynomial::x(m);
        let whole = TwistedSumSpec::new(p1.clone(), p2.clone(), 5, 20).unwrap();
        let left = TwistedSumSpec::new(p1.clone(), p2.clone(), 5, 8).unwrap();
        let right = TwistedSumSpec::new(p1, p2, 13, 12).unwrap();
        let s = twisted_char_sum(&whole).unwrap();
        let a = twisted_char_sum(&left).unwrap();
        let b = twisted_char_sum(&right).unwrap();
        assert!((s - (a + b)).norm() < 1e-12);
    }

    #[test]
    fn completion_partition_identity() {
        let m = modulus(101);
        let p1 = FpPolynomial::new(m, vec![7, 1]).unwrap();
        let p2 = FpPolynomial::new(m, vec![0, 2]).unwrap();
        let full =
            twisted_char_sum(&TwistedSumSpec::complete(p1.clone(), p2.clone()).unwrap()).unwrap();
        let block = 4u64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut start = 0u64;
        while start < 101 {
            let len = block.min(101 - start);
            let spec = TwistedSumSpec::new(p1.clone(), p2.clone(), start, len).unwrap();
            acc += twisted_char_sum(&spec).unwrap();
            start += len;
        }
        assert!((full - acc).norm() < 1e-12);
    }

    #[test]
    fn sweep_tiny_primes() {
        let report = weil_sweep(13).unwrap();
        assert!(report.all_nonnegative, "{report:?}");
        assert!(report.checks > 0);
    }
}
