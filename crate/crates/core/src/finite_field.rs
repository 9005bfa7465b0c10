//! Exact arithmetic in ℤ/pℤ: Legendre symbols via the binary Jacobi
//! algorithm, dense polynomials with derivative/gcd utilities, and the
//! square-free / perfect-square tests that gate every statistic downstream.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest admissible modulus (exclusive). Products of two residues below
/// this bound fit in `u128`, and residues fit in `i64`.
pub const MAX_PRIME: u64 = 1 << 62;

/// An odd prime modulus with precomputed metadata for symbol evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeModulus {
    p: u64,
    half_exponent: u64,
    bits: u32,
}

impl PrimeModulus {
    /// Validates that `p` is an odd prime in `[3, 2^62)`.
    ///
    /// Primality is decided by a deterministic Miller–Rabin test whose base
    /// set is exact for the full 64-bit range.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= MAX_PRIME {
            return Err(Error::invalid(format!("modulus {p} outside [3, 2^62)")));
        }
        if p % 2 == 0 {
            return Err(Error::invalid(format!("modulus {p} is even")));
        }
        if !is_prime_u64(p) {
            return Err(Error::invalid(format!("modulus {p} is not prime")));
        }
        Ok(PrimeModulus {
            p,
            half_exponent: (p - 1) / 2,
            bits: 64 - p.leading_zeros(),
        })
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.p
    }

    /// (p − 1)/2, the Euler-criterion exponent.
    #[inline]
    pub fn half_exponent(self) -> u64 {
        self.half_exponent
    }

    #[inline]
    pub fn bit_length(self) -> u32 {
        self.bits
    }

    /// Reduces a signed integer into `[0, p)`.
    #[inline]
    pub fn reduce_signed(self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the 64-bit range.
///
/// The witness set {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37} is known to
/// be exact for all n < 3.3·10^24, which covers every `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Binary Jacobi symbol (a|n) for odd n ≥ 1.
fn jacobi(mut a: u64, mut n: u64) -> i8 {
    debug_assert!(n % 2 == 1 && n >= 1);
    let mut sign: i8 = 1;
    a %= n;
    while a != 0 {
        let z = a.trailing_zeros();
        a >>= z;
        // (2|n) = −1 iff n ≡ ±3 (mod 8)
        if z & 1 == 1 {
            let r = n & 7;
            if r == 3 || r == 5 {
                sign = -sign;
            }
        }
        // quadratic reciprocity for odd a, n
        if (a & 3) == 3 && (n & 3) == 3 {
            sign = -sign;
        }
        std::mem::swap(&mut a, &mut n);
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Legendre symbol (n|p) ∈ {−1, 0, +1}.
///
/// `n` is reduced mod p first, so negative and composite inputs are fine.
/// Computed by the gcd-like Jacobi reduction, valid because p is prime;
/// see [`legendre_symbol_euler`] for the independent slow path.
#[inline]
pub fn legendre_symbol(n: i64, p: PrimeModulus) -> i8 {
    jacobi(p.reduce_signed(n), p.value())
}

/// Symbol of a residue already reduced into `[0, p)`.
#[inline]
pub fn legendre_symbol_residue(n: u64, p: PrimeModulus) -> i8 {
    debug_assert!(n < p.value());
    jacobi(n, p.value())
}

/// Euler-criterion evaluation n^((p−1)/2) mod p, mapped to {−1, 0, +1}.
///
/// Slow path kept as an independent oracle for the Jacobi implementation.
pub fn legendre_symbol_euler(n: i64, p: PrimeModulus) -> i8 {
    let r = p.reduce_signed(n);
    if r == 0 {
        return 0;
    }
    let e = pow_mod(r, p.half_exponent(), p.value());
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, p.value() - 1);
        -1
    }
}

/// A dense polynomial over ℤ/pℤ.
///
/// Coefficients are stored reduced, lowest degree first, with trailing
/// zeros trimmed; the zero polynomial is the empty vector. The degree is
/// capped below p so that formal derivatives of nonconstant polynomials
/// never vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpPolynomial {
    modulus: PrimeModulus,
    coeffs: Vec<u64>,
}

impl FpPolynomial {
    /// Builds a polynomial from coefficients (lowest degree first),
    /// reducing them mod p and trimming trailing zeros.
    pub fn new(modulus: PrimeModulus, coeffs: Vec<u64>) -> Result<Self> {
        let p = modulus.value();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() as u64 > p {
            return Err(Error::invalid(format!(
                "degree {} not below modulus {p}",
                coeffs.len() - 1
            )));
        }
        Ok(FpPolynomial { modulus, coeffs })
    }

    /// Builds from signed integer coefficients, e.g. CLI input `-1,0,1`.
    pub fn from_signed(modulus: PrimeModulus, coeffs: &[i64]) -> Result<Self> {
        let reduced = coeffs.iter().map(|&c| modulus.reduce_signed(c)).collect();
        Self::new(modulus, reduced)
    }

    pub fn zero(modulus: PrimeModulus) -> Self {
        FpPolynomial {
            modulus,
            coeffs: Vec::new(),
        }
    }

    /// The identity polynomial X.
    pub fn x(modulus: PrimeModulus) -> Self {
        FpPolynomial {
            modulus,
            coeffs: vec![0, 1],
        }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    #[inline]
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    #[inline]
    pub fn leading_coeff(&self) -> Option<u64> {
        self.coeffs.last().copied()
    }

    #[inline]
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation of F(x) mod p for x ∈ [0, p).
    pub fn eval(&self, x: u64) -> u64 {
        let p = self.modulus.value();
        debug_assert!(x < p);
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = mul_mod(acc, x, p);
            acc += c;
            if acc >= p {
                acc -= p;
            }
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Self {
        let p = self.modulus.value();
        let coeffs: Vec<u64> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, (i as u64) % p, p))
            .collect();
        // constructor re-trims; degree only shrinks
        Self::new(self.modulus, coeffs).expect("derivative degree shrinks")
    }

    /// Product, rejecting results whose degree would reach p.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        assert_eq!(self.modulus, other.modulus, "mixed moduli");
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.modulus));
        }
        let p = self.modulus.value();
        let mut acc = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let t = acc[i + j] + mul_mod(a, b, p);
                acc[i + j] = if t >= p { t - p } else { t };
            }
        }
        Self::new(self.modulus, acc)
    }

    /// F(aX + b), used to build shifted-factor products.
    pub fn compose_linear(&self, a: u64, b: u64) -> Result<Self> {
        let m = self.modulus;
        let inner = Self::new(m, vec![b, a])?;
        let mut acc = Self::zero(m);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&inner)?;
            acc = acc.add_scalar(c);
        }
        Ok(acc)
    }

    fn add_scalar(mut self, c: u64) -> Self {
        if c == 0 {
            return self;
        }
        let p = self.modulus.value();
        if self.coeffs.is_empty() {
            self.coeffs.push(c);
            return self;
        }
        let t = self.coeffs[0] + c;
        self.coeffs[0] = if t >= p { t - p } else { t };
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
        self
    }

    /// Scales to leading coefficient 1. `None` for the zero polynomial.
    pub fn monic(&self) -> Option<Self> {
        let p = self.modulus.value();
        let lc = self.leading_coeff()?;
        if lc == 1 {
            return Some(self.clone());
        }
        let inv = pow_mod(lc, p - 2, p);
        let coeffs = self.coeffs.iter().map(|&c| mul_mod(c, inv, p)).collect();
        Some(FpPolynomial {
            modulus: self.modulus,
            coeffs,
        })
    }

    /// Euclidean division; `None` when the divisor is zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        assert_eq!(self.modulus, divisor.modulus, "mixed moduli");
        let p = self.modulus.value();
        let d_deg = divisor.degree()?;
        let lc_inv = pow_mod(divisor.leading_coeff().unwrap(), p - 2, p);
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Some((Self::zero(self.modulus), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - d_deg];
        while rem.len() > d_deg {
            let r_deg = rem.len() - 1;
            let q = mul_mod(*rem.last().unwrap(), lc_inv, p);
            if q != 0 {
                quot[r_deg - d_deg] = q;
                for (i, &dc) in divisor.coeffs.iter().enumerate() {
                    let idx = r_deg - d_deg + i;
                    let sub = mul_mod(q, dc, p);
                    rem[idx] = if rem[idx] >= sub {
                        rem[idx] - sub
                    } else {
                        rem[idx] + p - sub
                    };
                }
            }
            rem.pop();
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.len() <= d_deg {
                break;
            }
        }
        let quotient = Self::new(self.modulus, quot).expect("quotient degree shrinks");
        let remainder = Self::new(self.modulus, rem).expect("remainder degree shrinks");
        Some((quotient, remainder))
    }

    /// Monic gcd; zero only when both inputs are zero.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).unwrap();
            a = b;
            b = r;
        }
        a.monic().unwrap_or(a)
    }

    /// True iff gcd(F, F′) is constant.
    ///
    /// Rejects the zero polynomial and constants: square-freeness is only
    /// meaningful for the degree ≥ 1 inputs the statistics accept.
    pub fn is_squarefree(&self) -> Result<bool> {
        match self.degree() {
            None => Err(Error::invalid("square-free test on zero polynomial")),
            Some(0) => Err(Error::invalid("square-free test on constant polynomial")),
            Some(_) => {
                let g = self.gcd(&self.derivative());
                Ok(g.degree() == Some(0))
            }
        }
    }

    /// True iff H = c·G(X)² with c a square in F_p, i.e. H is the square of
    /// a polynomial.
    ///
    /// Uses square-free decomposition by repeated derivative gcds (Yun's
    /// algorithm, valid here because deg H < p): every multiplicity must be
    /// even and the leading coefficient a quadratic residue.
    pub fn is_perfect_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::invalid("perfect-square test on zero polynomial"));
        }
        let lc = self.leading_coeff().unwrap();
        if legendre_symbol_residue(lc, self.modulus) != 1 {
            return Ok(false);
        }
        if self.degree() == Some(0) {
            return Ok(true);
        }
        let f = self.monic().unwrap();
        let df = f.derivative();
        debug_assert!(!df.is_zero(), "deg < p keeps derivatives nonzero");
        // Yun: peel multiplicity classes; any factor of odd multiplicity
        // rules out a square.
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).unwrap().0;
        let mut d = {
            let c = df.div_rem(&a0).unwrap().0;
            c.sub(&b.derivative())
        };
        let mut mult = 1usize;
        while b.degree() != Some(0) {
            let a_i = b.gcd(&d);
            if mult % 2 == 1 && a_i.degree() != Some(0) {
                return Ok(false);
            }
            b = b.div_rem(&a_i).unwrap().0;
            let c = d.div_rem(&a_i).unwrap().0;
            d = c.sub(&b.derivative());
            mult += 1;
        }
        Ok(true)
    }

    /// Negation −F.
    pub fn neg(&self) -> Self {
        let p = self.modulus.value();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| if c == 0 { 0 } else { p - c })
            .collect();
        FpPolynomial {
            modulus: self.modulus,
            coeffs,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        let p = self.modulus.value();
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs: Vec<u64> = (0..n)
            .map(|i| {
                let a = self.coeff(i);
                let b = other.coeff(i);
                if a >= b {
                    a - b
                } else {
                    a + p - b
                }
            })
            .collect();
        Self::new(self.modulus, coeffs).expect("difference degree bounded")
    }
}

impl std::fmt::Display for FpPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c == 1 => write!(f, "X")?,
                1 => write!(f, "{c}*X")?,
                _ if c == 1 => write!(f, "X^{i}")?,
                _ => write!(f, "{c}*X^{i}")?,
            }
        }
        Ok(())
    }
}
