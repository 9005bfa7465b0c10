//! Character-sum walk statistics over finite fields, the matching exact
//! random-walk model on ℤ/mℤ, and oracle-grade verification utilities.
//!
//! The crate is organized around five subsystems:
//!
//! * [`finite_field`] — Legendre/Jacobi symbols and polynomial arithmetic
//!   over ℤ/pℤ (square-free and perfect-square tests included);
//! * [`walk_model`] — exact k-step laws and occupation-variance identities
//!   for the ±1 and 0/1 walks reduced mod m, plus seeded Monte Carlo;
//! * [`char_walk`] — prefix character sums S(F,k) = Σ_{n≤k} χ_p(F(n)),
//!   their residue-class distributions, block sign-pattern censuses, and
//!   equidistribution budget checks;
//! * [`prime_walk`] — the fixed-length walk Σ_{j≤k} χ_p(q_j) as p ranges
//!   over primes, with a segmented sieve;
//! * [`exp_sums`] — twisted character sums Σ χ_p(P1(n))·e_p(P2(n)) and
//!   Weil-bound verification.
//!
//! [`oracles`] holds deliberately naive reference implementations
//! (enumeration, convolution, trial division) used to cross-check the fast
//! paths; they share no code with what they verify.

pub mod char_walk;
pub mod error;
pub mod exp_sums;
pub mod finite_field;
pub mod oracles;
pub mod prime_walk;
pub mod walk_model;

pub use char_walk::{
    equidistribution_check, EquidistributionReport, PatternCensus, PolyTemplate,
    ResidueDistribution, StatisticKind,
};
pub use error::{Error, Result};
pub use exp_sums::{TwistedSumSpec, WeilCheck};
pub use finite_field::{legendre_symbol, FpPolynomial, PrimeModulus};
pub use prime_walk::{PrimeSignCensus, PrimeTable, PrimeWalkResult};
pub use walk_model::{MonteCarloEstimate, RootOfUnityCache, WalkKind, WalkLaw};
