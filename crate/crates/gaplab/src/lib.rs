//! Desk-scale laboratory for exact IQP-style sampling distributions and
//! hashing-based approximate counting.
//!
//! The crate has five subsystems:
//!
//! - [`gf2poly`]: multilinear polynomials over F2, with exact signed gap sums
//!   `gap(f) = Σ_x (-1)^{f(x)}` and full gap spectra via a fast
//!   Walsh–Hadamard transform.
//! - [`circuits`]: three circuit families (diagonal-gate IQP, IQP plus a
//!   Boolean-circuit phase oracle, and 3-CNF compiled to reversible
//!   Toffoli logic with its Clifford+T cost), each with two independent
//!   routes to the exact output distribution.
//! - [`hashing`]: the affine Toeplitz hash family with exhaustive
//!   pairwise-independence checks and leftover-hash experiments.
//! - [`counting`]: threshold tests `A_k` over a pluggable exact counting
//!   oracle, and a binary-search multiplicative estimator for the output
//!   probabilities of finite-randomness samplers.
//! - [`experiments`]: seeded Monte-Carlo validation of the anti-concentration
//!   bound, the Markov tail step, and the end-to-end chain inequality against
//!   mock adversarial samplers.
//!
//! Integer quantities are exact (`i64`/`i128`, rationals where division is
//! needed); analog quantities are generic over [`scalar::Real`] with the
//! `f64` aliases below as defaults.

pub mod bits;
pub mod circuits;
pub mod counting;
pub mod error;
pub mod experiments;
pub mod gf2poly;
pub mod hashing;
pub mod limits;
pub mod report;
pub mod scalar;
pub mod seeds;

pub use bits::BitVector;
pub use error::{Error, Result};
pub use scalar::Real;

/// Default analog scalar.
pub type DefaultReal = f64;
/// Default complex amplitude.
pub type Amplitude = num_complex::Complex<DefaultReal>;
/// Exact probability with dyadic denominator.
pub type ExactProb = num_rational::Ratio<i64>;
