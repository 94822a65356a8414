//! Exact classification of cyclic p-gonal branch data.
//!
//! A cyclic p-gonal surface of genus `g` is a degree-`p` cyclic cover of the
//! sphere branched over `k = 2g/(p-1) + 2` points. Its topological type is an
//! exponent vector `(r_1, ..., r_k)` with `sum r_i = 0 mod p`, taken up to
//! permutation and multiplication by a unit. This crate enumerates those
//! classes, decides which strata are isolated in the branch locus, builds
//! explicit extension witnesses for the ones that are not, and assembles the
//! per-genus catalog.
//!
//! Everything is exact. Rational quantities (hyperbolic areas) go through
//! [`ExactRational`], which is generic over the backing integer; [`Rational`]
//! is the alias used throughout the crate.

pub mod arith;
pub mod atlas;
pub mod error;
pub mod extension;
pub mod isolation;
pub mod monodromy;
pub mod rational;
pub mod signature;

pub use arith::{is_prime, lcm_half_primes, mult_order, units_of_prime_order, PrimeModulus, Unit};
pub use error::{Error, Result};
pub use rational::{ExactInt, ExactRational};

/// Rational carrier used for all areas in the crate.
pub type Rational = ExactRational<i64>;
/// Wider carrier for callers that push areas past `i64`.
pub type Rational128 = ExactRational<i128>;
/// Narrow carrier, mostly useful for overflow testing.
pub type Rational32 = ExactRational<i32>;

/// Default node budget for exhaustive enumerations.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
