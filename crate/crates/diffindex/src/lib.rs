//! Difference-index analysis for difference algebraic systems.
//!
//! Given a system of difference polynomials over ℚ (with the identity
//! endomorphism on constants), this crate computes its corank sequence
//! through pseudo-Jacobian matrices, the difference index ω, the order of
//! the associated ideal, Jacobi-type bounds on ω + ord, a Hilbert–Levin
//! regularity table, and explicit ideal-membership certificates with
//! transform-order and degree bookkeeping. A constraint-chain oracle via
//! elimination ideals cross-checks ω independently.
//!
//! All arithmetic is exact. The analyses assume the input is quasi-regular
//! with a reflexive, prime difference ideal; the assumptions themselves are
//! not decidable here, but the `check` pipeline verifies the Jacobian rank
//! conditions for finitely many levels and the rank elimination aborts on
//! zero-divisor symptoms.

pub mod cli;
pub mod groebner;
pub mod index;
pub mod jacobi;
pub mod membership;
pub mod parser;
pub mod poly;
pub mod pseudo_jacobian;

pub use poly::{Monomial, Polynomial, System, SystemError, Variable};
