//! Exact computation of restricted partition functions.
//!
//! For a vector `a = (a_1, ..., a_r)` of positive integers, the restricted
//! partition function `p_a(n)` counts solutions of
//! `a_1 x_1 + ... + a_r x_r = n` in nonnegative integers. It is a
//! quasi-polynomial of degree `r - 1` whose coefficients are periodic with
//! period `D`, any common multiple of the parts. This crate computes those
//! coefficients exactly by solving a linear system whose matrix holds scaled
//! Bernoulli polynomial values and whose right-hand side holds
//! Bernoulli-Barnes numbers, and certifies every result against an
//! independent dynamic-programming count.
//!
//! Module map:
//! - [`exact`]: big rationals, combinatorics, primality, p-adic valuations
//! - [`bernoulli`]: Bernoulli numbers/polynomials and their integer scalings
//! - [`barnes`]: Bernoulli-Barnes numbers and partition instances
//! - [`alpha`]: exponent-sequence constructions that make the system solvable
//! - [`linsys`]: the linear system, exact determinants, and the solver
//! - [`oracle`]: brute-force counting and interpolation ground truth

pub mod alpha;
pub mod barnes;
pub mod bernoulli;
pub mod exact;
pub mod linsys;
pub mod oracle;

pub use alpha::{AlphaSequence, Provenance, SearchOutcome};
pub use barnes::PartitionInstance;
pub use exact::{Rat, Valuation};
pub use linsys::QuasiPolynomial;
