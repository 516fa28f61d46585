//! Exact closed forms for `a_n = floor(1 / sum_{i>n} 1/P(i))` where `P` is a
//! rational polynomial of degree `k >= 2`.
//!
//! The pipeline is:
//!
//! 1. [`solver`] finds the coefficient tuple `(c_0, .., c_{k-1})` of the
//!    degree-`(k-1)` bounding polynomial by a triangular elimination, and
//!    classifies what happens when the last coordinate is used unchanged.
//! 2. [`closed_form`] splits `n` into residue classes modulo the lcm of the
//!    denominators of `c_0, .., c_{k-2}`, attaches an integer-valued
//!    polynomial to each class and certifies a threshold beyond which the
//!    formula provably holds.
//! 3. [`oracle`] computes `a_n` independently from rigorous rational
//!    enclosures of the tail sum.
//!
//! The polynomial and solver layers are generic over [`Scalar`]; everything
//! that needs floors, denominators or certification is pinned to the exact
//! [`Rational`] type.

pub mod algebra;
pub mod bounds;
pub mod cli;
pub mod closed_form;
pub mod explorer;
pub mod oracle;
pub mod parse;
pub mod solver;

pub use algebra::{rat, Polynomial, Rational, Scalar};

/// Exact rational-coefficient polynomial, the working type of the pipeline.
pub type Poly = Polynomial<Rational>;
/// Machine-precision polynomial, for approximate exploration only.
pub type Poly64 = Polynomial<f64>;
pub type Poly32 = Polynomial<f32>;
/// Fixed-width exact rationals; overflow panics.
pub type SmallRational = num_rational::Ratio<i64>;
pub type SmallPoly = Polynomial<SmallRational>;
