//! Exact scalars and dense univariate polynomials.

mod poly;
mod rational;
mod scalar;

pub use poly::Polynomial;
pub use rational::{
    approx, binomial, ceil_int, floor_int, int, is_integer, lcm_denominators, parse_rational, rat,
    Rational,
};
pub use scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("binomial C({n}, {r}) requires 0 <= r <= n")]
    BinomialRange { n: i64, r: i64 },
    #[error("not a rational literal: {0:?}")]
    BadRational(String),
}
