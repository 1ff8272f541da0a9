//! Exact scalars, matrices and sums of roots of unity.

pub mod cyclo;
pub mod intlin;
pub mod matrix;
pub mod rational;

pub use cyclo::{CycloError, CyclotomicSum};
pub use intlin::{kernel_saturated, solve_affine};
pub use matrix::{IntMatrix, Matrix, RatMatrix};
pub use rational::{int, parse_rational, rat, RatVector, Rational};
