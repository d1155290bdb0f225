//! Exact rational and integer linear algebra: scalars, dense matrices,
//! rank, solving, and Smith normal form. No floating point anywhere.

pub mod matrix;
pub mod rational;
pub mod snf;

pub use matrix::RationalMatrix;
pub use rational::{rat, Rational};
pub use snf::{smith_normal_form, IntMatrix};
