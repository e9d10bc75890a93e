//! Exact arithmetic substrate.

pub mod hnf;
pub mod matrix;
pub mod rational;

pub use hnf::{hermite_normal_form, normalize_full_column_rank, unimodular_for_direction, Hnf, Normalized};
pub use matrix::{IntMatrix, RatMatrix, UnimodularMatrix};
pub use rational::{
    format_rational, gcd_ext, parse_rational, rat, ratio, rational_reconstruct, Rational,
};
