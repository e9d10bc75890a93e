//! Exact parametric integer linear programming in fixed dimension.
//!
//! Every computation runs on arbitrary-precision rationals. The modules build
//! on each other roughly in declaration order.

pub mod config;
pub mod decide;
pub mod io;
pub mod error;
pub mod gap;
pub mod lattice;
pub mod milp;
pub mod numkernel;
pub mod oracle;
pub mod paramwidth;
pub mod polyhedron;
pub mod structural;

pub use error::{Error, Result};
pub use numkernel::{IntMatrix, RatMatrix, Rational, UnimodularMatrix};
