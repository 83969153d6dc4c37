//! Complete resolution of `u_n + u_m = w * p1^z1 * ... * ps^zs` for
//! non-degenerate binary recurrences with a positive discriminant.

pub mod arith;
pub mod bounds;
pub mod error;
pub mod json;
pub mod lattice;
pub mod mpreal;
pub mod padic;
pub mod padic_reduction;
pub mod quad;
pub mod recurrence;
pub mod solver;

pub use error::{Error, Result};
