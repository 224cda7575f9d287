//! Exact computation of extactic curves, invariant algebraic hypersurfaces
//! and rational first integrals of polynomial vector fields, together with
//! degree and genus bounds for invariant divisors.

pub mod bounds;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod extactic;
pub mod foliation;
pub mod polyring;

pub use error::{Error, Result};
