//! Exact computations with germs of formal power series.
//!
//! The crate covers truncated multivariate series over exact fields,
//! Grauert–Hironaka division with respect to a degree-compatible monomial
//! order, jets and diagrams of ideals, and verdicts of finite-order
//! equivalence for families and sets of ideals, self-maps and vector
//! fields. The [`counterexample`] module builds two sets of plane curves
//! whose finite-order equivalence does not lift to a formal one.
//!
//! Nothing here certifies a statement about full formal series: the
//! strongest positive verdict is always "holds up to the working truncation".

pub mod cli;
pub mod counterexample;
pub mod division;
pub mod dynamics;
pub mod equivalence;
pub mod error;
pub mod expr;
pub mod ideal;
mod linalg;
pub mod monomial;
pub mod scalar;
pub mod series;
#[cfg(test)]
mod strategies;

pub use error::{Error, Result};
pub use monomial::{MultiIndex, Staircase};
pub use scalar::{Field, GaussianRational, Rational};
pub use series::{FormalMap, FormalSeries};
