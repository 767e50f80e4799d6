//! Exact periodic discrepancy of point sets on the torus.
//!
//! All computations run over arbitrary-precision rationals. The crate covers
//! the discrepancy function and its sub-torus means ([`kernel`]), exact
//! suprema over anchors and shifts with inequality verification
//! ([`extremal`]), `L_q` norms ([`lq`]) and small point-set generators
//! ([`gen`]). [`report`] drives the `discrepancy` command-line tool.

pub mod error;
mod exact_int;
pub mod extremal;
pub mod gen;
pub mod kernel;
pub mod lq;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use kernel::{Anchor, IndexSubset, PointSet, ShiftVector, TorusPoint};
pub use scalar::{Rational, Side, SidedValue};
