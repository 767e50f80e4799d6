//! Discrepancy function, sub-torus means and the mean-value identity.

mod functions;
mod shift;
mod types;

pub use functions::*;
pub use shift::*;
pub use types::*;
