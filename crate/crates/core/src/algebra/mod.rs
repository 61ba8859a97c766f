//! Exact scalar and truncated-power-series arithmetic.

mod parse;
mod scalar;
mod series;

pub use parse::parse_series;
pub use scalar::Scalar;
pub use series::{binomial, Monomial, Series, VarKind, Vars};
