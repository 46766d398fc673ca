pub mod arith;
pub mod brauer;
mod error;
pub mod json;
pub mod montecarlo;
pub mod pairings;
pub mod selftest;
pub mod weingarten;
pub mod zonal;

pub use error::{Error, Result};
