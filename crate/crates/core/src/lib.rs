//! Exact toric and toroidal geometry over the integers.

pub mod error;
pub mod fan;
pub mod lattice;
pub mod quotient;
pub mod resolver;
pub mod torific;

pub use error::{Error, Result};
