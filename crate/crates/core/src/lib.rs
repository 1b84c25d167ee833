//! Finite-horizon verification of irrationality and algebraic-independence criteria for
//! series of rationals, in exact arithmetic.

pub mod arith;
pub mod certifier;
pub mod curve;
pub mod poly;
pub mod series;

pub use arith::{ArithError, BigRat, ExtInt, ExtNat, Extended, FactoredInteger};
