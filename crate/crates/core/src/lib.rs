// Errors carry the exact rationals that caused them; they are built only on failure paths.
#![allow(clippy::result_large_err)]

pub mod cantor;
pub mod difference;
pub mod interval;
pub mod rational;
pub mod union;

pub use interval::{Interval, IntervalError};
pub use rational::{q, ParseRationalError, Rational};
pub use union::IntervalUnion;
