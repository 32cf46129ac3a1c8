//! Exact generating functions for Knödel walks in an alternating
//! (Böhm–Hornik) environment.

pub mod asympt;
pub mod double_kernel;
pub mod error;
pub mod linsolve;
pub mod odd;
pub mod quadrant;
pub mod series;
pub mod verify;
pub mod vsubst;
pub mod walk;

pub use error::{Error, Result};
