//! Exact computational engine for the smallest nonassociative simple
//! Moufang loops (the Paige loops over prime fields) and for the unit
//! integral octonions.
//!
//! The crate machine-checks, with exact arithmetic throughout:
//!
//! - Zorn vector-matrix algebra over F_p and the unit-determinant loop
//!   modulo its center ([`zorn`]),
//! - multiplicative closure, Cayley tables, and the Moufang /
//!   diassociativity / center / simplicity checks ([`loop_core`]),
//! - the reduction chain from the full translation-style generating sets
//!   down to three generators ([`generators`]),
//! - exact dyadic octonion arithmetic, the 240 unit integral octonions,
//!   and their generation by {i, j, h} ([`octonion`]),
//! - the explicit isomorphism between the unit integral octonions mod
//!   {1, -1} and the 120-element Paige loop ([`isomorphism`]).
//!
//! The `moufang` binary exposes all of it; see the README.

pub mod cli;
pub mod error;
pub mod generators;
pub mod gf;
pub mod isomorphism;
pub mod loop_core;
pub mod octonion;
mod packed;
pub mod zorn;

pub use error::{Error, Result};
pub use gf::{FpElement, FpVec3, Prime};
pub use zorn::{CanonicalElement, ZornMatrix};

