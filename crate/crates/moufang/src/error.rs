//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Attempted to invert the zero residue.
    #[error("cannot invert zero in F_{p}")]
    InversionOfZero { p: u8 },

    /// Two operands live over different prime fields.
    #[error("modulus mismatch: F_{left} vs F_{right}")]
    ModulusMismatch { left: u8, right: u8 },

    /// A map or constructor requiring a nonzero vector received zero.
    #[error("zero vector is outside the domain of this map")]
    ZeroVector,

    /// Operation requires determinant 1.
    #[error("matrix has determinant {det}, expected 1")]
    NotUnitDeterminant { det: u8 },

    /// The prime is outside the supported or requested range.
    #[error("unsupported prime {p}: {reason}")]
    UnsupportedPrime { p: u16, reason: String },

    /// Closure enumeration exceeded its element cap.
    #[error("closure exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },

    /// A set handed to `build_table` is not closed under multiplication.
    #[error("set is not closed: {detail}")]
    NotClosed { detail: String },

    /// A multiplication table violates the loop axioms.
    #[error("not a loop: {detail}")]
    NotALoop { detail: String },

    /// The structure is too large for the requested exhaustive check.
    #[error("structure of size {size} exceeds the bound {max} for this check")]
    TooLarge { size: usize, max: usize },

    /// Pair closure of the seeded correspondence hit a collision.
    #[error("isomorphism failure: {detail}")]
    IsomorphismFailure { detail: String },

    /// Pair closure terminated without covering both loops.
    #[error("correspondence is not surjective: {detail}")]
    NotSurjective { detail: String },

    /// Octonion does not have norm 1.
    #[error("octonion is not a unit: norm {norm}")]
    NotUnit { norm: String },

    /// Text input could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
