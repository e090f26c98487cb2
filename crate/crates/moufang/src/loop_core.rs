//! Generic finite-loop machinery: multiplicative closure, exhaustive
//! enumeration oracles, Cayley tables, and the Moufang, diassociativity,
//! nonassociativity, center, and simplicity checks.
//!
//! Closure under multiplication alone yields the generated subloop:
//! in a finite Moufang loop every element has finite order and every
//! two-generated subloop is a group (diassociativity), so the identity
//! and all inverses arise as positive powers and are reached by the
//! closure anyway.

mod checks;
mod closure;
mod enumerate;
mod table;

pub use checks::{
    center, check_diassociativity, check_moufang, check_nonassociative, simplicity_check,
    subloop_closure_indices, zorn_center_raw, MoufangLaw, SimplicityOutcome,
};
pub use closure::{canonical_closure, closure, ElementSet, LoopElement, DEFAULT_CLOSURE_CAP};
pub use enumerate::{enumerate_unit_loop, enumerate_unit_matrices};
pub use table::{export_cayley_csv, LoopTable};
