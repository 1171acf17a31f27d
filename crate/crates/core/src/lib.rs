//! Finite monoids, their R-orders `X(M)` and type forests `Y(M)`, the join
//! semigroup `<P>`, located words, and bounded verifiers for Ramsey
//! statements about basic sequences.

pub mod arrays;
pub mod certificate;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod families;
pub mod fk;
pub mod join;
pub mod laws;
pub mod monoid;
pub mod mu;
pub mod order;
pub mod poset;
pub mod source;
pub mod tame;
pub mod words;

pub use error::{Error, Result};
pub use monoid::{Elem, Monoid};

/// Environment variable that lifts size guards on exponential enumerations.
pub const GUARD_OVERRIDE_VAR: &str = "RM_GUARD_OVERRIDE";

/// True when `RM_GUARD_OVERRIDE` is set to a non-empty value other than `0`.
pub fn guard_lifted() -> bool {
    std::env::var(GUARD_OVERRIDE_VAR)
        .map(|v| !v.is_empty() && v != "0")
        .unwrap_or(false)
}
