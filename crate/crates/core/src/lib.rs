//! Exact symbolic computation for rational σ-varieties over a difference
//! field: equivariance checks, canonical bases, invariant and Darboux
//! searches, binding groups and small-scale dynamics.

pub mod algebra;
pub mod binding;
pub mod cli;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod field;
pub mod geometry;
pub mod ideals;
pub mod invariants;
pub mod poly;

pub use config::Config;
pub use error::{Error, FieldError, Result};
pub use field::{DifferenceField, FieldElem};
pub use poly::{Poly, RatFunc, Vars};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/ideals.md")]
    mod ideals {}
    #[doc = include_str!("../../../book/src/geometry.md")]
    mod geometry {}
    #[doc = include_str!("../../../book/src/invariants.md")]
    mod invariants {}
    #[doc = include_str!("../../../book/src/binding.md")]
    mod binding {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
