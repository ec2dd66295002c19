//! Toric modular forms for Γ_1(ℓ) computed exactly.
//!
//! The crate evaluates the alternating cone sums attached to complete fans
//! with fractional degree functions, builds the weight-1 Eisenstein series
//! `s_a` and their higher-weight companions, computes Manin symbols with
//! Hecke operators and the winding element, and checks the weighted
//! projective equations of `X_1(p)` as q-expansion identities.

pub mod arith;
pub mod curve;
pub mod eisenstein;
pub mod error;
pub mod modsym;
pub mod span;
pub mod toric;
pub mod util;

pub use error::{Error, Result};
