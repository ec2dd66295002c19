//! Weight-two modular symbols for Γ_1(N) via Manin symbols.

pub mod heilbronn;
pub mod symbols;
pub mod winding;

pub use symbols::{Sign, SymbolSpace};
pub use winding::{rank0_dimension, rank0_dimension_exact, space_report, winding_analysis, SpaceReport, WindingReport};

use num_rational::BigRational;

/// Dense rational matrix acting on column vectors: `m[i][j]` is the
/// `i`-th coordinate of the image of the `j`-th basis vector.
pub type Matrix = Vec<Vec<BigRational>>;
