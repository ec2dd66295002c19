//! Fans with degree functions, lattice-point generating functions, the
//! toric forms `f_{N,deg}` and their Hecke operators.

pub mod cone;
pub mod fan;
pub mod form;
pub mod hecke;
pub mod lattice;

pub use cone::{cone_gf, simplicial_subdivide, ConeGF, SignedCone};
pub use fan::{build_fan, projective_space_fan, DegreeFunction, Face, Fan, FanJson};
pub use form::{ac_eval, toric_form};
pub use hecke::{hecke_toric, reread_in_lattice};
pub use lattice::{intermediate_lattices, Lattice};
