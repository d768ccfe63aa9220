//! Integer lattices inside `Z^r`: normal forms, membership, intersections and finite quotients.

mod matrix;
mod normal_form;
mod quotient;

pub use matrix::{add, dot, scale, sub, IVec, IntMatrix};
pub use normal_form::{hermite_basis, kernel, smith_form, solve};
pub use quotient::{Lattice, LatticeQuotient};
