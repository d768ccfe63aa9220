//! Exact computations for tame n-fold covers of split reductive p-adic groups.
//!
//! The crate is layered bottom-up:
//!
//! - [`exact`]: rationals, cyclotomic fields, finite fields, tame symbols, Gauss sums.
//! - [`rootdata`]: root data, Weyl groups as integer matrix groups, subgroup closure.
//! - [`lattice`]: Hermite/Smith normal forms and finite lattice quotients.
//! - [`cover`]: the cover data `(n, Q)`, its sublattices and classification predicates.
//! - [`orbits`]: twisted Weyl orbits on `Y / Y_{Q,n}` and the splitting decision.
//! - [`wchar`]: class functions, permutation characters, Whittaker dimensions, R-groups.
//! - [`heckemod`]: the Iwahori–Hecke algebra and the Gelfand–Graev module on `C[Y]`.
//! - [`propp`]: the pro-p Iwahori–Hecke algebra from its Iwahori–Matsumoto presentation.
//! - [`scatter`]: rank-one scattering matrices and their cocycle relation.

pub mod cover;
pub mod error;
pub mod exact;
pub mod heckemod;
pub mod lattice;
pub mod orbits;
pub mod propp;
pub mod rootdata;
pub mod scatter;
pub mod wchar;

pub use error::{Error, Result};
