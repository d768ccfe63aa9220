//! The pro-p Iwahori–Hecke algebra of a genuine `SL_2` cover, built from its
//! Iwahori–Matsumoto presentation.
//!
//! [`group`] realizes `W(1)` with its `mu_n` scalars, [`algebra`] the normal-form
//! multiplication, Bernstein elements and idempotents `c(chi)`, and [`checks`] the
//! structural identities tying them together.

pub mod algebra;
pub mod checks;
pub mod group;

pub use algebra::{Factorization, ProPAlgebra, ProPElt};
pub use checks::{propp_checks, ProPReport};
pub use group::{Generator, ScaledW1, W1Elt, W1Group};
