//! The Iwahori–Hecke algebra of a cover and its Gelfand–Graev module.
//!
//! [`algebra`] implements the Iwahori–Matsumoto basis of the generic affine Hecke algebra
//! of `Y_{Q,n} ⋊ W`; [`module`] realizes the Iwahori-fixed Gelfand–Graev vectors on
//! `C[Y]`; [`finite`] is the finite-field layer; [`verify`] checks relations and the
//! structure of orbit components.

pub mod algebra;
pub mod finite;
pub mod module;
pub mod torus;
pub mod verify;

pub use algebra::{HeckeAlgebra, HeckeElt};
pub use finite::{FiniteGg, FiniteOrbit};
pub use module::{GgModule, GgOp, GgVector, NegativeBranch};
pub use torus::{canonicalize_torus_word, reflect_section, TorusFactor, TorusNormalForm};
pub use verify::{
    compare_induced, default_window, sl2_special, verify_gg_relations, InducedReport,
    RelationReport, Sl2SpecialReport, Status,
};
