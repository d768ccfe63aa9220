//! Rank-one scattering matrices on `C[Y / Y_{Q,n}]` and their products along reduced words.
//!
//! Rows and columns are indexed by the canonical representatives of `Y / Y_{Q,n}` in
//! quotient-index order; entry `(r', r)` is the coefficient `tau(s_{r'}, s_r)`. For a
//! simple reflection `w = s_alpha` the matrix has at most two nonzero entries per column:
//! a diagonal one with a pole at `chi_alpha = 1`, and one at `w[r]`, the twisted reflection
//! of `r`, carrying a normalized Gauss sum. Products follow the cocycle rule
//! `M(w1 w2, chi) = M(w1, w2 chi) M(w2, chi)`.

mod chi;
mod matrix;
mod scalar;
mod sweep;

pub use chi::ChiPoint;
pub use matrix::{
    reduced_words, BlockReport, CocycleReport, ScatterContext, ScatterMatrix, SupportReport,
};
pub use scalar::Scalar;
pub use sweep::{SweepReport, EXACT_CHI_ORDER, FLOAT_TOLERANCE};
