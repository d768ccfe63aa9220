//! Normal forms for words in the torus sections `s_y = s(y(varpi))` and the coroot
//! elements `h_alpha(varpi^j)`.
//!
//! Every such word equals `epsilon^k s_y'` for a single `y'`; only the parity of `k`
//! matters since `epsilon = (varpi, varpi)_n` is a sign.

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::exact::Cyclo;
use crate::lattice::{add, scale, IVec};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TorusFactor {
    /// `s_y`.
    Section(IVec),
    /// `h_alpha(varpi^power)` for the coroot `alpha^vee`, which equals `s_{power alpha^vee}`.
    Coroot { coroot: IVec, power: i64 },
}

/// `epsilon^epsilon_power * s_y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusNormalForm {
    /// Exponent of `epsilon`, reduced to `{0, 1}`.
    pub epsilon_power: i64,
    pub y: IVec,
}

impl TorusNormalForm {
    pub fn section(y: IVec) -> Self {
        TorusNormalForm {
            epsilon_power: 0,
            y,
        }
    }

    /// Right multiplication by `s_v`, using `s_y s_v = epsilon^D(y, v) s_{y+v}`.
    pub fn times_section(mut self, cover: &CoverSpec, v: &[i64]) -> Self {
        self.epsilon_power = (self.epsilon_power + cover.d(&self.y, v)).rem_euclid(2);
        self.y = add(&self.y, v);
        self
    }

    /// The scalar `epsilon^epsilon_power` for a concrete value of `epsilon`.
    pub fn scalar(&self, epsilon: i64) -> Cyclo {
        epsilon_power(epsilon, self.epsilon_power)
    }
}

pub(crate) fn epsilon_power(epsilon: i64, k: i64) -> Cyclo {
    if epsilon == -1 && k.rem_euclid(2) == 1 {
        Cyclo::from_int(-1)
    } else {
        Cyclo::one()
    }
}

pub fn canonicalize_torus_word(cover: &CoverSpec, word: &[TorusFactor]) -> TorusNormalForm {
    let zero = TorusNormalForm::section(vec![0; cover.datum().dim()]);
    word.iter().fold(zero, |acc, f| match f {
        TorusFactor::Section(y) => acc.times_section(cover, y),
        TorusFactor::Coroot { coroot, power } => acc.times_section(cover, &scale(*power, coroot)),
    })
}

/// `w_alpha(-1) . s_y = epsilon^B(y, alpha^vee) s_y h_alpha(varpi^-<alpha, y>)` in normal form.
pub fn reflect_section(cover: &CoverSpec, simple: usize, y: &[i64]) -> TorusNormalForm {
    let d = cover.datum();
    let coroot = d.simple_coroot(simple);
    let m = d.pair(d.simple_root(simple), y);
    let mut nf = canonicalize_torus_word(
        cover,
        &[
            TorusFactor::Section(y.to_vec()),
            TorusFactor::Coroot {
                coroot: coroot.to_vec(),
                power: -m,
            },
        ],
    );
    nf.epsilon_power = (nf.epsilon_power + cover.bq(y, coroot)).rem_euclid(2);
    nf
}
