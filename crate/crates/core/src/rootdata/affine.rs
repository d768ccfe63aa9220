use crate::lattice::{add, IVec};

use super::weyl::{WeylElt, WeylGroup};

/// An element `t_y w` of `L ⋊ W` for a `W`-stable lattice `L` inside `Y`.
///
/// Acts on `Y` by `x -> y + w x`, so `(y1, w1)(y2, w2) = (y1 + w1 y2, w1 w2)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtAffineElt {
    pub translation: IVec,
    pub weyl: WeylElt,
}

impl ExtAffineElt {
    pub fn identity(dim: usize) -> Self {
        ExtAffineElt {
            translation: vec![0; dim],
            weyl: WeylElt::IDENTITY,
        }
    }

    pub fn translation(y: IVec) -> Self {
        ExtAffineElt {
            translation: y,
            weyl: WeylElt::IDENTITY,
        }
    }

    pub fn weyl(dim: usize, w: WeylElt) -> Self {
        ExtAffineElt {
            translation: vec![0; dim],
            weyl: w,
        }
    }

    pub fn compose(&self, group: &WeylGroup, other: &ExtAffineElt) -> ExtAffineElt {
        ExtAffineElt {
            translation: add(&self.translation, &group.act(self.weyl, &other.translation)),
            weyl: group.mul(self.weyl, other.weyl),
        }
    }

    pub fn inverse(&self, group: &WeylGroup) -> ExtAffineElt {
        let winv = group.inverse(self.weyl);
        let t = group.act(winv, &self.translation);
        ExtAffineElt {
            translation: t.iter().map(|x| -x).collect(),
            weyl: winv,
        }
    }

    pub fn act(&self, group: &WeylGroup, y: &[i64]) -> IVec {
        add(&self.translation, &group.act(self.weyl, y))
    }

    /// The projection to the finite Weyl group.
    pub fn project(&self) -> WeylElt {
        self.weyl
    }
}
