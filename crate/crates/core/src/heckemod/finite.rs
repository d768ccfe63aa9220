//! The finite Gelfand–Graev module `C[T_kappa]` with basis the idempotents `c(chi)`.
//!
//! A character `chi` of `T_kappa = Y ⊗ F_q^x` is a vector `x` modulo `q - 1`, with
//! `chi(y ⊗ g^k) = zeta_{q-1}^(k <x, y>)` for the fixed generator `g`.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{quotient_bound, Error, Result};
use crate::exact::{gauss_sum, Cyclo, Fq};
use crate::lattice::IVec;

pub struct FiniteGg {
    field: Arc<Fq>,
    modulus: i64,
    dim: usize,
    roots: Vec<IVec>,
    coroots: Vec<IVec>,
    /// `gauss[k] = sum_u psi(u) zeta_{q-1}^(k dlog u)`.
    gauss: Vec<Cyclo>,
}

/// A `W`-orbit of characters with its irreducibility verdict.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FiniteOrbit {
    pub members: Vec<IVec>,
    /// No nonempty proper subset of the orbit spans an invariant subspace.
    pub irreducible: bool,
}

impl FiniteGg {
    /// Requires `n | q - 1` for the cover, although the module only sees `Y` and `q`.
    pub fn new(cover: &CoverSpec, q: u64) -> Result<Self> {
        cover.epsilon(q)?;
        let field = Fq::new(q)?;
        let d = cover.datum();
        let dim = d.dim();
        let modulus = q as i64 - 1;
        let size = (modulus as u128)
            .checked_pow(dim as u32)
            .unwrap_or(u128::MAX);
        if size > quotient_bound() as u128 {
            return Err(Error::Resource(format!("{size} characters of T_kappa")));
        }
        let gauss = (0..modulus)
            .map(|k| gauss_sum(&field, q - 1, k, 1))
            .collect::<Result<_>>()?;
        Ok(FiniteGg {
            field,
            modulus,
            dim,
            roots: (0..d.rank()).map(|i| d.simple_root(i).to_vec()).collect(),
            coroots: d.simple_coroots().to_vec(),
            gauss,
        })
    }

    pub fn dimension(&self) -> usize {
        (self.modulus as usize).pow(self.dim as u32)
    }

    pub fn characters(&self) -> impl Iterator<Item = IVec> + '_ {
        (0..self.dimension()).map(move |mut k| {
            (0..self.dim)
                .map(|_| {
                    let x = (k % self.modulus as usize) as i64;
                    k /= self.modulus as usize;
                    x
                })
                .collect()
        })
    }

    fn reduce(&self, x: IVec) -> IVec {
        x.into_iter().map(|v| v.rem_euclid(self.modulus)).collect()
    }

    /// `c(chi) T_alpha = g_alpha(psi, chi) c(w_alpha chi)` with
    /// `g_alpha(psi, chi) = sum_u psi(u) chi(h_alpha(u))^-1`.
    pub fn t(&self, simple: usize, chi: &[i64]) -> (Cyclo, IVec) {
        let pairing: i64 = chi
            .iter()
            .zip(&self.coroots[simple])
            .map(|(a, b)| a * b)
            .sum();
        let g = self.gauss[(-pairing).rem_euclid(self.modulus) as usize].clone();
        let image = chi
            .iter()
            .zip(&self.roots[simple])
            .map(|(x, a)| x - pairing * a)
            .collect();
        (g, self.reduce(image))
    }

    /// The value `chi(y ⊗ u)` by which `T_{y(u)}` acts on `c(chi)`.
    pub fn torus(&self, chi: &[i64], y: &[i64], u: u32) -> Result<Cyclo> {
        let log = self.field.dlog(u).ok_or(Error::ZeroDivision)? as i64;
        let pairing: i64 = chi.iter().zip(y).map(|(a, b)| a * b).sum();
        Ok(Cyclo::root_of_unity(self.modulus as u64, pairing * log))
    }

    /// Orbits of `W` on characters; each spans an invariant subspace.
    ///
    /// The torus acts diagonally with pairwise distinct characters, so every invariant
    /// subspace is spanned by basis vectors, and irreducibility reduces to a search over
    /// subsets of the orbit closed under the `T_alpha`.
    pub fn orbits(&self) -> Vec<FiniteOrbit> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for chi in self.characters() {
            if seen.contains(&chi) {
                continue;
            }
            let mut members = vec![chi.clone()];
            seen.insert(chi);
            let mut k = 0;
            while k < members.len() {
                for i in 0..self.roots.len() {
                    let (_, image) = self.t(i, &members[k]);
                    if seen.insert(image.clone()) {
                        members.push(image);
                    }
                }
                k += 1;
            }
            members.sort();
            let irreducible = self.closed_subsets_are_trivial(&members);
            out.push(FiniteOrbit {
                members,
                irreducible,
            });
        }
        out
    }

    fn closed_subsets_are_trivial(&self, members: &[IVec]) -> bool {
        let k = members.len();
        if k > 20 {
            // nonzero Gauss factors make closed subsets W-stable, hence the whole orbit
            return members
                .iter()
                .all(|chi| (0..self.roots.len()).all(|i| !self.t(i, chi).0.is_zero()));
        }
        let position = |x: &IVec| members.binary_search(x).expect("orbit closed");
        let images: Vec<Vec<(usize, bool)>> = members
            .iter()
            .map(|chi| {
                (0..self.roots.len())
                    .map(|i| {
                        let (g, image) = self.t(i, chi);
                        (position(&image), !g.is_zero())
                    })
                    .collect()
            })
            .collect();
        (1u32..(1 << k) - 1).all(|mask| {
            let closed = (0..k).filter(|&a| mask >> a & 1 == 1).all(|a| {
                images[a]
                    .iter()
                    .all(|&(b, nonzero)| !nonzero || mask >> b & 1 == 1)
            });
            !closed
        })
    }
}
