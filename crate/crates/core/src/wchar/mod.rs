//! Characters of Weyl groups and the Whittaker dimension formulas built from them.
//!
//! Weyl group characters here are integer valued, so the heavy sums run over `i64` and
//! only the public [`ClassFunction`] values are cyclotomic. Two independent routes to
//! `<Ind_H^W f, sigma_O>_W` exist: restriction to `H` with point stabilizers
//! accumulated orbit by orbit, and induction through conjugacy class sums.

mod checks;
mod rgroup;

use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Cyclo;
use crate::orbits::{OrbitCensus, OrbitRecord};
use crate::rootdata::{ConjugacyClasses, Subgroup, WeylElt, WeylGroup};

pub use checks::{
    twist_shift, verify_twist_equiv, verify_uni_key, verify_wh_equi, TwistReport, UniKeyReport,
    WhEquiReport, WhEquiRow,
};
pub use rgroup::{
    rgroup_characters, rgroup_registry, whittaker_unitary, zeta_rho, ChiValues, RGroup, RGroupSpec,
    RootOfUnity,
};

/// A function on a subgroup of an enumerated Weyl group, with cyclotomic values.
#[derive(Clone, Debug)]
pub struct ClassFunction {
    group: Arc<WeylGroup>,
    domain: Subgroup,
    values: Vec<Cyclo>,
}

impl ClassFunction {
    pub fn new(group: Arc<WeylGroup>, domain: Subgroup, values: Vec<Cyclo>) -> Result<Self> {
        if values.len() != domain.order() {
            return Err(Error::Config(format!(
                "class function needs {} values, got {}",
                domain.order(),
                values.len()
            )));
        }
        Ok(ClassFunction {
            group,
            domain,
            values,
        })
    }

    pub fn from_integers(group: Arc<WeylGroup>, domain: Subgroup, values: &[i64]) -> Result<Self> {
        Self::new(
            group,
            domain,
            values.iter().map(|&v| Cyclo::from_int(v)).collect(),
        )
    }

    pub fn trivial(group: Arc<WeylGroup>, domain: Subgroup) -> Self {
        let values = vec![Cyclo::one(); domain.order()];
        ClassFunction {
            group,
            domain,
            values,
        }
    }

    /// The restriction of the sign character `(-1)^length`.
    pub fn sign(group: Arc<WeylGroup>, domain: Subgroup) -> Self {
        let values = domain
            .iter()
            .map(|w| Cyclo::from_int(group.sign(w)))
            .collect();
        ClassFunction {
            group,
            domain,
            values,
        }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn domain(&self) -> &Subgroup {
        &self.domain
    }

    pub fn values(&self) -> &[Cyclo] {
        &self.values
    }

    pub fn value(&self, w: WeylElt) -> Option<&Cyclo> {
        self.domain
            .elements()
            .binary_search(&w)
            .ok()
            .map(|k| &self.values[k])
    }

    /// The value at the identity.
    pub fn degree(&self) -> &Cyclo {
        &self.values[0]
    }

    pub fn restrict(&self, sub: &Subgroup) -> Result<ClassFunction> {
        let values = sub
            .iter()
            .map(|w| self.value(w).cloned().ok_or_else(|| not_defined(w)))
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction {
            group: self.group.clone(),
            domain: sub.clone(),
            values,
        })
    }

    /// Pointwise product on the common domain.
    pub fn tensor(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.check_group(other)?;
        if self.domain != other.domain {
            return Err(Error::Config("tensor product needs a common domain".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Ok(ClassFunction {
            group: self.group.clone(),
            domain: self.domain.clone(),
            values,
        })
    }

    pub fn conj(&self) -> ClassFunction {
        let values = self.values.iter().map(Cyclo::conj).collect();
        ClassFunction {
            group: self.group.clone(),
            domain: self.domain.clone(),
            values,
        }
    }

    /// Invariance under conjugation by the domain itself.
    pub fn is_class_function(&self) -> bool {
        let gens = crate::orbits::generators(&self.group, &self.domain);
        self.domain.iter().zip(&self.values).all(|(h, v)| {
            gens.iter()
                .all(|&g| self.value(self.group.conjugate(g, h)) == Some(v))
        })
    }

    fn check_group(&self, other: &ClassFunction) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) {
            Ok(())
        } else {
            Err(Error::Config(
                "class functions live on different groups".into(),
            ))
        }
    }
}

fn not_defined(w: WeylElt) -> Error {
    Error::Config(format!(
        "class function is not defined at element {}",
        w.index()
    ))
}

/// `|H|^-1 sum_{h in H} f(h) conj(g(h))`, which must be rational.
pub fn inner_product(
    f: &ClassFunction,
    g: &ClassFunction,
    subgroup: &Subgroup,
) -> Result<BigRational> {
    f.check_group(g)?;
    let mut total = Cyclo::zero();
    for h in subgroup.iter() {
        let a = f.value(h).ok_or_else(|| not_defined(h))?;
        let b = g.value(h).ok_or_else(|| not_defined(h))?;
        total += &(a * &b.conj());
    }
    let total = total.to_rational().ok_or_else(|| {
        Error::Config("inner product of these class functions is not rational".into())
    })?;
    Ok(total / BigRational::from_integer((subgroup.order() as i64).into()))
}

/// A Whittaker dimension together with whether the theorem producing it applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhittakerDim {
    pub dim: i64,
    /// False when the orbit is outside the hypotheses and the value is conjectural.
    pub within_hypotheses: bool,
}

/// Conjugacy data of a Weyl group, shared by all character computations on it.
pub struct CharacterContext {
    group: Arc<WeylGroup>,
    classes: ConjugacyClasses,
    /// Parabolic subgroups indexed by the bitmask of their simple reflections.
    parabolics: OnceLock<Vec<Subgroup>>,
    /// `Ind_{W(S)}^W sign` on each conjugacy class, indexed like `parabolics`.
    induced_signs: OnceLock<Vec<Vec<i64>>>,
}

fn mask_of(subset: &[usize]) -> usize {
    subset.iter().fold(0, |m, &i| m | 1 << i)
}

/// Turns multiplicities `m(S')` over the subsets of `phi` (bitmask over positions in `phi`)
/// into `dim(S) = sum_{S ⊆ S'} (-1)^{|S' - S|} m(S')`.
fn alternate_over_supersets(mut m: Vec<i64>, k: usize) -> Vec<i64> {
    for bit in 0..k {
        for mask in 0..m.len() {
            if mask >> bit & 1 == 0 {
                m[mask] -= m[mask | 1 << bit];
            }
        }
    }
    m
}

fn subset_at(phi: &[usize], mask: usize) -> Vec<usize> {
    let mut s: Vec<usize> = phi
        .iter()
        .enumerate()
        .filter(|(k, _)| mask >> k & 1 == 1)
        .map(|(_, &i)| i)
        .collect();
    s.sort_unstable();
    s
}

impl CharacterContext {
    pub fn new(group: Arc<WeylGroup>) -> Self {
        let classes = group.conjugacy_classes();
        CharacterContext {
            group,
            classes,
            parabolics: OnceLock::new(),
            induced_signs: OnceLock::new(),
        }
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn classes(&self) -> &ConjugacyClasses {
        &self.classes
    }

    fn parabolic(&self, subset: &[usize]) -> &Subgroup {
        let all = self.parabolics.get_or_init(|| {
            let rank = self.group.rank();
            (0..1usize << rank)
                .map(|m| {
                    self.group
                        .parabolic(&(0..rank).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
                })
                .collect()
        });
        &all[mask_of(subset)]
    }

    fn induced_sign_classes(&self, subset: &[usize]) -> &[i64] {
        let all = self.induced_signs.get_or_init(|| {
            (0..1usize << self.group.rank())
                .map(|m| {
                    let h = self.parabolic(
                        &(0..self.group.rank())
                            .filter(|i| m >> i & 1 == 1)
                            .collect::<Vec<_>>(),
                    );
                    self.induce_on_classes(h, |w| self.group.sign(w))
                })
                .collect()
        });
        &all[mask_of(subset)]
    }

    /// `Ind_H^W f` on each conjugacy class, through
    /// `Ind f(C) = |W| / (|H| |C|) sum_{h in H ∩ C} f(h)`.
    fn induce_on_classes(&self, h: &Subgroup, f: impl Fn(WeylElt) -> i64) -> Vec<i64> {
        let mut class_sums = vec![0i64; self.classes.count()];
        for x in h.iter() {
            class_sums[self.classes.class_of(x)] += f(x);
        }
        let order = self.group.order() as i64;
        class_sums
            .iter()
            .enumerate()
            .map(|(c, &sum)| {
                let num = order * sum;
                let den = h.order() as i64 * self.classes.size(c) as i64;
                debug_assert_eq!(num % den, 0, "induced character values are integers");
                num / den
            })
            .collect()
    }

    fn expand(&self, on_classes: &[i64]) -> Vec<i64> {
        self.group
            .elements()
            .map(|w| on_classes[self.classes.class_of(w)])
            .collect()
    }

    /// `<a, b>_W` for integer class functions given on conjugacy classes.
    fn pair_on_classes(&self, a: &[i64], b: &[i64]) -> i64 {
        let sum: i64 = (0..self.classes.count())
            .map(|c| self.classes.size(c) as i64 * a[c] * b[c])
            .sum();
        debug_assert_eq!(sum % self.group.order() as i64, 0);
        sum / self.group.order() as i64
    }

    /// `Ind_H^W f` on all of `W`.
    pub fn induce(&self, h: &Subgroup, f: impl Fn(WeylElt) -> i64) -> Vec<i64> {
        self.expand(&self.induce_on_classes(h, f))
    }

    /// `Ind_{W(S)}^W sign` for the parabolic subgroup on the simple reflections `subset`.
    pub fn induced_sign(&self, subset: &[usize]) -> Vec<i64> {
        self.expand(self.induced_sign_classes(subset))
    }

    /// The permutation character of an orbit as `Ind_{Stab}^W 1`, via class sums.
    pub fn orbit_character_by_classes(&self, orbit: &OrbitRecord) -> Vec<i64> {
        self.induce(&orbit.stabilizer, |_| 1)
    }

    /// The permutation character `w -> #{x in O : w[x]_z = x}` of an orbit.
    pub fn perm_character(&self, census: &OrbitCensus, orbit: &OrbitRecord) -> ClassFunction {
        let values = fixed_point_counts(census, orbit);
        ClassFunction::from_integers(self.group.clone(), self.group.whole(), &values)
            .expect("one value per group element")
    }

    /// `sigma_S = sum_{S ⊆ S' ⊆ Phi} (-1)^{|S' - S|} Ind_{W(S')}^W sign` as a virtual character.
    pub fn sigma_s(&self, phi_chi: &[usize], s: &[usize]) -> Result<ClassFunction> {
        check_subsets(self.group.rank(), phi_chi, s)?;
        let mut total = vec![0i64; self.classes.count()];
        for (sign, sp) in intermediate_subsets(phi_chi, s) {
            for (t, v) in total.iter_mut().zip(self.induced_sign_classes(&sp)) {
                *t += sign * v;
            }
        }
        ClassFunction::from_integers(self.group.clone(), self.group.whole(), &self.expand(&total))
    }

    /// `<sign, Res_{W(S')} perm>_{W(S')}` by summing over the parabolic subgroup.
    fn restricted_sign_multiplicity(&self, perm: &[i64], subset: &[usize]) -> i64 {
        let h = self.parabolic(subset);
        let sum: i64 = h.iter().map(|w| self.group.sign(w) * perm[w.index()]).sum();
        debug_assert_eq!(sum % h.order() as i64, 0);
        sum / h.order() as i64
    }

    /// `<sigma_S, sigma_O>_W`, by restricting `sigma_O` to each `W(S')`.
    pub fn whittaker_regular(
        &self,
        census: &OrbitCensus,
        orbit: &OrbitRecord,
        phi_chi: &[usize],
        s: &[usize],
    ) -> Result<WhittakerDim> {
        check_subsets(self.group.rank(), phi_chi, s)?;
        let perm = fixed_point_counts(census, orbit);
        let dim = intermediate_subsets(phi_chi, s)
            .iter()
            .map(|(sign, sp)| sign * self.restricted_sign_multiplicity(&perm, sp))
            .sum();
        Ok(WhittakerDim {
            dim,
            within_hypotheses: orbit.splitting,
        })
    }

    /// `<sigma_S, sigma_O>_W` computed on all of `W` from induced characters.
    pub fn whittaker_regular_induced(
        &self,
        orbit: &OrbitRecord,
        phi_chi: &[usize],
        s: &[usize],
    ) -> Result<i64> {
        check_subsets(self.group.rank(), phi_chi, s)?;
        let perm = self.induce_on_classes(&orbit.stabilizer, |_| 1);
        Ok(intermediate_subsets(phi_chi, s)
            .iter()
            .map(|(sign, sp)| sign * self.pair_on_classes(self.induced_sign_classes(sp), &perm))
            .sum())
    }

    /// [`Self::whittaker_regular`] for every `S ⊆ Phi(chi)`, sharing the restrictions.
    pub fn whittaker_regular_all(
        &self,
        census: &OrbitCensus,
        orbit: &OrbitRecord,
        phi_chi: &[usize],
    ) -> Result<Vec<(Vec<usize>, WhittakerDim)>> {
        check_subsets(self.group.rank(), phi_chi, &[])?;
        let perm = fixed_point_counts(census, orbit);
        let k = phi_chi.len();
        let m = (0..1usize << k)
            .map(|mask| self.restricted_sign_multiplicity(&perm, &subset_at(phi_chi, mask)))
            .collect();
        Ok(alternate_over_supersets(m, k)
            .into_iter()
            .enumerate()
            .map(|(mask, dim)| {
                (
                    subset_at(phi_chi, mask),
                    WhittakerDim {
                        dim,
                        within_hypotheses: orbit.splitting,
                    },
                )
            })
            .collect())
    }

    /// [`Self::whittaker_regular_induced`] for every `S ⊆ Phi(chi)`.
    pub fn whittaker_regular_induced_all(
        &self,
        orbit: &OrbitRecord,
        phi_chi: &[usize],
    ) -> Result<Vec<(Vec<usize>, i64)>> {
        check_subsets(self.group.rank(), phi_chi, &[])?;
        let perm = self.induce_on_classes(&orbit.stabilizer, |_| 1);
        let k = phi_chi.len();
        let m = (0..1usize << k)
            .map(|mask| {
                self.pair_on_classes(self.induced_sign_classes(&subset_at(phi_chi, mask)), &perm)
            })
            .collect();
        Ok(alternate_over_supersets(m, k)
            .into_iter()
            .enumerate()
            .map(|(mask, d)| (subset_at(phi_chi, mask), d))
            .collect())
    }
}

fn check_subsets(rank: usize, phi_chi: &[usize], s: &[usize]) -> Result<()> {
    if let Some(i) = phi_chi.iter().find(|&&i| i >= rank) {
        return Err(Error::Config(format!(
            "simple root index {i} out of range for rank {rank}"
        )));
    }
    if let Some(i) = s.iter().find(|i| !phi_chi.contains(i)) {
        return Err(Error::Config(format!(
            "S must lie in Phi(chi); {i} does not"
        )));
    }
    Ok(())
}

/// All `S'` with `S ⊆ S' ⊆ Phi`, paired with `(-1)^{|S' - S|}`.
fn intermediate_subsets(phi_chi: &[usize], s: &[usize]) -> Vec<(i64, Vec<usize>)> {
    let extra: Vec<usize> = phi_chi.iter().copied().filter(|i| !s.contains(i)).collect();
    (0u32..1 << extra.len())
        .map(|mask| {
            let mut sp = s.to_vec();
            sp.extend(
                extra
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| mask >> k & 1 == 1)
                    .map(|(_, &i)| i),
            );
            sp.sort_unstable();
            (if mask.count_ones() % 2 == 0 { 1 } else { -1 }, sp)
        })
        .collect()
}

/// For each member of the orbit, an element carrying the representative to it.
pub fn orbit_transversal(census: &OrbitCensus, orbit: &OrbitRecord) -> Vec<(u32, WeylElt)> {
    let group = census.group();
    let q = &census.quotient;
    let start = q.index(&orbit.rep) as u32;
    let mut found = vec![(start, WeylElt::IDENTITY)];
    let mut seen = std::collections::HashSet::from([start]);
    let mut head = 0;
    while head < found.len() {
        let (i, g) = found[head];
        head += 1;
        let y = q.from_index(i as usize);
        for k in 0..group.rank() {
            let s = group.generator(k);
            let j = q.index(&census.action.act(s, &y)) as u32;
            if seen.insert(j) {
                found.push((j, group.mul(s, g)));
            }
        }
    }
    found
}

/// Fixed points of every `w` on the orbit, accumulated from the point stabilizers
/// `g Stab g^-1`, each obtained from a neighbour's by conjugating with a simple reflection.
pub fn fixed_point_counts(census: &OrbitCensus, orbit: &OrbitRecord) -> Vec<i64> {
    let group = census.group();
    let q = &census.quotient;
    let mut counts = vec![0i64; group.order()];
    let start = q.index(&orbit.rep);
    let mut seen = std::collections::HashSet::from([start]);
    let mut queue =
        std::collections::VecDeque::from([(start, orbit.stabilizer.elements().to_vec())]);
    let mut walker = census.action.walker(q);
    while let Some((i, stab)) = queue.pop_front() {
        for &h in &stab {
            counts[h.index()] += 1;
        }
        for k in 0..group.rank() {
            let j = walker.step(group.generator(k), i);
            if seen.insert(j) {
                queue.push_back((
                    j,
                    stab.iter()
                        .map(|&h| group.conjugate_by_generator(k, h))
                        .collect(),
                ));
            }
        }
    }
    counts
}

/// Fixed points of a single `w` on the orbit, by acting on every member.
pub fn fixed_points(census: &OrbitCensus, orbit: &OrbitRecord, w: WeylElt) -> i64 {
    let q = &census.quotient;
    orbit
        .members
        .iter()
        .filter(|&&i| {
            let y = q.from_index(i as usize);
            q.index(&census.action.act(w, &y)) == i as usize
        })
        .count() as i64
}
