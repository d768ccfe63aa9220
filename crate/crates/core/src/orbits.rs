//! Twisted Weyl orbits `w[y]_z = w(y + z) - z` on `X_{Q,n}`, their stabilizers, and the
//! splitting decision.
//!
//! An orbit splits when some lift `y` of its representative has the same stabilizer in
//! `Y` as the coset has in `X_{Q,n}`. Fixing the stabilizer generators turns this into
//! the integer system `(w - 1) L k = -(w z - z) - (w - 1) y_hat` over the basis `L` of
//! `Y_{Q,n}`, which [`crate::lattice::solve`] decides exactly.

use std::collections::VecDeque;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::lattice::{add, kernel, solve, sub, IVec, IntMatrix, Lattice, LatticeQuotient};
use crate::rootdata::{Coweight, Subgroup, WeylElt, WeylGroup};

/// The action `w[y]_z` of `W` on `Y` and on a quotient of `Y`.
pub struct TwistedAction {
    group: Arc<WeylGroup>,
    z: Coweight,
    /// `w z - z` for every group element.
    shifts: Vec<IVec>,
}

impl TwistedAction {
    pub fn new(group: Arc<WeylGroup>, z: &Coweight) -> Self {
        let shifts = group.elements().map(|w| z.shift(group.matrix(w))).collect();
        TwistedAction {
            group,
            z: z.clone(),
            shifts,
        }
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn shared_group(&self) -> Arc<WeylGroup> {
        self.group.clone()
    }

    pub fn twist(&self) -> &Coweight {
        &self.z
    }

    pub fn shift(&self, w: WeylElt) -> &[i64] {
        &self.shifts[w.index()]
    }

    /// `w[y]_z = w y + (w z - z)`.
    pub fn act(&self, w: WeylElt, y: &[i64]) -> IVec {
        add(&self.group.act(w, y), &self.shifts[w.index()])
    }

    /// A stepper for the action of single elements on quotient indices, free of allocation.
    pub fn walker<'a>(&'a self, quotient: &'a LatticeQuotient) -> QuotientWalker<'a> {
        let dim = quotient.dim();
        QuotientWalker {
            action: self,
            quotient,
            x: vec![0; dim],
            y: vec![0; dim],
        }
    }

    /// Elements fixing the class of `y` in the quotient.
    pub fn stabilizer_mod(&self, y: &[i64], quotient: &LatticeQuotient) -> Subgroup {
        let target = quotient.reduce(y);
        let elements = self
            .group
            .elements()
            .filter(|&w| quotient.reduce(&self.act(w, y)) == target)
            .collect();
        Subgroup::from_sorted(elements)
    }

    /// Elements fixing `y` exactly.
    pub fn stabilizer(&self, y: &[i64]) -> Subgroup {
        Subgroup::from_sorted(
            self.group
                .elements()
                .filter(|&w| self.act(w, y) == y)
                .collect(),
        )
    }
}

/// Applies `w[.]_z` to elements of `Y / L` given by index.
pub struct QuotientWalker<'a> {
    action: &'a TwistedAction,
    quotient: &'a LatticeQuotient,
    x: IVec,
    y: IVec,
}

impl QuotientWalker<'_> {
    pub fn step(&mut self, w: WeylElt, index: usize) -> usize {
        self.quotient.decode_into(index, &mut self.x);
        let m = self.action.group.matrix(w);
        for (i, (out, shift)) in self
            .y
            .iter_mut()
            .zip(&self.action.shifts[w.index()])
            .enumerate()
        {
            *out = shift
                + m.row(i)
                    .iter()
                    .zip(&self.x)
                    .map(|(a, b)| a * b)
                    .sum::<i64>();
        }
        self.quotient.index_in_place(&mut self.y)
    }
}

/// How the existence of the character required for Whittaker formulas is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SProperty {
    /// The orbit splits, which suffices.
    Splitting,
    /// The rank-one orbit at half the modified coroot, settled separately.
    RankOneHalf,
    /// Not decided by any implemented criterion.
    Unknown,
}

#[derive(Clone, Debug)]
pub struct OrbitRecord {
    /// Canonical representative; its quotient index is the smallest in the orbit.
    pub rep: IVec,
    /// Quotient indices of the orbit, sorted.
    pub members: Vec<u32>,
    pub stabilizer: Subgroup,
    pub splitting: bool,
    /// A lift of `rep` whose stabilizer in `Y` equals `stabilizer`, when splitting.
    pub witness: Option<IVec>,
    /// Whether the stabilizer is the pointwise stabilizer of a subspace.
    pub parabolic_stabilizer: bool,
}

impl OrbitRecord {
    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn is_free(&self) -> bool {
        self.stabilizer.is_trivial()
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.members.binary_search(&(index as u32)).is_ok()
    }

    pub fn row(&self) -> OrbitRow {
        OrbitRow {
            rep: self.rep.clone(),
            size: self.size(),
            stab_order: self.stabilizer.order(),
            splitting: self.splitting,
            witness: self.witness.clone(),
        }
    }
}

/// The serialized summary of an orbit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRow {
    pub rep: IVec,
    pub size: usize,
    pub stab_order: usize,
    pub splitting: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<IVec>,
}

/// All `(W, z)`-orbits of `X_{Q,n}`, ordered by canonical representative.
pub struct OrbitCensus {
    pub action: TwistedAction,
    pub quotient: LatticeQuotient,
    pub orbits: Vec<OrbitRecord>,
    /// For each quotient index, the position of its orbit in `orbits`.
    orbit_of: Vec<u32>,
}

impl OrbitCensus {
    pub fn orbit_of_index(&self, index: usize) -> &OrbitRecord {
        &self.orbits[self.orbit_of[index] as usize]
    }

    pub fn orbit_of(&self, y: &[i64]) -> &OrbitRecord {
        self.orbit_of_index(self.quotient.index(y))
    }

    pub fn group(&self) -> &WeylGroup {
        self.action.group()
    }

    pub fn rows(&self) -> Vec<OrbitRow> {
        self.orbits.iter().map(OrbitRecord::row).collect()
    }
}

/// Enumerates the `(W, z)`-orbits on `X_{Q,n}` and decides splitting for each.
pub fn enumerate_orbits(cover: &CoverSpec, z: &Coweight) -> Result<OrbitCensus> {
    let quotient = cover.quotient()?;
    let group = cover.weyl_group()?;
    let action = TwistedAction::new(group.clone(), z);
    let size = quotient.size();
    let mut walker = action.walker(&quotient);
    let mut orbit_of = vec![u32::MAX; size];
    // transversal[j] carries the orbit representative to member j
    let mut transversal = vec![0u32; size];
    let mut orbits = Vec::new();
    let lattice = quotient.sublattice().clone();
    for start in 0..size {
        if orbit_of[start] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        orbit_of[start] = id;
        transversal[start] = 0;
        let mut members = vec![start as u32];
        let mut closing_edges = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let t_i = WeylElt(transversal[i] as usize);
            for k in 0..group.rank() {
                let j = walker.step(group.generator(k), i);
                if orbit_of[j] == u32::MAX {
                    orbit_of[j] = id;
                    transversal[j] = group.mul_generator_left(k, t_i).0 as u32;
                    members.push(j as u32);
                    queue.push_back(j);
                } else {
                    closing_edges.push((t_i, k, j));
                }
            }
        }
        members.sort_unstable();
        let rep = quotient.from_index(start);
        let stabilizer = schreier_stabilizer(
            &group,
            group.order() / members.len(),
            &closing_edges,
            &transversal,
        )?;
        debug_assert_eq!(stabilizer, action.stabilizer_mod(&rep, &quotient));
        let witness = splitting_witness(&action, &lattice, &rep, &stabilizer);
        let parabolic_stabilizer = is_parabolic(&group, &stabilizer);
        orbits.push(OrbitRecord {
            rep,
            members,
            stabilizer,
            splitting: witness.is_some(),
            witness,
            parabolic_stabilizer,
        });
    }
    Ok(OrbitCensus {
        action,
        quotient,
        orbits,
        orbit_of,
    })
}

/// The stabilizer of an orbit representative, generated by the Schreier elements
/// `t_j^-1 s_k t_i` of non-tree edges until it reaches the order `|W| / |O|`.
fn schreier_stabilizer(
    group: &WeylGroup,
    order: usize,
    edges: &[(WeylElt, usize, usize)],
    transversal: &[u32],
) -> Result<Subgroup> {
    let mut stabilizer = group.subgroup(&[])?;
    let mut contained = vec![false; group.order()];
    contained[0] = true;
    let mut gens = Vec::new();
    for &(t_i, k, j) in edges {
        if stabilizer.order() == order {
            break;
        }
        let t_j_inv = group.inverse(WeylElt(transversal[j] as usize));
        let g = group.mul(t_j_inv, group.mul_generator_left(k, t_i));
        if !contained[g.index()] {
            gens.push(g);
            stabilizer = group.subgroup(&gens)?;
            for w in stabilizer.iter() {
                contained[w.index()] = true;
            }
        }
    }
    Ok(stabilizer)
}

/// A small generating set, chosen greedily in element order.
pub fn generators(group: &WeylGroup, h: &Subgroup) -> Vec<WeylElt> {
    let mut gens = Vec::new();
    let mut generated = group.subgroup(&[]).expect("trivial subgroup");
    for w in h.iter() {
        if !generated.contains(w) {
            gens.push(w);
            generated = group
                .subgroup(&gens)
                .expect("subgroup of an enumerated group");
            if generated.order() == h.order() {
                break;
            }
        }
    }
    gens
}

/// A lift `y = rep + L k` fixed by every element of `stabilizer`, if one exists.
pub fn splitting_witness(
    action: &TwistedAction,
    lattice: &Lattice,
    rep: &[i64],
    stabilizer: &Subgroup,
) -> Option<IVec> {
    let group = action.group();
    let gens = generators(group, stabilizer);
    if gens.is_empty() {
        return Some(rep.to_vec());
    }
    let basis = lattice.basis_matrix();
    let mut rows: Vec<IVec> = Vec::new();
    let mut rhs: IVec = Vec::new();
    for &w in &gens {
        let wm1 = group.matrix(w).minus_identity();
        let a = &wm1 * &basis;
        let fixed_part = wm1.apply(rep);
        for i in 0..a.rows() {
            rows.push(a.row(i).to_vec());
            rhs.push(-action.shift(w)[i] - fixed_part[i]);
        }
    }
    let k = solve(&IntMatrix::from_rows(&rows), &rhs)?;
    Some(add(rep, &basis.apply(&k)))
}

/// Whether `h` equals the pointwise stabilizer of its fixed subspace in `Y ⊗ Q`.
pub fn is_parabolic(group: &WeylGroup, h: &Subgroup) -> bool {
    let gens = generators(group, h);
    if gens.is_empty() {
        return true;
    }
    let dim = group.matrix(WeylElt::IDENTITY).rows();
    let rows: Vec<IVec> = gens
        .iter()
        .flat_map(|&w| {
            let m = group.matrix(w).minus_identity();
            (0..dim).map(move |i| m.row(i).to_vec())
        })
        .collect();
    let fixed = kernel(&IntMatrix::from_rows(&rows));
    // the pointwise stabilizer of a subspace is generated by the reflections it contains
    group
        .reflections()
        .iter()
        .filter(|&&t| fixed.iter().all(|v| &group.act(t, v) == v))
        .all(|&t| h.contains(t))
}

/// Whether every `(W, z)`-orbit has the same stabilizer modulo `Y_{Q,n}` and `Y^sc_{Q,n}`.
pub fn is_z_persistent(cover: &CoverSpec, z: &Coweight) -> Result<bool> {
    let census = enumerate_orbits(cover, z)?;
    let sc = cover.y_qn_sc();
    Ok(census.orbits.iter().all(|o| {
        o.stabilizer
            .iter()
            .all(|w| sc.contains(&sub(&census.action.act(w, &o.rep), &o.rep)))
    }))
}

/// How the existence of the character on the orbit's stabilizer algebra is known.
pub fn s_property(cover: &CoverSpec, orbit: &OrbitRecord) -> SProperty {
    if orbit.splitting {
        return SProperty::Splitting;
    }
    let d = cover.datum();
    if d.rank() == 1 && d.dim() == 1 {
        let n_star = cover.y_qn().basis()[0][0];
        if n_star % 2 == 0 && orbit.rep == vec![n_star / 2] {
            return SProperty::RankOneHalf;
        }
    }
    SProperty::Unknown
}

/// Simple affine roots whose reflections fix `y`: index `i < rank` for `alpha_i` with
/// `<alpha_i, y> = 0`, and index `rank` for `alpha_0` when `<highest root, y> = n`.
pub fn delta_a_y(cover: &CoverSpec, y: &[i64]) -> Result<Vec<usize>> {
    let d = cover.datum();
    let n = cover.n() as i64;
    let short_q = (0..d.rank())
        .filter(|&i| d.simple_coroot_length(i) == 1)
        .all(|i| cover.simple_q_values()[i] == 1);
    let classification = cover.classify(None)?;
    if !short_q || !classification.very_saturated {
        return Err(Error::Hypothesis(format!(
            "{} must be very saturated with Q(short coroot) = 1",
            cover.name()
        )));
    }
    let mut out: Vec<usize> = d
        .simple_pairings(y)
        .iter()
        .enumerate()
        .filter(|(_, &m)| m == 0)
        .map(|(i, _)| i)
        .collect();
    if crate::lattice::dot(&d.highest_root().root, y) == n {
        out.push(d.rank());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    fn sl2(n: u64) -> CoverSpec {
        CoverSpec::simply_connected(CartanType::A, 1, n, -1).unwrap()
    }

    /// Pointwise stabilizer of the fixed space by scanning all of `W`.
    fn parabolic_by_scan(group: &WeylGroup, h: &Subgroup) -> bool {
        let dim = group.matrix(WeylElt::IDENTITY).rows();
        let rows: Vec<IVec> = h
            .iter()
            .flat_map(|w| {
                let m = group.matrix(w).minus_identity();
                (0..dim).map(move |i| m.row(i).to_vec())
            })
            .collect();
        let fixed = kernel(&IntMatrix::from_rows(&rows));
        group
            .elements()
            .filter(|&w| fixed.iter().all(|v| &group.act(w, v) == v))
            .count()
            == h.order()
    }

    #[test]
    fn parabolic_test_matches_scan() {
        for (t, r, n) in [
            (CartanType::G, 2, 2),
            (CartanType::B, 3, 4),
            (CartanType::A, 3, 4),
            (CartanType::C, 3, 6),
        ] {
            let c = CoverSpec::simply_connected(t, r, n, 1).unwrap();
            let census = enumerate_orbits(&c, &Coweight::zero(r)).unwrap();
            for o in &census.orbits {
                assert_eq!(
                    o.stabilizer,
                    census.action.stabilizer_mod(&o.rep, &census.quotient)
                );
                assert_eq!(
                    o.parabolic_stabilizer,
                    parabolic_by_scan(census.group(), &o.stabilizer),
                    "{t}{r} n={n}"
                );
            }
        }
    }

    #[test]
    fn sl2_six_fold_orbits() {
        let c = sl2(6);
        let census = enumerate_orbits(&c, &Coweight::zero(1)).unwrap();
        let sizes: Vec<usize> = census.orbits.iter().map(OrbitRecord::size).collect();
        assert_eq!(sizes, vec![1, 2]);
        assert!(census.orbits.iter().all(|o| o.splitting));
        assert_eq!(census.orbits[0].witness, Some(vec![0]));
    }

    #[test]
    fn sl2_four_fold_has_a_non_splitting_singleton() {
        let census = enumerate_orbits(&sl2(4), &Coweight::zero(1)).unwrap();
        let flags: Vec<(usize, bool)> = census
            .orbits
            .iter()
            .map(|o| (o.size(), o.splitting))
            .collect();
        assert_eq!(flags, vec![(1, true), (1, false)]);
        assert_eq!(
            s_property(&sl2(4), &census.orbits[1]),
            SProperty::RankOneHalf
        );
    }

    #[test]
    fn a2_double_cover_orbit_sizes() {
        let c = CoverSpec::simply_connected(CartanType::A, 2, 2, 1).unwrap();
        let census = enumerate_orbits(&c, &Coweight::zero(2)).unwrap();
        let mut sizes: Vec<usize> = census.orbits.iter().map(OrbitRecord::size).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 3]);
    }

    #[test]
    fn g2_double_cover_fundamental_orbit_does_not_split() {
        let c = CoverSpec::simply_connected(CartanType::G, 2, 2, 1).unwrap();
        let census = enumerate_orbits(&c, &Coweight::zero(2)).unwrap();
        // omega_1 in coroot coordinates is (2, 3) for G2
        let w1 = c.datum().coweight_basis()[0].to_integral().unwrap();
        let orbit = census.orbit_of(&w1);
        assert!(!orbit.splitting);
        assert!(!orbit.parabolic_stabilizer);
    }

    #[test]
    fn witness_stabilizer_matches_coset_stabilizer() {
        let c = CoverSpec::simply_connected(CartanType::B, 2, 4, 1).unwrap();
        let census = enumerate_orbits(&c, &Coweight::zero(2)).unwrap();
        for o in &census.orbits {
            if let Some(y) = &o.witness {
                assert_eq!(census.action.stabilizer(y), o.stabilizer);
                assert!(c.quotient().unwrap().same_class(y, &o.rep));
            }
        }
    }

    #[test]
    fn sl2_persistence_depends_on_twist() {
        let c = sl2(6);
        assert!(is_z_persistent(&c, &Coweight::zero(1)).unwrap());
        assert!(!is_z_persistent(&c, &c.datum().rho()).unwrap());
    }

    #[test]
    fn affine_simple_roots_at_a_point() {
        let c = CoverSpec::simply_connected(CartanType::A, 2, 2, 1).unwrap();
        assert_eq!(delta_a_y(&c, &[0, 0]).unwrap(), vec![0, 1]);
        // alpha_1^v + alpha_2^v pairs to 2 = n with the highest root
        assert!(delta_a_y(&c, &[1, 1]).unwrap().contains(&2));
    }
}
