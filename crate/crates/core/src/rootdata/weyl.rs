use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{group_bound, Error, Result};
use crate::lattice::{IVec, IntMatrix};

/// An element of an enumerated [`WeylGroup`], by its position in length order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElt(pub usize);

impl WeylElt {
    pub const IDENTITY: WeylElt = WeylElt(0);

    pub fn index(self) -> usize {
        self.0
    }
}

/// A finite Coxeter group given by reflection matrices on `Y`, fully enumerated.
///
/// Elements are numbered in breadth-first order from the identity along right
/// multiplication by generators, so `lengths` is nondecreasing and each stored word is
/// reduced.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
    lookup: HashMap<IntMatrix, usize>,
    lengths: Vec<u32>,
    words: Vec<Vec<u8>>,
    right: Vec<Vec<u32>>,
    left: Vec<Vec<u32>>,
    inverse: Vec<u32>,
    reflections: Vec<WeylElt>,
}

impl WeylGroup {
    pub fn generate(generators: Vec<IntMatrix>) -> Result<Self> {
        let dim = generators.first().map_or(0, IntMatrix::rows);
        let bound = group_bound();
        let id = IntMatrix::identity(dim);
        let mut elements = vec![id.clone()];
        let mut lookup = HashMap::from([(id, 0usize)]);
        let mut lengths = vec![0u32];
        let mut words: Vec<Vec<u8>> = vec![Vec::new()];
        let mut right: Vec<Vec<u32>> = Vec::new();
        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(generators.len());
            for (i, s) in generators.iter().enumerate() {
                let m = &elements[head] * s;
                let idx = match lookup.get(&m) {
                    Some(&k) => k,
                    None => {
                        if elements.len() >= bound {
                            return Err(Error::Resource(format!(
                                "Weyl group enumeration exceeded the group bound {bound}"
                            )));
                        }
                        let k = elements.len();
                        let mut w = words[head].clone();
                        w.push(i as u8);
                        words.push(w);
                        lengths.push(lengths[head] + 1);
                        lookup.insert(m.clone(), k);
                        elements.push(m);
                        k
                    }
                };
                row.push(idx as u32);
            }
            right.push(row);
            head += 1;
        }
        let left = elements
            .iter()
            .map(|e| generators.iter().map(|s| lookup[&(s * e)] as u32).collect())
            .collect();
        let mut group = WeylGroup {
            generators,
            elements,
            lookup,
            lengths,
            words,
            right,
            left,
            inverse: Vec::new(),
            reflections: Vec::new(),
        };
        group.inverse = (0..group.order())
            .map(|k| {
                let mut w = group.words[k].clone();
                w.reverse();
                group.from_word(&w).0 as u32
            })
            .collect();
        group.reflections =
            group.conjugation_closure((0..group.rank()).map(|i| group.generator(i)).collect());
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = WeylElt> + '_ {
        (0..self.order()).map(WeylElt)
    }

    pub fn generator(&self, i: usize) -> WeylElt {
        WeylElt(self.right[0][i] as usize)
    }

    pub fn matrix(&self, w: WeylElt) -> &IntMatrix {
        &self.elements[w.0]
    }

    pub fn find(&self, m: &IntMatrix) -> Option<WeylElt> {
        self.lookup.get(m).map(|&k| WeylElt(k))
    }

    pub fn length(&self, w: WeylElt) -> u32 {
        self.lengths[w.0]
    }

    /// A reduced word; `w = s_{word[0]} s_{word[1]} ...`.
    pub fn reduced_word(&self, w: WeylElt) -> &[u8] {
        &self.words[w.0]
    }

    pub fn from_word(&self, word: &[u8]) -> WeylElt {
        WeylElt(
            word.iter()
                .fold(0usize, |acc, &i| self.right[acc][i as usize] as usize),
        )
    }

    pub fn mul(&self, u: WeylElt, v: WeylElt) -> WeylElt {
        WeylElt(
            self.words[v.0]
                .iter()
                .fold(u.0, |acc, &i| self.right[acc][i as usize] as usize),
        )
    }

    pub fn mul_generator_right(&self, w: WeylElt, i: usize) -> WeylElt {
        WeylElt(self.right[w.0][i] as usize)
    }

    pub fn mul_generator_left(&self, i: usize, w: WeylElt) -> WeylElt {
        WeylElt(self.left[w.0][i] as usize)
    }

    pub fn inverse(&self, w: WeylElt) -> WeylElt {
        WeylElt(self.inverse[w.0] as usize)
    }

    /// `s_i w s_i`.
    pub fn conjugate_by_generator(&self, i: usize, w: WeylElt) -> WeylElt {
        WeylElt(self.left[self.right[w.0][i] as usize][i] as usize)
    }

    /// All reflections of `W`, one per positive root.
    pub fn reflections(&self) -> &[WeylElt] {
        &self.reflections
    }

    fn conjugation_closure(&self, start: Vec<WeylElt>) -> Vec<WeylElt> {
        let mut seen: HashSet<WeylElt> = start.iter().copied().collect();
        let mut queue: VecDeque<WeylElt> = start.into();
        let mut out = Vec::new();
        while let Some(w) = queue.pop_front() {
            out.push(w);
            for i in 0..self.rank() {
                let c = self.conjugate_by_generator(i, w);
                if seen.insert(c) {
                    queue.push_back(c);
                }
            }
        }
        out.sort();
        out
    }

    pub fn conjugate(&self, g: WeylElt, h: WeylElt) -> WeylElt {
        self.mul(self.mul(g, h), self.inverse(g))
    }

    pub fn act(&self, w: WeylElt, y: &[i64]) -> IVec {
        self.elements[w.0].apply(y)
    }

    pub fn longest(&self) -> WeylElt {
        WeylElt(self.order() - 1)
    }

    /// Order of `w` as a group element.
    pub fn element_order(&self, w: WeylElt) -> usize {
        let mut k = 1;
        let mut x = w;
        while x != WeylElt::IDENTITY {
            x = self.mul(x, w);
            k += 1;
        }
        k
    }

    /// Bruhat order `u <= v`, by descent along a left descent of `v`.
    pub fn bruhat_le(&self, u: WeylElt, v: WeylElt) -> bool {
        let (mut u, mut v) = (u, v);
        loop {
            if self.length(u) > self.length(v) {
                return false;
            }
            if v == WeylElt::IDENTITY {
                return u == WeylElt::IDENTITY;
            }
            // u <= v iff min(u, s u) <= s v for any left descent s of v
            let s = self.words[v.0][0] as usize;
            let su = self.mul_generator_left(s, u);
            if self.length(su) < self.length(u) {
                u = su;
            }
            v = self.mul_generator_left(s, v);
        }
    }

    /// The subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[WeylElt]) -> Result<Subgroup> {
        let bound = group_bound();
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut elements = vec![WeylElt::IDENTITY];
        let mut queue = VecDeque::from([WeylElt::IDENTITY]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y.0] {
                    if elements.len() >= bound {
                        return Err(Error::Resource(format!(
                            "subgroup exceeds the group bound {bound}"
                        )));
                    }
                    seen[y.0] = true;
                    elements.push(y);
                    queue.push_back(y);
                }
            }
        }
        elements.sort();
        Ok(Subgroup { elements })
    }

    /// The parabolic subgroup generated by the simple reflections in `subset`.
    pub fn parabolic(&self, subset: &[usize]) -> Subgroup {
        let gens: Vec<WeylElt> = subset.iter().map(|&i| self.generator(i)).collect();
        self.subgroup(&gens)
            .expect("parabolic subgroups are no larger than W")
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup {
            elements: self.elements().collect(),
        }
    }

    /// Conjugacy class of `h` under conjugation by the elements of `by`.
    pub fn conjugacy_class(&self, h: WeylElt, by: &Subgroup) -> Vec<WeylElt> {
        let mut class: Vec<WeylElt> = by.iter().map(|g| self.conjugate(g, h)).collect();
        class.sort();
        class.dedup();
        class
    }

    /// Conjugacy classes, found as orbits of conjugation by the simple reflections.
    pub fn conjugacy_classes(&self) -> ConjugacyClasses {
        let mut class_of = vec![u32::MAX; self.order()];
        let mut sizes = Vec::new();
        let mut queue = VecDeque::new();
        for start in 0..self.order() {
            if class_of[start] != u32::MAX {
                continue;
            }
            let id = sizes.len() as u32;
            class_of[start] = id;
            queue.push_back(start);
            let mut size = 0;
            while let Some(w) = queue.pop_front() {
                size += 1;
                for i in 0..self.rank() {
                    let c = self.conjugate_by_generator(i, WeylElt(w)).0;
                    if class_of[c] == u32::MAX {
                        class_of[c] = id;
                        queue.push_back(c);
                    }
                }
            }
            sizes.push(size);
        }
        ConjugacyClasses { class_of, sizes }
    }

    /// `(-1)^length`.
    pub fn sign(&self, w: WeylElt) -> i64 {
        if self.length(w).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// The partition of an enumerated group into conjugacy classes.
#[derive(Clone, Debug)]
pub struct ConjugacyClasses {
    class_of: Vec<u32>,
    sizes: Vec<usize>,
}

impl ConjugacyClasses {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn class_of(&self, w: WeylElt) -> usize {
        self.class_of[w.0] as usize
    }

    pub fn size(&self, class: usize) -> usize {
        self.sizes[class]
    }
}

/// A subgroup of an enumerated Weyl group, as a sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    elements: Vec<WeylElt>,
}

impl Subgroup {
    pub fn from_sorted(elements: Vec<WeylElt>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = WeylElt> + '_ {
        self.elements.iter().copied()
    }

    pub fn elements(&self) -> &[WeylElt] {
        &self.elements
    }

    pub fn contains(&self, w: WeylElt) -> bool {
        self.elements.binary_search(&w).is_ok()
    }

    pub fn intersect(&self, other: &Subgroup) -> Subgroup {
        Subgroup {
            elements: self.iter().filter(|&w| other.contains(w)).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{CartanType, Flavor, RootDatum};

    fn group(t: CartanType, r: usize) -> WeylGroup {
        RootDatum::new(t, r, Flavor::Sc)
            .unwrap()
            .weyl_group()
            .unwrap()
    }

    #[test]
    fn orders_and_longest_lengths() {
        for (t, r, order, long) in [
            (CartanType::A, 2, 6, 3),
            (CartanType::B, 3, 48, 9),
            (CartanType::G, 2, 12, 6),
            (CartanType::D, 4, 192, 12),
            (CartanType::F, 4, 1152, 24),
        ] {
            let w = group(t, r);
            assert_eq!(w.order(), order);
            assert_eq!(w.length(w.longest()), long);
        }
    }

    #[test]
    fn words_inverses_and_products() {
        let w = group(CartanType::B, 3);
        for x in w.elements() {
            assert_eq!(w.from_word(w.reduced_word(x)), x);
            assert_eq!(w.mul(x, w.inverse(x)), WeylElt::IDENTITY);
            for y in w.elements().step_by(7) {
                let m = w.matrix(x) * w.matrix(y);
                assert_eq!(w.find(&m), Some(w.mul(x, y)));
            }
        }
    }

    fn subword_le(w: &WeylGroup, u: WeylElt, v: WeylElt) -> bool {
        let word = w.reduced_word(v);
        (0u32..1 << word.len()).any(|mask| {
            let sub: Vec<u8> = word
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &s)| s)
                .collect();
            w.from_word(&sub) == u
        })
    }

    #[test]
    fn bruhat_matches_subword_property() {
        for (t, r) in [(CartanType::A, 3), (CartanType::B, 2), (CartanType::G, 2)] {
            let w = group(t, r);
            for u in w.elements() {
                for v in w.elements() {
                    assert_eq!(w.bruhat_le(u, v), subword_le(&w, u, v), "{u:?} {v:?}");
                }
            }
        }
    }

    #[test]
    fn subgroups_and_classes_in_a2() {
        let w = group(CartanType::A, 2);
        let (s1, s2) = (w.generator(0), w.generator(1));
        assert_eq!(w.subgroup(&[s1]).unwrap().order(), 2);
        let both = w
            .subgroup(&[s1])
            .unwrap()
            .intersect(&w.subgroup(&[s2]).unwrap());
        assert!(both.is_trivial());
        let coxeter = w.mul(s1, s2);
        assert_eq!(w.conjugacy_class(coxeter, &w.whole()).len(), 2);
        assert!(w.bruhat_le(s1, coxeter));
    }

    #[test]
    fn one_reflection_per_positive_root() {
        for (t, r, roots) in [
            (CartanType::A, 3, 6),
            (CartanType::B, 3, 9),
            (CartanType::G, 2, 6),
            (CartanType::E, 6, 36),
        ] {
            let w = group(t, r);
            assert_eq!(w.reflections().len(), roots);
            assert!(w
                .reflections()
                .iter()
                .all(|&x| w.element_order(x) == 2 && w.length(x) % 2 == 1));
        }
    }

    #[test]
    fn class_counts() {
        for (t, r, count) in [
            (CartanType::A, 3, 5),
            (CartanType::B, 3, 10),
            (CartanType::G, 2, 6),
        ] {
            let w = group(t, r);
            let classes = w.conjugacy_classes();
            assert_eq!(classes.count(), count);
            let total: usize = (0..classes.count()).map(|c| classes.size(c)).sum();
            assert_eq!(total, w.order());
            let x = w.generator(0);
            assert_eq!(
                classes.size(classes.class_of(x)),
                w.conjugacy_class(x, &w.whole()).len()
            );
        }
    }

    #[test]
    fn oversized_groups_are_refused() {
        let e7 = RootDatum::new(CartanType::E, 7, Flavor::Sc).unwrap();
        assert!(matches!(e7.weyl_group(), Err(Error::Resource(_))));
    }
}
