//! The generic affine Hecke algebra of `Y_{Q,n} ⋊ W` in its Iwahori–Matsumoto basis.
//!
//! The affine reflections are those of the modified roots `alpha / n_alpha` with coroots
//! `n_alpha alpha^vee`. Lengths count affine walls between the fundamental alcove and its
//! image; products are computed by peeling right descents off the second factor.
//! Scalars are exact at a fixed prime power `q`, and `Theta` is untwisted here: the
//! `epsilon^D` bookkeeping of the genuine algebra lives in the module.
//!
//! `Theta_y = q^-<rho, y> T_{t_{y_1}} T_{t_{y_2}}^-1` for `y = y_1 - y_2` with `y_i` dominant,
//! where `2 rho` is the sum of the positive modified roots. With this normalization the
//! Bernstein relation has the same shape as the module action of `T_alpha`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::{prime_power, Cyclo};
use crate::lattice::{add, scale, IVec, Lattice};
use crate::rootdata::{ExtAffineElt, WeylElt, WeylGroup};

/// A finite combination `sum c_x T_x`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElt {
    terms: BTreeMap<ExtAffineElt, Cyclo>,
}

impl HeckeElt {
    pub fn zero() -> Self {
        HeckeElt::default()
    }

    pub fn basis(x: ExtAffineElt) -> Self {
        HeckeElt {
            terms: [(x, Cyclo::one())].into_iter().collect(),
        }
    }

    pub fn add_term(&mut self, x: ExtAffineElt, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x.clone()).or_insert_with(Cyclo::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_scaled(&mut self, other: &HeckeElt, c: &Cyclo) {
        for (x, v) in &other.terms {
            self.add_term(x.clone(), v * c);
        }
    }

    pub fn scaled(&self, c: &Cyclo) -> HeckeElt {
        let mut out = HeckeElt::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(other, &Cyclo::one());
        out
    }

    pub fn minus(&self, other: &HeckeElt) -> HeckeElt {
        let mut out = self.clone();
        out.add_scaled(other, &Cyclo::from_int(-1));
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtAffineElt, &Cyclo)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

struct ModifiedRoot {
    root: IVec,
    n_alpha: i64,
}

pub struct HeckeAlgebra {
    group: Arc<WeylGroup>,
    dim: usize,
    q: Cyclo,
    q_inv: Cyclo,
    sqrt_q: Cyclo,
    positive: Vec<ModifiedRoot>,
    /// `w(2 rho^vee)` for each `w`; the sign of `<alpha, w(2 rho^vee)>` is that of `w^-1 alpha`.
    regular_images: Vec<IVec>,
    /// `s_1, ..., s_r` followed by the affine reflection `s_0`.
    generators: Vec<ExtAffineElt>,
    y_qn: Lattice,
    /// Twice the modified `rho^vee`, a regular dominant element of `Y_{Q,n}`.
    regular_translation: IVec,
}

impl HeckeAlgebra {
    pub fn new(cover: &CoverSpec, q: u64) -> Result<Self> {
        let sqrt_q = sqrt_prime_power(q)?;
        let d = cover.datum();
        let group = cover.weyl_group()?;
        let dim = d.dim();
        let positive: Vec<ModifiedRoot> = d
            .positive_roots()
            .iter()
            .map(|r| ModifiedRoot {
                root: r.root.clone(),
                n_alpha: cover.n_alpha(&r.coroot),
            })
            .collect();
        let two_rho: IVec = d
            .positive_roots()
            .iter()
            .fold(vec![0; dim], |acc, r| add(&acc, &r.coroot));
        let regular_images = group.elements().map(|w| group.act(w, &two_rho)).collect();
        let regular_translation = d.positive_roots().iter().fold(vec![0; dim], |acc, r| {
            add(&acc, &scale(cover.n_alpha(&r.coroot), &r.coroot))
        });
        // the highest modified root has maximal height over the modified simple roots
        let simple_n: Vec<i64> = (0..d.rank()).map(|i| cover.simple_n_alpha(i)).collect();
        let height = |r: &crate::rootdata::Root| -> BigRational {
            let n_alpha = cover.n_alpha(&r.coroot);
            r.root_coeffs
                .iter()
                .zip(&simple_n)
                .map(|(c, m)| BigRational::new((c * m).into(), n_alpha.into()))
                .sum()
        };
        let highest = d
            .positive_roots()
            .iter()
            .max_by(|a, b| height(a).cmp(&height(b)))
            .ok_or_else(|| Error::Config("no roots".into()))?;
        let reflect_highest = group
            .find(&d.root_reflection(highest))
            .ok_or_else(|| Error::Config("highest root reflection not in W".into()))?;
        let mut generators: Vec<ExtAffineElt> = (0..d.rank())
            .map(|i| ExtAffineElt::weyl(dim, group.generator(i)))
            .collect();
        generators.push(ExtAffineElt {
            translation: scale(cover.n_alpha(&highest.coroot), &highest.coroot),
            weyl: reflect_highest,
        });
        let q_c = Cyclo::from_int(q as i64);
        let q_inv = q_c.inv()?;
        Ok(HeckeAlgebra {
            group,
            dim,
            q: q_c,
            q_inv,
            sqrt_q,
            positive,
            regular_images,
            generators,
            y_qn: cover.y_qn(),
            regular_translation,
        })
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    /// Number of Coxeter generators of the affine Weyl group, `s_0` last.
    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generator(&self, i: usize) -> &ExtAffineElt {
        &self.generators[i]
    }

    pub fn one(&self) -> HeckeElt {
        HeckeElt::basis(ExtAffineElt::identity(self.dim))
    }

    pub fn translation(&self, y: &[i64]) -> Result<ExtAffineElt> {
        if !self.y_qn.contains(y) {
            return Err(Error::Config(format!("{y:?} is not in Y_(Q,n)")));
        }
        Ok(ExtAffineElt::translation(y.to_vec()))
    }

    /// Number of affine walls `<a, x> = k` separating the fundamental alcove from `x(C)`.
    pub fn length(&self, x: &ExtAffineElt) -> u32 {
        let probe = &self.regular_images[x.weyl.index()];
        self.positive
            .iter()
            .map(|a| {
                let shift: i64 = a
                    .root
                    .iter()
                    .zip(&x.translation)
                    .map(|(u, v)| u * v)
                    .sum::<i64>()
                    / a.n_alpha;
                let positive_image = a.root.iter().zip(probe).map(|(u, v)| u * v).sum::<i64>() > 0;
                if positive_image {
                    shift.unsigned_abs()
                } else {
                    (shift - 1).unsigned_abs()
                }
            })
            .sum::<u64>() as u32
    }

    fn compose(&self, a: &ExtAffineElt, b: &ExtAffineElt) -> ExtAffineElt {
        a.compose(&self.group, b)
    }

    /// `x = tau s_{i_1} ... s_{i_k}` with `tau` of length zero and the word reduced.
    pub fn factor(&self, x: &ExtAffineElt) -> (ExtAffineElt, Vec<usize>) {
        let mut word = Vec::new();
        let mut cur = x.clone();
        let mut len = self.length(&cur);
        while len > 0 {
            let (i, next) = (0..self.generators.len())
                .map(|i| (i, self.compose(&cur, &self.generators[i])))
                .find(|(_, y)| self.length(y) < len)
                .expect("a nontrivial element has a right descent");
            word.push(i);
            cur = next;
            len -= 1;
        }
        word.reverse();
        (cur, word)
    }

    /// `h T_{s_i}` by the quadratic relation.
    pub fn mul_generator(&self, h: &HeckeElt, i: usize) -> HeckeElt {
        let s = &self.generators[i];
        let q1 = &self.q - Cyclo::one();
        let mut out = HeckeElt::zero();
        for (x, c) in h.terms() {
            let xs = self.compose(x, s);
            if self.length(&xs) > self.length(x) {
                out.add_term(xs, c.clone());
            } else {
                out.add_term(x.clone(), c * &q1);
                out.add_term(xs, c * &self.q);
            }
        }
        out
    }

    fn mul_length_zero(&self, h: &HeckeElt, tau: &ExtAffineElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (x, c) in h.terms() {
            out.add_term(self.compose(x, tau), c.clone());
        }
        out
    }

    pub fn mul(&self, a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
        let mut out = HeckeElt::zero();
        for (y, c) in b.terms() {
            let (tau, word) = self.factor(y);
            let prod = word.iter().fold(self.mul_length_zero(a, &tau), |acc, &i| {
                self.mul_generator(&acc, i)
            });
            out.add_scaled(&prod, c);
        }
        out
    }

    /// `T_x^-1 = T_{s_k}^-1 ... T_{s_1}^-1 T_{tau^-1}` with `T_s^-1 = q^-1 T_s + (q^-1 - 1)`.
    pub fn inverse_basis(&self, x: &ExtAffineElt) -> HeckeElt {
        let (tau, word) = self.factor(x);
        let shift = &self.q_inv - Cyclo::one();
        let mut acc = self.one();
        for &i in word.iter().rev() {
            let mut next = self.mul_generator(&acc, i).scaled(&self.q_inv);
            next.add_scaled(&acc, &shift);
            acc = next;
        }
        self.mul_length_zero(&acc, &tau.inverse(&self.group))
    }

    fn is_dominant(&self, y: &[i64]) -> bool {
        self.positive
            .iter()
            .all(|a| a.root.iter().zip(y).map(|(u, v)| u * v).sum::<i64>() >= 0)
    }

    /// `q^(k/2)`, exact in a cyclotomic field.
    pub fn q_half_power(&self, k: i64) -> Result<Cyclo> {
        let a = k.div_euclid(2);
        let whole = if a >= 0 {
            self.q.pow(a)?
        } else {
            self.q_inv.pow(-a)?
        };
        Ok(if k.rem_euclid(2) == 1 {
            whole * &self.sqrt_q
        } else {
            whole
        })
    }

    /// `Theta_y` through the decomposition `y = (y + y_2) - y_2`.
    fn theta_via(&self, y: &[i64], y2: &[i64]) -> Result<HeckeElt> {
        let y1 = add(y, y2);
        let t1 = ExtAffineElt::translation(y1);
        let t2 = ExtAffineElt::translation(y2.to_vec());
        // 2<rho, y> = l(t_{y_1}) - l(t_{y_2}) since both are dominant
        let twice_rho = self.length(&t1) as i64 - self.length(&t2) as i64;
        let raw = if y2.iter().all(|&v| v == 0) {
            HeckeElt::basis(t1)
        } else {
            self.mul(&HeckeElt::basis(t1), &self.inverse_basis(&t2))
        };
        Ok(raw.scaled(&self.q_half_power(-twice_rho)?))
    }

    fn bernstein_offset(&self, y: &[i64]) -> IVec {
        let mut y2 = vec![0; self.dim];
        while !self.is_dominant(&add(y, &y2)) {
            y2 = add(&y2, &self.regular_translation);
        }
        y2
    }

    pub fn bernstein_theta(&self, y: &[i64]) -> Result<HeckeElt> {
        self.translation(y)?;
        self.theta_via(y, &self.bernstein_offset(y))
    }

    /// The difference between the decompositions with `y_2` and `y_2 + extra`; zero when
    /// `Theta_y` is well defined.
    pub fn theta_decomposition_defect(&self, y: &[i64], extra: &[i64]) -> Result<HeckeElt> {
        self.translation(extra)?;
        if !self.is_dominant(extra) {
            return Err(Error::Config(format!("{extra:?} is not dominant")));
        }
        let y2 = self.bernstein_offset(y);
        Ok(self
            .theta_via(y, &y2)?
            .minus(&self.theta_via(y, &add(&y2, extra))?))
    }

    /// `T_w` for `w` in the finite Weyl group.
    pub fn finite(&self, w: WeylElt) -> HeckeElt {
        HeckeElt::basis(ExtAffineElt::weyl(self.dim, w))
    }
}

/// `sqrt(q)` for a prime power `q`, from the quadratic Gauss sum over the prime field.
fn sqrt_prime_power(q: u64) -> Result<Cyclo> {
    let (p, f) =
        prime_power(q).ok_or_else(|| Error::Config(format!("q = {q} is not a prime power")))?;
    let whole = Cyclo::from_int((p as i64).pow(f / 2));
    if f % 2 == 0 {
        return Ok(whole);
    }
    let sqrt_p = if p == 2 {
        Cyclo::root_of_unity(8, 1) + Cyclo::root_of_unity(8, -1)
    } else {
        let legendre = |u: u64| -> i64 {
            let mut acc = 1u64;
            for _ in 0..(p - 1) / 2 {
                acc = acc * u % p;
            }
            if acc == 1 {
                1
            } else {
                -1
            }
        };
        let mut counts = vec![0i64; p as usize];
        for u in 1..p {
            counts[u as usize] = legendre(u);
        }
        let g = Cyclo::from_power_counts(p, &counts);
        // g^2 = (-1)^((p-1)/2) p
        if p % 4 == 1 {
            g
        } else {
            -(Cyclo::root_of_unity(4, 1) * g)
        }
    };
    Ok(whole * sqrt_p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn algebra(t: CartanType, r: usize, n: u64, q_short: i64) -> HeckeAlgebra {
        let c = CoverSpec::simply_connected(t, r, n, q_short).unwrap();
        HeckeAlgebra::new(&c, 5).unwrap()
    }

    #[test]
    fn square_roots_of_prime_powers() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 25, 27] {
            let r = sqrt_prime_power(q).unwrap();
            assert_eq!(&r * &r, Cyclo::from_int(q as i64), "q = {q}");
        }
    }

    #[test]
    fn generators_have_length_one_and_satisfy_quadratic_relation() {
        for (t, r, n) in [
            (CartanType::A, 1, 1),
            (CartanType::A, 2, 2),
            (CartanType::B, 2, 2),
            (CartanType::G, 2, 3),
        ] {
            let h = algebra(t, r, n, 1);
            for i in 0..h.generator_count() {
                assert_eq!(h.length(h.generator(i)), 1, "{t}{r} s{i}");
                let ts = HeckeElt::basis(h.generator(i).clone());
                let mut expected = ts.scaled(&Cyclo::from_int(4));
                expected.add_scaled(&h.one(), &Cyclo::from_int(5));
                assert_eq!(h.mul(&ts, &ts), expected);
            }
        }
    }

    #[test]
    fn length_additive_products_are_basis_elements() {
        let h = algebra(CartanType::A, 2, 1, 1);
        let g = h.group();
        let u = ExtAffineElt::weyl(2, g.generator(0));
        let v = ExtAffineElt::weyl(2, g.generator(1));
        let uv = u.compose(g, &v);
        assert_eq!(h.length(&uv), 2);
        assert_eq!(
            h.mul(&HeckeElt::basis(u), &HeckeElt::basis(v)),
            HeckeElt::basis(uv)
        );
    }

    fn random_element(h: &HeckeAlgebra, rng: &mut ChaCha8Rng) -> HeckeElt {
        let g = h.group();
        let mut out = HeckeElt::zero();
        for _ in 0..2 {
            let w = WeylElt(rng.gen_range(0..g.order()));
            let mut t = vec![0; h.dim];
            for b in h.y_qn.basis() {
                t = add(&t, &scale(rng.gen_range(-1..=1), b));
            }
            out.add_term(
                ExtAffineElt {
                    translation: t,
                    weyl: w,
                },
                Cyclo::from_int(rng.gen_range(-3..=3)),
            );
        }
        out
    }

    #[test]
    fn associativity_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (t, r, n) in [
            (CartanType::A, 1, 1),
            (CartanType::A, 2, 1),
            (CartanType::A, 1, 4),
        ] {
            let h = algebra(t, r, n, -1);
            for _ in 0..50 {
                let (a, b, c) = (
                    random_element(&h, &mut rng),
                    random_element(&h, &mut rng),
                    random_element(&h, &mut rng),
                );
                assert_eq!(h.mul(&h.mul(&a, &b), &c), h.mul(&a, &h.mul(&b, &c)));
            }
        }
    }

    #[test]
    fn theta_is_a_group_homomorphism_independent_of_decomposition() {
        let h = algebra(CartanType::A, 2, 1, 1);
        let ys = [vec![1, 0], vec![-1, 1], vec![0, -1], vec![2, -1]];
        for y in &ys {
            assert!(h.theta_decomposition_defect(y, &[1, 1]).unwrap().is_empty());
            assert!(h.theta_decomposition_defect(y, &[2, 1]).unwrap().is_empty());
            for z in &ys {
                let lhs = h.mul(
                    &h.bernstein_theta(y).unwrap(),
                    &h.bernstein_theta(z).unwrap(),
                );
                assert_eq!(lhs, h.bernstein_theta(&add(y, z)).unwrap());
            }
            let inverse = h.mul(
                &h.bernstein_theta(y).unwrap(),
                &h.bernstein_theta(&scale(-1, y)).unwrap(),
            );
            assert_eq!(inverse, h.one());
        }
    }

    #[test]
    fn half_integral_normalization_on_fourfold_sl2() {
        // Y_{Q,n} = 2Z alpha^vee contains a translation of odd length
        let h = algebra(CartanType::A, 1, 4, -1);
        assert_eq!(h.length(&ExtAffineElt::translation(vec![2])), 1);
        let up = h.bernstein_theta(&[2]).unwrap();
        let down = h.bernstein_theta(&[-2]).unwrap();
        assert_eq!(h.mul(&up, &down), h.one());
    }

    #[test]
    fn linear_rank_one_bernstein_relation() {
        let h = algebra(CartanType::A, 1, 1, 1);
        let ts = h.finite(h.group().generator(0));
        let up = h.bernstein_theta(&[1]).unwrap();
        let down = h.bernstein_theta(&[-1]).unwrap();
        let lhs = h.mul(&up, &ts).minus(&h.mul(&ts, &down));
        let rhs = up.plus(&h.one()).scaled(&Cyclo::from_int(4));
        assert_eq!(lhs, rhs);
    }
}
