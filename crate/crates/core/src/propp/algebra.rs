//! The pro-p Iwahori–Hecke algebra in its Iwahori–Matsumoto basis `{T_x : x in W(1)}`.
//!
//! `T_(zeta x) = zeta T_x`. Products peel right descents off the second factor: when
//! lengths add `T_x T_g = T_(xg)`, otherwise `x = x' g` and the quadratic relation
//! `T_g^2 = q T_(g^2) + sum_u chi_g(u) T_(h(u) g)` applies, with `chi_g` trivial for the
//! simple reflection and `u -> (u, varpi)^Q` for the affine one.
//!
//! Scalars live in `Q(zeta_(q-1))`, which contains `mu_n` and every character of `T_kappa`.

use std::collections::BTreeMap;

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::Cyclo;

use super::group::{Generator, ScaledW1, W1Elt, W1Group};

/// A finite combination `sum c_x T_x`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProPElt {
    terms: BTreeMap<W1Elt, Cyclo>,
}

impl ProPElt {
    pub fn zero() -> Self {
        ProPElt::default()
    }

    pub fn basis(x: W1Elt) -> Self {
        ProPElt {
            terms: [(x, Cyclo::one())].into_iter().collect(),
        }
    }

    pub fn add_term(&mut self, x: W1Elt, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x).or_insert_with(Cyclo::zero);
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&x);
        }
    }

    pub fn add_scaled(&mut self, other: &ProPElt, c: &Cyclo) {
        for (x, v) in &other.terms {
            self.add_term(*x, v * c);
        }
    }

    pub fn scaled(&self, c: &Cyclo) -> ProPElt {
        let mut out = ProPElt::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn plus(&self, other: &ProPElt) -> ProPElt {
        let mut out = self.clone();
        out.add_scaled(other, &Cyclo::one());
        out
    }

    pub fn minus(&self, other: &ProPElt) -> ProPElt {
        let mut out = self.clone();
        out.add_scaled(other, &Cyclo::from_int(-1));
        out
    }

    pub fn coefficient(&self, x: &W1Elt) -> Cyclo {
        self.terms.get(x).cloned().unwrap_or_else(Cyclo::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&W1Elt, &Cyclo)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A right-descent factorization `x = zeta h(u) g_1 ... g_k` with `k = length(x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub head: ScaledW1,
    pub word: Vec<Generator>,
}

pub struct ProPAlgebra {
    group: W1Group,
    q: u64,
}

impl ProPAlgebra {
    pub fn new(cover: &CoverSpec, q: u64) -> Result<Self> {
        Ok(ProPAlgebra {
            group: W1Group::new(cover, q)?,
            q,
        })
    }

    pub fn group(&self) -> &W1Group {
        &self.group
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// `zeta_n^k` inside `Q(zeta_(q-1))`.
    pub fn zeta(&self, k: u64) -> Cyclo {
        let m = self.group.units();
        Cyclo::root_of_unity(m, (k * (m / self.group.n())) as i64)
    }

    /// `chi_k(g^a) = zeta_(q-1)^(k a)`.
    pub fn character_value(&self, chi: u64, unit_log: u64) -> Cyclo {
        let m = self.group.units();
        Cyclo::root_of_unity(m, ((chi * unit_log) % m) as i64)
    }

    pub fn scaled_basis(&self, x: &ScaledW1) -> ProPElt {
        ProPElt::basis(x.elt).scaled(&self.zeta(x.zeta))
    }

    pub fn one(&self) -> ProPElt {
        ProPElt::basis(W1Elt::IDENTITY)
    }

    pub fn t(&self, x: W1Elt) -> ProPElt {
        ProPElt::basis(x)
    }

    pub fn t_generator(&self, g: Generator) -> ProPElt {
        ProPElt::basis(g.elt())
    }

    /// Exponent `k` with `chi_g(g^a) = zeta_n^(k a)` in the quadratic relation of `g`.
    fn quadratic_character(&self, g: Generator) -> u64 {
        match g {
            Generator::Simple => 0,
            Generator::Affine => {
                let q_form = self.group.q_form().rem_euclid(self.group.n() as i64) as u64;
                self.group.unit_symbol(1, 1) * q_form % self.group.n()
            }
        }
    }

    pub fn factor(&self, x: &W1Elt) -> Factorization {
        let grp = &self.group;
        let mut current = ScaledW1 { zeta: 0, elt: *x };
        let mut word = Vec::new();
        while grp.length(&current.elt) > 0 {
            let len = grp.length(&current.elt);
            let (g, shorter) = Generator::ALL
                .iter()
                .map(|&g| (g, grp.mul_scaled(&current, &grp.inverse(&g.elt()))))
                .find(|(_, s)| grp.length(&s.elt) < len)
                .expect("every element of positive length has a right descent");
            word.push(g);
            current = shorter;
        }
        word.reverse();
        Factorization {
            head: current,
            word,
        }
    }

    pub fn mul_generator(&self, a: &ProPElt, g: Generator) -> ProPElt {
        let grp = &self.group;
        let ge = ScaledW1 {
            zeta: 0,
            elt: g.elt(),
        };
        let chi = self.quadratic_character(g);
        let q = Cyclo::from_int(self.q as i64);
        let mut out = ProPElt::zero();
        for (x, c) in a.terms() {
            let xs = ScaledW1 { zeta: 0, elt: *x };
            let xg = grp.mul_scaled(&xs, &ge);
            if grp.length(&xg.elt) > grp.length(x) {
                out.add_scaled(&self.scaled_basis(&xg), c);
                continue;
            }
            let shorter = grp.mul_scaled(&xs, &grp.inverse(&g.elt()));
            let square = grp.mul_scaled(&grp.mul_scaled(&shorter, &ge), &ge);
            out.add_scaled(&self.scaled_basis(&square), &(c * &q));
            for u in 0..grp.units() {
                let h = ScaledW1 {
                    zeta: chi * u % grp.n(),
                    elt: W1Elt::torus(0, u),
                };
                let term = grp.mul_scaled(&grp.mul_scaled(&shorter, &h), &ge);
                out.add_scaled(&self.scaled_basis(&term), c);
            }
        }
        out
    }

    /// Right multiplication by the length-zero element `T_h`.
    fn mul_length_zero(&self, a: &ProPElt, h: &ScaledW1) -> ProPElt {
        let mut out = ProPElt::zero();
        for (x, c) in a.terms() {
            let p = self.group.mul_scaled(&ScaledW1 { zeta: 0, elt: *x }, h);
            out.add_scaled(&self.scaled_basis(&p), c);
        }
        out
    }

    pub fn mul_basis(&self, a: &ProPElt, x: &W1Elt) -> ProPElt {
        let f = self.factor(x);
        let mut acc = self.mul_length_zero(a, &f.head);
        for g in f.word {
            acc = self.mul_generator(&acc, g);
        }
        acc
    }

    pub fn mul(&self, a: &ProPElt, b: &ProPElt) -> ProPElt {
        let mut out = ProPElt::zero();
        for (x, c) in b.terms() {
            out.add_scaled(&self.mul_basis(a, x), c);
        }
        out
    }

    pub fn product(&self, factors: &[ProPElt]) -> ProPElt {
        factors.iter().fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    /// `T_g^-1 = q^-1 (T_(g^-1) - sum_u chi_g(u) T_(g^-2 h(u)))`.
    pub fn generator_inverse(&self, g: Generator) -> ProPElt {
        let grp = &self.group;
        let inv = grp.inverse(&g.elt());
        let inv_sq = grp.mul_scaled(&inv, &inv);
        let chi = self.quadratic_character(g);
        let mut out = self.scaled_basis(&inv);
        for u in 0..grp.units() {
            let h = ScaledW1 {
                zeta: chi * u % grp.n(),
                elt: W1Elt::torus(0, u),
            };
            out.add_scaled(
                &self.scaled_basis(&grp.mul_scaled(&inv_sq, &h)),
                &Cyclo::from_int(-1),
            );
        }
        out.scaled(&Cyclo::frac(1, self.q as i64))
    }

    pub fn inverse_basis(&self, x: &W1Elt) -> ProPElt {
        let f = self.factor(x);
        let head_inv = self.group.inverse(&f.head.elt);
        let head_inv = ScaledW1 {
            zeta: (head_inv.zeta + self.group.n() - f.head.zeta) % self.group.n(),
            ..head_inv
        };
        let mut acc = self.one();
        for g in f.word.iter().rev() {
            acc = self.mul(&acc, &self.generator_inverse(*g));
        }
        self.mul_length_zero(&acc, &head_inv)
    }

    /// `c(chi_k) = (q-1)^-1 sum_u chi_k(u) T_h(u)`.
    pub fn idempotent(&self, chi: u64) -> ProPElt {
        let m = self.group.units();
        let mut out = ProPElt::zero();
        for u in 0..m {
            out.add_term(W1Elt::torus(0, u), self.character_value(chi, u));
        }
        out.scaled(&Cyclo::frac(1, m as i64))
    }

    /// `c_alpha(j) = (q-1)^-1 sum_b (b, varpi)^j Theta_h(b)`.
    pub fn c_alpha(&self, j: i64) -> ProPElt {
        let m = self.group.units();
        let mut out = ProPElt::zero();
        for u in 0..m {
            out.add_term(W1Elt::torus(0, u), self.zeta(self.group.unit_symbol(u, j)));
        }
        out.scaled(&Cyclo::frac(1, m as i64))
    }

    /// `Theta_(s_y) = q^-y (varpi, varpi)^(D y k) T_(s_(y+k)) T_(s_k)^-1` for any
    /// `k >= max(0, -y)`, from `s_y s_k = (varpi, varpi)^(D y k) s_(y+k)`.
    ///
    /// The factor `q^-<rho, y> = q^-y` is the normalization under which the Bernstein
    /// relation holds; without it dominant `Theta_(s_y)` would equal `T_(s_y)`.
    pub fn theta_via(&self, y: i64, shift: i64) -> Result<ProPElt> {
        if shift < 0 || y + shift < 0 {
            return Err(Error::Config(format!(
                "shift {shift} does not make both parts of {y} dominant"
            )));
        }
        let grp = &self.group;
        let q_power = if y >= 0 {
            Cyclo::frac(1, self.q as i64).pow(y)
        } else {
            Cyclo::from_int(self.q as i64).pow(-y)
        }?;
        let scalar =
            self.zeta(grp.mul(&W1Elt::torus(y, 0), &W1Elt::torus(shift, 0)).zeta) * q_power;
        let lead = self.t(W1Elt::torus(y + shift, 0));
        Ok(self
            .mul(&lead, &self.inverse_basis(&W1Elt::torus(shift, 0)))
            .scaled(&scalar))
    }

    /// `Theta_t` for `t = zeta_n^zeta s_y h(u)`.
    pub fn theta(&self, y: i64, unit_log: u64, zeta: u64) -> ProPElt {
        let base = self
            .theta_via(y, (-y).max(0))
            .expect("the minimal shift is admissible");
        self.mul(&base, &self.t(W1Elt::torus(0, unit_log)))
            .scaled(&self.zeta(zeta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    fn algebra(n: u64, q: u64) -> ProPAlgebra {
        ProPAlgebra::new(
            &CoverSpec::simply_connected(CartanType::A, 1, n, -1).unwrap(),
            q,
        )
        .unwrap()
    }

    #[test]
    fn factorization_reproduces_the_element() {
        let h = algebra(4, 5);
        let grp = h.group();
        for y in -3..=3 {
            for reflected in [false, true] {
                let x = W1Elt {
                    y,
                    unit_log: 3,
                    reflected,
                };
                let f = h.factor(&x);
                assert_eq!(f.word.len() as u64, grp.length(&x));
                let rebuilt = f.word.iter().fold(f.head, |acc, g| {
                    grp.mul_scaled(
                        &acc,
                        &ScaledW1 {
                            zeta: 0,
                            elt: g.elt(),
                        },
                    )
                });
                assert_eq!(rebuilt, ScaledW1 { zeta: 0, elt: x });
            }
        }
    }

    #[test]
    fn basis_elements_are_invertible() {
        let h = algebra(4, 5);
        for y in -2..=2 {
            for reflected in [false, true] {
                let x = W1Elt {
                    y,
                    unit_log: 1,
                    reflected,
                };
                let inv = h.inverse_basis(&x);
                assert_eq!(h.mul(&h.t(x), &inv), h.one(), "{x:?}");
                assert_eq!(h.mul(&inv, &h.t(x)), h.one(), "{x:?}");
            }
        }
    }

    #[test]
    fn theta_is_independent_of_the_dominant_split() {
        let h = algebra(6, 7);
        for y in -2..=2i64 {
            let base = h.theta_via(y, (-y).max(0)).unwrap();
            for extra in 1..=2 {
                assert_eq!(
                    h.theta_via(y, (-y).max(0) + extra).unwrap(),
                    base,
                    "y = {y}"
                );
            }
        }
        assert!(h.theta_via(-2, 1).is_err());
    }

    #[test]
    fn dominant_theta_is_a_rescaled_basis_element() {
        let h = algebra(4, 5);
        let t2 = h.t(W1Elt::torus(2, 0)).scaled(&Cyclo::frac(1, 25));
        assert_eq!(h.theta(2, 0, 0), t2);
        assert_eq!(h.theta(0, 3, 0), h.t(W1Elt::torus(0, 3)));
    }

    #[test]
    fn idempotents_are_orthogonal_and_complete() {
        let h = algebra(4, 5);
        let mut total = ProPElt::zero();
        for chi in 0..4 {
            let c = h.idempotent(chi);
            assert_eq!(h.mul(&c, &c), c);
            assert!(h.mul(&c, &h.idempotent((chi + 1) % 4)).is_zero());
            total = total.plus(&c);
        }
        assert_eq!(total, h.one());
    }
}
