//! Structural identities of the pro-p algebra, each recomputed from an independent
//! formula and compared with the normal-form products.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::{epsilon, hilbert_symbol, Cyclo, TameElement};
use crate::heckemod::{canonicalize_torus_word, HeckeAlgebra, HeckeElt, TorusFactor};
use crate::rootdata::ExtAffineElt;

use super::algebra::{ProPAlgebra, ProPElt};
use super::group::{Generator, ScaledW1, W1Elt};

/// Largest residue field the exhaustive sweeps accept.
pub const MAX_CHECK_Q: u64 = 7;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProPReport {
    pub cover: String,
    pub q: u64,
    pub quadratic_finite: bool,
    pub quadratic_affine: bool,
    pub invertible: bool,
    pub torus_commutation: bool,
    pub idempotent_commutation: bool,
    /// `c(chi') T_x c(chi) != 0` exactly when `chi' = x . chi`.
    pub idempotent_support: bool,
    /// Nonvanishing of `c(chi') H c(chi)` partitions characters into `W ⋉ X_{Q,n}` orbits.
    pub orbit_partition: bool,
    pub orbit_sizes: Vec<usize>,
    pub associativity_triples: usize,
    pub associativity: bool,
    /// The Bernstein relation for `s_y` with `y = alpha^vee`.
    pub bernstein_coroot: bool,
    /// The same relation for every `y` in `[-2, 2]`.
    pub bernstein_window: bool,
    pub triangularity: bool,
    pub theta_epsilon: bool,
    pub iwahori_projection: bool,
}

impl ProPReport {
    pub fn passed(&self) -> bool {
        self.quadratic_finite
            && self.quadratic_affine
            && self.invertible
            && self.torus_commutation
            && self.idempotent_commutation
            && self.idempotent_support
            && self.orbit_partition
            && self.associativity
            && self.bernstein_coroot
            && self.bernstein_window
            && self.triangularity
            && self.theta_epsilon
            && self.iwahori_projection
    }
}

struct Checker<'a> {
    h: ProPAlgebra,
    cover: &'a CoverSpec,
    q: u64,
    n: u64,
    units: u64,
    epsilon: i64,
    /// Exponent of `(g, varpi)_n`, recomputed from the symbol.
    unit_pi: u64,
}

impl Checker<'_> {
    fn t(&self, y: i64, unit_log: u64, reflected: bool) -> ProPElt {
        self.h.t(W1Elt {
            y,
            unit_log,
            reflected,
        })
    }

    fn eps_power(&self, k: i64) -> Cyclo {
        Cyclo::from_int(if self.epsilon == -1 && k.rem_euclid(2) == 1 {
            -1
        } else {
            1
        })
    }

    /// `(u, varpi)^k` for `u = g^a`.
    fn symbol(&self, a: u64, k: i64) -> Cyclo {
        let e = (self.unit_pi as i128 * a as i128 * k as i128).rem_euclid(self.n as i128) as u64;
        self.h.zeta(e)
    }

    /// The `W ⋉ X_{Q,n}` action on `chi_k`: `w` inverts, `s_y` twists by `(-, varpi)^(-B y)`.
    fn act(&self, y: i64, reflected: bool, chi: u64) -> u64 {
        let m = self.units as i128;
        let b = self.cover.bq(&[1], &[1]) as i128;
        let base = if reflected {
            -(chi as i128)
        } else {
            chi as i128
        };
        let twist = (m / self.n as i128) * self.unit_pi as i128 * (-b * y as i128);
        (base + twist).rem_euclid(m) as u64
    }

    fn quadratic(&self, g: Generator) -> bool {
        let tg = self.h.t_generator(g);
        let lhs = self.h.mul(&tg, &tg);
        let q_form = self.cover.q(&[1]);
        let (sign, chi_power) = match g {
            Generator::Simple => (Cyclo::one(), 0),
            Generator::Affine => (self.eps_power(q_form), q_form),
        };
        let minus_one = self.h.group().minus_one_log();
        let mut rhs = self
            .t(0, minus_one, false)
            .scaled(&(sign * Cyclo::from_int(self.q as i64)));
        for a in 0..self.units {
            let term = self.h.mul(&self.t(0, a, false), &tg);
            rhs.add_scaled(&term, &self.symbol(a, chi_power));
        }
        lhs == rhs
    }

    fn invertible(&self) -> bool {
        (-2..=2).all(|y| {
            [false, true].iter().all(|&reflected| {
                let x = W1Elt {
                    y,
                    unit_log: 1 % self.units,
                    reflected,
                };
                let inv = self.h.inverse_basis(&x);
                self.h.mul(&self.h.t(x), &inv) == self.h.one()
                    && self.h.mul(&inv, &self.h.t(x)) == self.h.one()
            })
        })
    }

    /// `T_g T_h(u) = T_(g h(u) g^-1) T_g` with the conjugate from the symbol relations.
    fn torus_commutation(&self) -> bool {
        let b = self.cover.bq(&[1], &[1]);
        (0..self.units).all(|a| {
            let inv = (self.units - a) % self.units;
            Generator::ALL.iter().all(|&g| {
                let tg = self.h.t_generator(g);
                let lhs = self.h.mul(&tg, &self.t(0, a, false));
                let scalar = match g {
                    Generator::Simple => Cyclo::one(),
                    Generator::Affine => self.symbol(a, -b),
                };
                let rhs = self.h.mul(&self.t(0, inv, false), &tg).scaled(&scalar);
                lhs == rhs
            })
        })
    }

    fn idempotent_commutation(&self) -> bool {
        let thetas: Vec<(i64, ProPElt)> = (-2..=2).map(|y| (y, self.h.theta(y, 0, 0))).collect();
        (0..self.units).all(|chi| {
            let c = self.h.idempotent(chi);
            let generators_ok = Generator::ALL.iter().all(|&g| {
                let x = g.elt();
                let tg = self.h.t_generator(g);
                let image = self.h.idempotent(self.act(x.y, x.reflected, chi));
                self.h.mul(&tg, &c) == self.h.mul(&image, &tg)
            });
            generators_ok
                && thetas.iter().all(|(y, th)| {
                    let image = self.h.idempotent(self.act(*y, false, chi));
                    self.h.mul(th, &c) == self.h.mul(&image, th)
                })
        })
    }

    fn orbits(&self) -> Vec<Vec<u64>> {
        let mut seen = vec![false; self.units as usize];
        let mut out = Vec::new();
        for start in 0..self.units {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = vec![start];
            seen[start as usize] = true;
            let mut i = 0;
            while i < orbit.len() {
                let k = orbit[i];
                for next in [self.act(0, true, k), self.act(1, false, k)] {
                    if !seen[next as usize] {
                        seen[next as usize] = true;
                        orbit.push(next);
                    }
                }
                i += 1;
            }
            orbit.sort_unstable();
            out.push(orbit);
        }
        out
    }

    /// Returns (support law, orbit partition).
    fn idempotent_support(&self, orbits: &[Vec<u64>]) -> (bool, bool) {
        let m = self.units as usize;
        let idempotents: Vec<ProPElt> = (0..self.units).map(|k| self.h.idempotent(k)).collect();
        let mut linked = vec![vec![false; m]; m];
        let mut law = true;
        let span = self.n as i64;
        for y in -span..=span {
            for reflected in [false, true] {
                let tx = self.t(y, 0, reflected);
                for chi in 0..self.units {
                    let right = self.h.mul(&tx, &idempotents[chi as usize]);
                    let expected = self.act(y, reflected, chi);
                    for chi2 in 0..self.units {
                        let nonzero = !self.h.mul(&idempotents[chi2 as usize], &right).is_zero();
                        law &= nonzero == (chi2 == expected);
                        linked[chi as usize][chi2 as usize] |= nonzero;
                    }
                }
            }
        }
        let orbit_of = |k: u64| orbits.iter().position(|o| o.contains(&k));
        let partition = (0..self.units).all(|a| {
            (0..self.units).all(|b| linked[a as usize][b as usize] == (orbit_of(a) == orbit_of(b)))
        });
        (law, partition)
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> ProPElt {
        let mut out = ProPElt::zero();
        for _ in 0..rng.gen_range(1..=3) {
            let x = W1Elt {
                y: rng.gen_range(-2..=2),
                unit_log: rng.gen_range(0..self.units),
                reflected: rng.gen_bool(0.5),
            };
            let c = [-2, -1, 1, 2][rng.gen_range(0..4)];
            out.add_term(x, Cyclo::from_int(c));
        }
        out
    }

    fn associativity(&self, triples: usize, seed: u64) -> bool {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..triples).all(|_| {
            let (a, b, c) = (
                self.random_element(&mut rng),
                self.random_element(&mut rng),
                self.random_element(&mut rng),
            );
            self.h.mul(&self.h.mul(&a, &b), &c) == self.h.mul(&a, &self.h.mul(&b, &c))
        })
    }

    fn theta_of(&self, s: &ScaledW1) -> ProPElt {
        self.h.theta(s.elt.y, s.elt.unit_log, s.zeta)
    }

    /// `T_w Theta_(s_y) - Theta_(w s_y w^-1) T_w` against the finitely many correction terms
    /// `(q-1) eps^(j Q (1+m)) Theta_(s_y h(varpi^j)) c_alpha((j+m) Q)` left after cancelling
    /// the common tails, `m = <y, alpha>`.
    fn bernstein(&self, y: i64) -> bool {
        let grp = self.h.group();
        let w = Generator::Simple.elt();
        let tw = self.h.t(w);
        let sy = W1Elt::torus(y, 0);
        let conj = grp.mul_scaled(&grp.mul(&w, &sy), &grp.inverse(&w));
        let lhs = self
            .h
            .mul(&tw, &self.h.theta(y, 0, 0))
            .minus(&self.h.mul(&self.theta_of(&conj), &tw));
        let m = 2 * y;
        let q_form = self.cover.q(&[1]);
        let (range, sign) = if m > 0 { (1 - m..=0, 1) } else { (1..=-m, -1) };
        let mut rhs = ProPElt::zero();
        for j in range {
            let shifted = grp.mul(&sy, &W1Elt::torus(j, 0));
            let term = self
                .h
                .mul(&self.theta_of(&shifted), &self.h.c_alpha((j + m) * q_form));
            let scalar =
                self.eps_power(j * q_form * (1 + m)) * Cyclo::from_int(sign * (self.q as i64 - 1));
            rhs.add_scaled(&term, &scalar);
        }
        lhs == rhs
    }

    fn triangularity(&self) -> bool {
        let grp = self.h.group();
        (-2..=2).all(|y| {
            (0..self.units).all(|a| {
                [false, true].iter().all(|&reflected| {
                    let mut e = self.h.theta(y, a, 0);
                    if reflected {
                        e = self.h.mul(&e, &self.h.t_generator(Generator::Simple));
                    }
                    let lead = W1Elt {
                        y,
                        unit_log: a,
                        reflected,
                    };
                    let top = grp.length(&lead);
                    !e.coefficient(&lead).is_zero()
                        && e.terms().all(|(x, _)| *x == lead || grp.length(x) < top)
                })
            })
        })
    }

    fn theta_epsilon(&self) -> bool {
        (-2..=2i64).all(|y1| {
            (-2..=2i64).all(|y2| {
                let nf = canonicalize_torus_word(
                    self.cover,
                    &[
                        TorusFactor::Section(vec![y1]),
                        TorusFactor::Section(vec![y2]),
                    ],
                );
                let lhs = self.h.mul(&self.h.theta(y1, 0, 0), &self.h.theta(y2, 0, 0));
                lhs == self.h.theta(nf.y[0], 0, 0).scaled(&nf.scalar(self.epsilon))
            })
        })
    }

    /// `(T_w c(1))^2` reproduces the Iwahori-level quadratic relation of `heckemod`.
    fn iwahori_projection(&self) -> Result<bool> {
        let iwahori = HeckeAlgebra::new(self.cover, self.q)?;
        let s = iwahori.generator(0).clone();
        let square = iwahori.mul(&HeckeElt::basis(s.clone()), &HeckeElt::basis(s.clone()));
        let coefficient = |x: &ExtAffineElt| {
            square
                .terms()
                .find(|(k, _)| *k == x)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Cyclo::zero)
        };
        let (at_one, at_s) = (coefficient(&ExtAffineElt::identity(1)), coefficient(&s));
        let c1 = self.h.idempotent(0);
        let ts = self.h.mul(&self.h.t_generator(Generator::Simple), &c1);
        let lhs = self.h.mul(&ts, &ts);
        Ok(lhs == c1.scaled(&at_one).plus(&ts.scaled(&at_s)))
    }
}

/// Runs the full suite on an `SL_2` cover with `n | q - 1` and `q <= 7`.
pub fn propp_checks(cover: &CoverSpec, q: u64, triples: usize, seed: u64) -> Result<ProPReport> {
    if q > MAX_CHECK_Q {
        return Err(Error::Resource(format!(
            "pro-p sweeps are bounded to q <= {MAX_CHECK_Q}, got {q}"
        )));
    }
    let h = ProPAlgebra::new(cover, q)?;
    let n = cover.n();
    let field = h.group().field();
    let unit_pi = hilbert_symbol(
        field,
        n,
        &TameElement::new(field, 0, 1),
        &TameElement::uniformizer(field),
    )?;
    let checker = Checker {
        units: q - 1,
        epsilon: epsilon(q, n)?,
        unit_pi,
        n,
        q,
        cover,
        h,
    };
    let orbits = checker.orbits();
    let (idempotent_support, orbit_partition) = checker.idempotent_support(&orbits);
    Ok(ProPReport {
        cover: cover.name(),
        q,
        quadratic_finite: checker.quadratic(Generator::Simple),
        quadratic_affine: checker.quadratic(Generator::Affine),
        invertible: checker.invertible(),
        torus_commutation: checker.torus_commutation(),
        idempotent_commutation: checker.idempotent_commutation(),
        idempotent_support,
        orbit_partition,
        orbit_sizes: orbits.iter().map(Vec::len).collect(),
        associativity_triples: triples,
        associativity: checker.associativity(triples, seed),
        bernstein_coroot: checker.bernstein(1),
        bernstein_window: (-2..=2).all(|y| checker.bernstein(y)),
        triangularity: checker.triangularity(),
        theta_epsilon: checker.theta_epsilon(),
        iwahori_projection: checker.iwahori_projection()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    #[test]
    fn fourfold_cover_over_f5() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 4, -1).unwrap();
        let r = propp_checks(&c, 5, 20, 1).unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn large_fields_are_refused() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 2, -1).unwrap();
        assert!(matches!(
            propp_checks(&c, 11, 1, 0),
            Err(Error::Resource(_))
        ));
    }
}
