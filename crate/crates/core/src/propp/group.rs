//! The group `W(1) = N(T) / T_1` of a genuine `SL_2` cover, with its `mu_n` scalars.
//!
//! Every element is `zeta_n^k s_y h(u) w` where `s_y = s(y(varpi))`, `h(u) = h_alpha(u)`
//! for a residue unit `u`, and `w` is `1` or `w_alpha(1)`. The scalar is carried beside
//! the triple. The torus law comes from the cover's bilinear data:
//!
//! - `s_y1 s_y2 = (varpi, varpi)^(D y1 y2) s_(y1 + y2)`;
//! - `h(u) s_y h(u)^-1 = (u, varpi)^(B y) s_y`;
//! - `w s_y h(u) w^-1 = s_-y h(u^-1)` and `w^2 = h(-1)`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::{hilbert_symbol, Fq, TameElement};

/// The triple `(y, log u, w)` of `s_y h(u) w`, with `y` the coefficient of `alpha^vee`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct W1Elt {
    pub y: i64,
    /// Discrete log of `u` modulo `q - 1`.
    pub unit_log: u64,
    pub reflected: bool,
}

impl W1Elt {
    pub const IDENTITY: W1Elt = W1Elt {
        y: 0,
        unit_log: 0,
        reflected: false,
    };

    pub fn torus(y: i64, unit_log: u64) -> Self {
        W1Elt {
            y,
            unit_log,
            reflected: false,
        }
    }

    /// The image `(y, w)` in the extended affine Weyl group.
    pub fn projection(&self) -> (i64, bool) {
        (self.y, self.reflected)
    }
}

/// `zeta_n^zeta * elt`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledW1 {
    pub zeta: u64,
    pub elt: W1Elt,
}

/// The two simple affine reflections lifted to `W(1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `w_alpha(1)`.
    Simple,
    /// `w_alpha(varpi^-1) = s_-1 w_alpha(1)`.
    Affine,
}

impl Generator {
    pub const ALL: [Generator; 2] = [Generator::Simple, Generator::Affine];

    pub fn elt(self) -> W1Elt {
        match self {
            Generator::Simple => W1Elt {
                y: 0,
                unit_log: 0,
                reflected: true,
            },
            Generator::Affine => W1Elt {
                y: -1,
                unit_log: 0,
                reflected: true,
            },
        }
    }
}

#[derive(Clone, Debug)]
pub struct W1Group {
    field: Arc<Fq>,
    n: u64,
    /// `Q(alpha^vee)`.
    q_form: i64,
    /// `B(alpha^vee, alpha^vee)`.
    b_form: i64,
    /// `D(alpha^vee, alpha^vee)`.
    d_form: i64,
    /// Exponent of `(varpi, varpi)_n`.
    pi_pi: u64,
    /// Exponent of `(g, varpi)_n` for the fixed generator `g` of `F_q^x`.
    unit_pi: u64,
}

fn rem(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

impl W1Group {
    pub fn new(cover: &CoverSpec, q: u64) -> Result<Self> {
        let d = cover.datum();
        if d.rank() != 1 || d.dim() != 1 || d.simple_coroot(0) != [1] {
            return Err(Error::Config(format!(
                "the pro-p algebra is implemented for simply connected rank one data, not {}",
                cover.name()
            )));
        }
        let field = Fq::new(q)?;
        let n = cover.n();
        let pi = TameElement::uniformizer(&field);
        let g = TameElement::new(&field, 0, 1);
        let pi_pi = hilbert_symbol(&field, n, &pi, &pi)?;
        let unit_pi = hilbert_symbol(&field, n, &g, &pi)?;
        Ok(W1Group {
            n,
            q_form: cover.q(&[1]),
            b_form: cover.bq(&[1], &[1]),
            d_form: cover.d(&[1], &[1]),
            pi_pi,
            unit_pi,
            field,
        })
    }

    pub fn field(&self) -> &Fq {
        &self.field
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn q_form(&self) -> i64 {
        self.q_form
    }

    /// `q - 1`, the order of `T_kappa`.
    pub fn units(&self) -> u64 {
        self.field.order() - 1
    }

    pub fn minus_one_log(&self) -> u64 {
        self.field.minus_one_log()
    }

    /// Exponent `k` with `(varpi^i, varpi^j)_n = zeta_n^k`.
    pub fn pi_symbol(&self, i: i64, j: i64) -> u64 {
        rem(self.pi_pi as i128 * i as i128 * j as i128, self.n)
    }

    /// Exponent `k` with `(u, varpi^j)_n = zeta_n^k` for `u = g^unit_log`.
    pub fn unit_symbol(&self, unit_log: u64, j: i64) -> u64 {
        rem(self.unit_pi as i128 * unit_log as i128 * j as i128, self.n)
    }

    /// Length of the image in the affine Weyl group of `SL_2`.
    pub fn length(&self, x: &W1Elt) -> u64 {
        if x.reflected {
            (2 * x.y + 1).unsigned_abs()
        } else {
            2 * x.y.unsigned_abs()
        }
    }

    fn torus_mul(&self, (y1, a1): (i64, u64), (y2, a2): (i64, u64)) -> (u64, i64, u64) {
        let m = self.units();
        let zeta = self.pi_symbol(y1, y2) as i128 * self.d_form as i128
            + self.unit_symbol(a1, y2) as i128 * self.b_form as i128;
        (rem(zeta, self.n), y1 + y2, (a1 + a2) % m)
    }

    pub fn mul(&self, x: &W1Elt, z: &W1Elt) -> ScaledW1 {
        let m = self.units();
        let (y2, a2) = if x.reflected {
            (-z.y, (m - z.unit_log) % m)
        } else {
            (z.y, z.unit_log)
        };
        let (mut zeta, y, mut a) = self.torus_mul((x.y, x.unit_log), (y2, a2));
        let reflected = x.reflected != z.reflected;
        if x.reflected && z.reflected {
            let (extra, _, a_new) = self.torus_mul((y, a), (0, self.minus_one_log()));
            zeta = (zeta + extra) % self.n;
            a = a_new;
        }
        ScaledW1 {
            zeta,
            elt: W1Elt {
                y,
                unit_log: a,
                reflected,
            },
        }
    }

    pub fn mul_scaled(&self, x: &ScaledW1, z: &ScaledW1) -> ScaledW1 {
        let p = self.mul(&x.elt, &z.elt);
        ScaledW1 {
            zeta: (p.zeta + x.zeta + z.zeta) % self.n,
            elt: p.elt,
        }
    }

    pub fn inverse(&self, x: &W1Elt) -> ScaledW1 {
        let m = self.units();
        let torus_inverse = |y: i64, a: u64| {
            let candidate = W1Elt::torus(-y, (m - a) % m);
            let p = self.mul(&W1Elt::torus(y, a), &candidate);
            debug_assert_eq!(p.elt, W1Elt::IDENTITY);
            ScaledW1 {
                zeta: (self.n - p.zeta) % self.n,
                elt: candidate,
            }
        };
        if !x.reflected {
            return torus_inverse(x.y, x.unit_log);
        }
        // x = t w^-1 with t = x w, so x^-1 = w t^-1
        let t = self.mul(x, &Generator::Simple.elt());
        let t_inv = torus_inverse(t.elt.y, t.elt.unit_log);
        let p = self.mul(&Generator::Simple.elt(), &t_inv.elt);
        ScaledW1 {
            zeta: rem(p.zeta as i128 + t_inv.zeta as i128 - t.zeta as i128, self.n),
            elt: p.elt,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    fn group(n: u64, q_short: i64, q: u64) -> W1Group {
        W1Group::new(
            &CoverSpec::simply_connected(CartanType::A, 1, n, q_short).unwrap(),
            q,
        )
        .unwrap()
    }

    fn sample(g: &W1Group) -> Vec<W1Elt> {
        let mut out = Vec::new();
        for y in -2..=2 {
            for a in 0..g.units() {
                for reflected in [false, true] {
                    out.push(W1Elt {
                        y,
                        unit_log: a,
                        reflected,
                    });
                }
            }
        }
        out
    }

    #[test]
    fn group_law_is_associative_with_inverses() {
        for (n, qs, q) in [(4, -1, 5), (6, -1, 7), (2, 1, 5)] {
            let g = group(n, qs, q);
            let xs = sample(&g);
            for x in &xs {
                let inv = g.inverse(x);
                let p = g.mul_scaled(&ScaledW1 { zeta: 0, elt: *x }, &inv);
                assert_eq!(
                    p,
                    ScaledW1 {
                        zeta: 0,
                        elt: W1Elt::IDENTITY
                    },
                    "{x:?}"
                );
            }
            for x in xs.iter().step_by(3) {
                for y in xs.iter().step_by(5) {
                    for z in xs.iter().step_by(7) {
                        let s = |e: &W1Elt| ScaledW1 { zeta: 0, elt: *e };
                        let left = g.mul_scaled(&g.mul(x, y), &s(z));
                        let right = g.mul_scaled(&s(x), &g.mul(y, z));
                        assert_eq!(left, right);
                    }
                }
            }
        }
    }

    #[test]
    fn affine_generator_squares_to_epsilon_twist() {
        // w_alpha(varpi^-1)^2 = epsilon^Q h(-1) with epsilon = -1 at (n, q) = (4, 5)
        let g = group(4, -1, 5);
        let a = Generator::Affine.elt();
        let sq = g.mul(&a, &a);
        assert_eq!(sq.elt, W1Elt::torus(0, g.minus_one_log()));
        assert_eq!(sq.zeta, 2);
        let s = Generator::Simple.elt();
        assert_eq!(
            g.mul(&s, &s),
            ScaledW1 {
                zeta: 0,
                elt: W1Elt::torus(0, g.minus_one_log())
            }
        );
        assert_eq!(g.length(&a), 1);
        assert_eq!(g.length(&g.mul(&a, &s).elt), 2);
    }

    #[test]
    fn only_sl2_is_accepted() {
        let c = CoverSpec::simply_connected(CartanType::A, 2, 2, 1).unwrap();
        assert!(matches!(W1Group::new(&c, 5), Err(Error::Config(_))));
    }
}
