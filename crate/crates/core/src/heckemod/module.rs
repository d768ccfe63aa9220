//! The Iwahori-level Gelfand–Graev module realized on `C[Y]`.
//!
//! The basis vector `e_y` stands for `c(phi(y)) ⊗ Theta_{s_y} 1_I`. The torus part acts by
//! `e_y Theta_z = epsilon^D(y, z) e_{y+z}` for `z in Y_{Q,n}`, and a finite generator
//! `T_alpha` sends `e_y` to a Gauss-sum multiple of `e_{w_alpha y}` plus a correction
//! supported on the `alpha^vee`-string between `y` and `w_alpha y`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::{symbol_gauss_sum, Cyclo, Fq};
use crate::lattice::{add, scale, IVec, Lattice};

use super::torus::{epsilon_power, reflect_section, TorusNormalForm};

/// A finitely supported vector `sum c_y e_y`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GgVector {
    coeffs: BTreeMap<IVec, Cyclo>,
}

impl GgVector {
    pub fn zero() -> Self {
        GgVector::default()
    }

    pub fn basis(y: IVec) -> Self {
        let mut v = GgVector::zero();
        v.add_term(y, Cyclo::one());
        v
    }

    pub fn add_term(&mut self, y: IVec, c: Cyclo) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(y) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &GgVector, c: &Cyclo) {
        for (y, x) in &other.coeffs {
            self.add_term(y.clone(), x * c);
        }
    }

    pub fn scaled(&self, c: &Cyclo) -> GgVector {
        let mut out = GgVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn minus(&self, other: &GgVector) -> GgVector {
        let mut out = self.clone();
        out.add_scaled(other, &Cyclo::from_int(-1));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, y: &[i64]) -> Cyclo {
        self.coeffs.get(y).cloned().unwrap_or_else(Cyclo::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = &IVec> + '_ {
        self.coeffs.keys()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&IVec, &Cyclo)> + '_ {
        self.coeffs.iter()
    }

    /// `Some(c)` when `self = c * e_y`.
    pub fn as_multiple_of(&self, y: &[i64]) -> Option<Cyclo> {
        match self.coeffs.len() {
            0 => Some(Cyclo::zero()),
            1 => self.coeffs.get(y).cloned(),
            _ => None,
        }
    }
}

/// A generator of the Iwahori–Hecke algebra acting on the right.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GgOp {
    /// `T_alpha` for the simple root with this index.
    T(usize),
    /// `Theta_z` for `z in Y_{Q,n}`.
    Theta(IVec),
}

/// Coefficient convention on the `<alpha, y> < 0` branch of the `T_alpha` action.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum NegativeBranch {
    /// `-(q-1)`, obtained by moving `Theta` past `T_alpha` in the Bernstein relation.
    #[default]
    FromBernstein,
    /// `+(q-1)`, kept for comparison; it fails the quadratic relation.
    Printed,
}

struct SimpleData {
    root: IVec,
    coroot: IVec,
    q_value: i64,
    n_alpha: i64,
}

/// The module together with its residue-field data `q`, `epsilon` and the Gauss sums.
pub struct GgModule {
    cover: CoverSpec,
    q: u64,
    epsilon: i64,
    y_qn: Lattice,
    /// `g(k) = sum_u psi(u) (varpi, u)_n^k` for `k = 0..n`.
    gauss: Vec<Cyclo>,
    simple: Vec<SimpleData>,
    branch: NegativeBranch,
}

impl GgModule {
    pub fn new(cover: &CoverSpec, q: u64) -> Result<Self> {
        GgModule::with_branch(cover, q, NegativeBranch::FromBernstein)
    }

    pub fn with_branch(cover: &CoverSpec, q: u64, branch: NegativeBranch) -> Result<Self> {
        let field: Arc<Fq> = Fq::new(q)?;
        let epsilon = cover.epsilon(q)?;
        let n = cover.n();
        let gauss = (0..n as i64)
            .map(|k| symbol_gauss_sum(&field, n, k))
            .collect::<Result<_>>()?;
        let d = cover.datum();
        let simple = (0..d.rank())
            .map(|i| {
                let coroot = d.simple_coroot(i).to_vec();
                SimpleData {
                    root: d.simple_root(i).to_vec(),
                    q_value: cover.q(&coroot),
                    n_alpha: cover.simple_n_alpha(i),
                    coroot,
                }
            })
            .collect();
        Ok(GgModule {
            cover: cover.clone(),
            q,
            epsilon,
            y_qn: cover.y_qn(),
            gauss,
            simple,
            branch,
        })
    }

    pub fn cover(&self) -> &CoverSpec {
        &self.cover
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn epsilon(&self) -> i64 {
        self.epsilon
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn y_qn(&self) -> &Lattice {
        &self.y_qn
    }

    /// `g_alpha(psi, phi(y))`, where `phi(y)(h_alpha(u)) = (varpi, u)_n^B(y, alpha^vee)`
    /// and `h_{-alpha}(u) = h_alpha(u^-1)` on units.
    pub fn gauss_factor(&self, simple: usize, y: &[i64]) -> Cyclo {
        let b = self.cover.bq(y, &self.simple[simple].coroot);
        self.gauss[(-b).rem_euclid(self.cover.n() as i64) as usize].clone()
    }

    fn eps(&self, k: i64) -> Cyclo {
        epsilon_power(self.epsilon, k)
    }

    /// `e_y Theta_z`.
    pub fn theta_basis(&self, y: &[i64], z: &[i64]) -> TorusNormalForm {
        TorusNormalForm::section(y.to_vec()).times_section(&self.cover, z)
    }

    pub fn theta(&self, v: &GgVector, z: &[i64]) -> Result<GgVector> {
        if !self.y_qn.contains(z) {
            return Err(Error::Config(format!("{z:?} is not in Y_(Q,n)")));
        }
        let mut out = GgVector::zero();
        for (y, c) in v.terms() {
            let nf = self.theta_basis(y, z);
            out.add_term(nf.y.clone(), c * nf.scalar(self.epsilon));
        }
        Ok(out)
    }

    /// `e_y T_alpha`.
    pub fn t_basis(&self, simple: usize, y: &[i64]) -> GgVector {
        let s = &self.simple[simple];
        let m = self.cover.datum().pair(&s.root, y);
        let dy = self.cover.d(y, &s.coroot);
        let mut out = GgVector::zero();
        let main = reflect_section(&self.cover, simple, y);
        out.add_term(
            main.y.clone(),
            self.gauss_factor(simple, y) * main.scalar(self.epsilon),
        );
        let (range, sign) = if m > 0 {
            ((1 - m)..=0, 1)
        } else {
            let sign = match self.branch {
                NegativeBranch::FromBernstein => -1,
                NegativeBranch::Printed => 1,
            };
            (1..=-m, sign)
        };
        let q1 = Cyclo::from_int(sign * (self.q as i64 - 1));
        for j in range.filter(|j| j % s.n_alpha == 0) {
            let target = add(y, &scale(j, &s.coroot));
            out.add_term(target, &q1 * self.eps(j * s.q_value + j * dy));
        }
        out
    }

    pub fn t(&self, v: &GgVector, simple: usize) -> GgVector {
        let mut out = GgVector::zero();
        for (y, c) in v.terms() {
            out.add_scaled(&self.t_basis(simple, y), c);
        }
        out
    }

    pub fn apply(&self, v: &GgVector, op: &GgOp) -> Result<GgVector> {
        match op {
            GgOp::T(i) if *i < self.rank() => Ok(self.t(v, *i)),
            GgOp::T(i) => Err(Error::Config(format!("no simple root with index {i}"))),
            GgOp::Theta(z) => self.theta(v, z),
        }
    }

    /// Applies the word left to right, matching the right action `v * (h_1 h_2 ...)`.
    pub fn apply_word(&self, v: &GgVector, word: &[GgOp]) -> Result<GgVector> {
        word.iter()
            .try_fold(v.clone(), |acc, op| self.apply(&acc, op))
    }

    /// `T_w = T_{s_1} ... T_{s_k}` along a reduced word.
    pub fn t_word(&self, v: &GgVector, word: &[u8]) -> GgVector {
        word.iter()
            .fold(v.clone(), |acc, &i| self.t(&acc, i as usize))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::CartanType;

    #[test]
    fn linear_rank_one_action() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 1, 1).unwrap();
        let m = GgModule::new(&c, 5).unwrap();
        let got = m.t_basis(0, &[1]);
        let mut want = GgVector::zero();
        want.add_term(vec![-1], Cyclo::from_int(-1));
        want.add_term(vec![0], Cyclo::from_int(4));
        want.add_term(vec![1], Cyclo::from_int(4));
        assert_eq!(got, want);
    }

    #[test]
    fn wall_vectors_are_sign_eigenvectors() {
        // <alpha_1, y> = 0 and B_Q(y, alpha_1^vee) = 0 for y = alpha_1^vee + 2 alpha_2^vee
        let c = CoverSpec::simply_connected(CartanType::A, 2, 2, 1).unwrap();
        let m = GgModule::new(&c, 5).unwrap();
        let y = vec![1, 2];
        assert_eq!(
            m.t_basis(0, &y),
            GgVector::basis(y).scaled(&Cyclo::from_int(-1))
        );
    }

    #[test]
    fn theta_composes_with_d_twist() {
        let c = CoverSpec::simply_connected(CartanType::A, 1, 4, -1).unwrap();
        let m = GgModule::new(&c, 5).unwrap();
        assert_eq!(m.epsilon(), -1);
        let z1 = vec![2];
        let z2 = vec![-4];
        let v = GgVector::basis(vec![1]);
        let lhs = m.theta(&m.theta(&v, &z1).unwrap(), &z2).unwrap();
        let rhs = m
            .theta(&v, &add(&z1, &z2))
            .unwrap()
            .scaled(&epsilon_power(-1, c.d(&z1, &z2)));
        assert_eq!(lhs, rhs);
        assert!(m.theta(&v, &[1]).is_err());
    }
}
