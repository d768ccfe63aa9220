//! Scattering matrices, their products along reduced words, and the structural checks.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::cover::CoverSpec;
use crate::error::{Error, Result};
use crate::exact::{epsilon, symbol_gauss_sum, Cyclo, Fq};
use crate::lattice::{sub, IVec, Lattice, LatticeQuotient};
use crate::orbits::enumerate_orbits;
use crate::rootdata::{Coweight, WeylElt, WeylGroup};

use super::chi::ChiPoint;
use super::scalar::Scalar;

/// A square matrix over `Y / Y_{Q,n}`, row-major, rows and columns in quotient-index order.
#[derive(Clone, Debug)]
pub struct ScatterMatrix<S> {
    size: usize,
    entries: Vec<S>,
}

impl<S: Scalar> ScatterMatrix<S> {
    pub fn zeros(size: usize) -> Self {
        ScatterMatrix {
            size,
            entries: vec![S::zero(); size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = S::one();
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> &S {
        &self.entries[row * self.size + col]
    }

    fn add_to(&mut self, row: usize, col: usize, v: &S) {
        let e = &mut self.entries[row * self.size + col];
        *e = e.add(v);
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn close_to(&self, other: &Self, tol: f64) -> bool {
        self.size == other.size
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| a.close_to(b, tol))
    }

    /// Positions `(row, col)` of the nonzero entries, row-major.
    pub fn support(&self) -> Vec<(usize, usize)> {
        (0..self.size * self.size)
            .filter(|&k| !self.entries[k].is_zero())
            .map(|k| (k / self.size, k % self.size))
            .collect()
    }
}

/// All reduced words of `w`, as sequences of simple reflection indices read left to right.
pub fn reduced_words(group: &WeylGroup, w: WeylElt) -> Vec<Vec<usize>> {
    if w == WeylElt::IDENTITY {
        return vec![Vec::new()];
    }
    let len = group.length(w);
    let mut out = Vec::new();
    for i in 0..group.rank() {
        let shorter = group.mul_generator_left(i, w);
        if group.length(shorter) < len {
            for mut tail in reduced_words(group, shorter) {
                tail.insert(0, i);
                out.push(tail);
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CocycleReport {
    pub words: Vec<Vec<usize>>,
    /// Whether every reduced word of the longest element gives the same matrix.
    pub agree: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportReport {
    /// `(simple index, column, stray row)` for entries outside `{r, w[r]}`.
    pub stray: Vec<(usize, usize, usize)>,
    /// `(simple index, column)` where an expected entry vanished.
    pub missing: Vec<(usize, usize)>,
}

impl SupportReport {
    pub fn passed(&self) -> bool {
        self.stray.is_empty() && self.missing.is_empty()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockReport {
    pub orbit_sizes: Vec<usize>,
    /// `(row, col)` entries of the longest-element matrix linking different orbits.
    pub leaks: Vec<(usize, usize)>,
}

impl BlockReport {
    pub fn passed(&self) -> bool {
        self.leaks.is_empty()
    }
}

/// Everything fixed by the cover, the residue field and the twist `z*`.
pub struct ScatterContext {
    cover: CoverSpec,
    q: u64,
    epsilon: i64,
    center: Lattice,
    quotient: LatticeQuotient,
    z_star: Coweight,
    /// `q^{-1}` times the symbol Gauss sum, indexed by exponent modulo `n`.
    gauss: Vec<Cyclo>,
}

impl ScatterContext {
    pub fn new(cover: &CoverSpec, q: u64, z_star: &Coweight) -> Result<Self> {
        let field: Arc<Fq> = Fq::new(q)?;
        let n = cover.n();
        let d = cover.datum();
        if z_star.num.len() != d.dim() {
            return Err(Error::Config(format!(
                "z* has dimension {}, expected {}",
                z_star.num.len(),
                d.dim()
            )));
        }
        for i in 0..d.rank() {
            if !z_star.pair(d.simple_root(i)).is_integer() {
                return Err(Error::Config(format!("<z*, alpha_{i}> is not an integer")));
            }
        }
        let inv_q = Cyclo::frac(1, q as i64);
        let gauss = (0..n as i64)
            .map(|k| Ok(&inv_q * &symbol_gauss_sum(&field, n, k)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(ScatterContext {
            cover: cover.clone(),
            q,
            epsilon: epsilon(q, n)?,
            center: cover.y_qn(),
            quotient: cover.quotient()?,
            z_star: z_star.clone(),
            gauss,
        })
    }

    pub fn cover(&self) -> &CoverSpec {
        &self.cover
    }

    pub fn quotient(&self) -> &LatticeQuotient {
        &self.quotient
    }

    /// The basis of `Y_{Q,n}` on which characters are specified.
    pub fn center_basis(&self) -> &[IVec] {
        self.center.basis()
    }

    fn sign<S: Scalar>(&self, exponent: i64) -> S {
        if self.epsilon == -1 && exponent.rem_euclid(2) == 1 {
            S::from_int(-1)
        } else {
            S::one()
        }
    }

    /// `chi(s_t)` for `t` in `Y_{Q,n}`, expanding `s_t` as an ordered product of basis powers.
    pub fn chi_value<S: Scalar>(&self, chi: &ChiPoint<S>, t: &[i64]) -> Result<S> {
        let coords = self
            .center
            .coordinates(t)
            .ok_or_else(|| Error::Config(format!("{t:?} is not in Y_Q,n")))?;
        let basis = self.center.basis();
        if chi.rank() != basis.len() {
            return Err(Error::Config(format!(
                "character has {} values, center rank {}",
                chi.rank(),
                basis.len()
            )));
        }
        let mut sign_exp = 0i64;
        for (i, (&ki, bi)) in coords.iter().zip(basis).enumerate() {
            sign_exp += self.cover.d(bi, bi) * ki * (ki - 1) / 2;
            for (&kj, bj) in coords.iter().zip(basis).skip(i + 1) {
                sign_exp += ki * kj * self.cover.d(bi, bj);
            }
        }
        let mut value = self.sign::<S>(sign_exp);
        for (c, &k) in chi.values.iter().zip(&coords) {
            value = value.mul(&c.pow(k)?);
        }
        Ok(value)
    }

    /// The character `t -> chi(w^-1 s_t w)` for the simple reflection `w = s_i`.
    pub fn reflect<S: Scalar>(&self, chi: &ChiPoint<S>, i: usize) -> Result<ChiPoint<S>> {
        let d = self.cover.datum();
        let coroot = d.simple_coroot(i);
        let values = self
            .center
            .basis()
            .iter()
            .map(|b| {
                let k = d.pair(d.simple_root(i), b);
                let image = d.reflection(i).apply(b);
                Ok(self
                    .sign::<S>(-k * self.cover.d(b, coroot))
                    .mul(&self.chi_value(chi, &image)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ChiPoint::new(values))
    }

    /// `^w chi` for `w = s_{word[0]} s_{word[1]} ...`.
    pub fn transport<S: Scalar>(&self, chi: &ChiPoint<S>, word: &[usize]) -> Result<ChiPoint<S>> {
        word.iter()
            .rev()
            .try_fold(chi.clone(), |acc, &i| self.reflect(&acc, i))
    }

    /// `<y + z*, alpha_i>`.
    fn twisted_pairing(&self, i: usize, y: &[i64]) -> i64 {
        let root = self.cover.datum().simple_root(i);
        let p = self.z_star.pair(root) + crate::lattice::dot(root, y);
        p.to_integer()
    }

    /// `w[y] = w(y + z*) - z*` for `w = s_i`.
    pub fn twisted_reflection(&self, i: usize, y: &[i64]) -> IVec {
        let k = self.twisted_pairing(i, y);
        let coroot = self.cover.datum().simple_coroot(i);
        y.iter().zip(coroot).map(|(a, b)| a - k * b).collect()
    }

    /// `chi_alpha = chi(s_{n_alpha alpha^vee})`, rejecting the pole at 1.
    fn chi_alpha<S: Scalar>(&self, chi: &ChiPoint<S>, i: usize) -> Result<S> {
        let n_alpha = self.cover.simple_n_alpha(i);
        let t: IVec = self
            .cover
            .datum()
            .simple_coroot(i)
            .iter()
            .map(|c| n_alpha * c)
            .collect();
        let value = self.chi_value(chi, &t)?;
        if value.is_one() {
            return Err(Error::Pole(format!("chi_alpha = 1 for simple root {i}")));
        }
        Ok(value)
    }

    /// The diagonal coefficient at `y`: `(1 - q^-1) chi_alpha^k / (1 - chi_alpha)` with
    /// `k = ceil((1 + <y + z*, alpha>) / n_alpha)`.
    fn diagonal<S: Scalar>(&self, i: usize, chi: &ChiPoint<S>, y: &[i64]) -> Result<S> {
        let chi_a = self.chi_alpha(chi, i)?;
        let n_alpha = self.cover.simple_n_alpha(i);
        let k = (1 + self.twisted_pairing(i, y)).div_euclid(n_alpha)
            + i64::from((1 + self.twisted_pairing(i, y)).rem_euclid(n_alpha) != 0);
        let scale = S::from_cyclo(&Cyclo::frac(self.q as i64 - 1, self.q as i64));
        Ok(scale.mul(&chi_a.pow(k)?).mul(&S::one().sub(&chi_a).inv()?))
    }

    /// The coefficient at `w[y]`: a sign times the Gauss sum at `<y + z*, alpha> Q(alpha^vee)`.
    fn reflected<S: Scalar>(&self, i: usize, y: &[i64]) -> S {
        let coroot = self.cover.datum().simple_coroot(i);
        let k = self.twisted_pairing(i, y);
        let q_alpha = self.cover.q(coroot);
        let g = &self.gauss[(k * q_alpha).rem_euclid(self.cover.n() as i64) as usize];
        self.sign::<S>(k * self.cover.d(y, coroot))
            .mul(&S::from_cyclo(g))
    }

    /// `tau(s_{y'}, s_y)` for `w = s_i` and arbitrary lifts `y'`, `y`: the coefficients at the
    /// canonical lifts `y` and `w[y]` are moved to `y'` through the center.
    pub fn tau<S: Scalar>(
        &self,
        i: usize,
        chi: &ChiPoint<S>,
        y_prime: &[i64],
        y: &[i64],
    ) -> Result<S> {
        let reflected_chi = self.reflect(chi, i)?;
        let mut total = S::zero();
        let targets = [(y.to_vec(), true), (self.twisted_reflection(i, y), false)];
        for (base, diagonal) in targets {
            if !self.quotient.same_class(y_prime, &base) {
                continue;
            }
            let t = sub(y_prime, &base);
            let shift = self
                .sign::<S>(self.cover.d(&base, &t))
                .mul(&self.chi_value(&reflected_chi, &t)?.inv()?);
            let coefficient = if diagonal {
                self.diagonal(i, chi, y)?
            } else {
                self.reflected(i, y)
            };
            total = total.add(&shift.mul(&coefficient));
        }
        Ok(total)
    }

    /// `M(s_i, chi)` with entry `(r', r) = tau(s_{r'}, s_r)` over canonical representatives.
    pub fn rank_one_matrix<S: Scalar>(
        &self,
        i: usize,
        chi: &ChiPoint<S>,
    ) -> Result<ScatterMatrix<S>> {
        let size = self.quotient.size();
        let mut m = ScatterMatrix::<S>::zeros(size);
        for col in 0..size {
            let y = self.quotient.from_index(col);
            for row in [col, self.quotient.index(&self.twisted_reflection(i, &y))] {
                if m.get(row, col).is_zero() {
                    let v = self.tau(i, chi, &self.quotient.from_index(row), &y)?;
                    m.add_to(row, col, &v);
                }
            }
        }
        Ok(m)
    }

    /// `M(w, chi)` for `w = s_{word[0]} ... s_{word[k-1]}`, assembled right to left by the
    /// cocycle rule.
    pub fn scattering_matrix<S: Scalar>(
        &self,
        word: &[usize],
        chi: &ChiPoint<S>,
    ) -> Result<ScatterMatrix<S>> {
        let rank = self.cover.datum().rank();
        if let Some(&bad) = word.iter().find(|&&i| i >= rank) {
            return Err(Error::Config(format!(
                "simple index {bad} out of range for rank {rank}"
            )));
        }
        let mut acc = ScatterMatrix::identity(self.quotient.size());
        let mut current = chi.clone();
        for &i in word.iter().rev() {
            acc = self.rank_one_matrix(i, &current)?.mul(&acc);
            current = self.reflect(&current, i)?;
        }
        Ok(acc)
    }

    fn longest_words(&self) -> Result<Vec<Vec<usize>>> {
        let group = self.cover.weyl_group()?;
        Ok(reduced_words(&group, group.longest()))
    }

    /// Compares the matrices of all reduced words of the longest element.
    pub fn cocycle_check<S: Scalar>(&self, chi: &ChiPoint<S>, tol: f64) -> Result<CocycleReport> {
        let words = self.longest_words()?;
        let mut matrices = words.iter().map(|w| self.scattering_matrix(w, chi));
        let first = matrices
            .next()
            .ok_or_else(|| Error::Config("no reduced word".into()))??;
        let mut agree = true;
        for m in matrices {
            agree &= m?.close_to(&first, tol);
        }
        Ok(CocycleReport { words, agree })
    }

    /// Confirms each rank-one column is supported exactly on `{r, w[r]}`.
    pub fn support_check<S: Scalar>(&self, chi: &ChiPoint<S>) -> Result<SupportReport> {
        let mut report = SupportReport {
            stray: Vec::new(),
            missing: Vec::new(),
        };
        for i in 0..self.cover.datum().rank() {
            let m = self.rank_one_matrix(i, chi)?;
            for col in 0..m.size() {
                let y = self.quotient.from_index(col);
                let mirror = self.quotient.index(&self.twisted_reflection(i, &y));
                for row in 0..m.size() {
                    let expected = row == col || row == mirror;
                    let zero = m.get(row, col).is_zero();
                    if !expected && !zero {
                        report.stray.push((i, col, row));
                    }
                    if expected && zero && row != col {
                        report.missing.push((i, col));
                    }
                }
                if m.get(col, col).is_zero() && mirror != col {
                    report.missing.push((i, col));
                }
            }
        }
        Ok(report)
    }

    /// Confirms the longest-element matrix preserves the `(W, z*)`-orbits on `Y / Y_{Q,n}`.
    pub fn block_check<S: Scalar>(&self, chi: &ChiPoint<S>) -> Result<BlockReport> {
        let census = enumerate_orbits(&self.cover, &self.z_star)?;
        let word = self.longest_words()?.swap_remove(0);
        let m = self.scattering_matrix(&word, chi)?;
        let orbit = |idx: usize| census.orbit_of_index(idx).members[0];
        let leaks = m
            .support()
            .into_iter()
            .filter(|&(r, c)| orbit(r) != orbit(c))
            .collect();
        Ok(BlockReport {
            orbit_sizes: census.orbits.iter().map(|o| o.size()).collect(),
            leaks,
        })
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::rootdata::CartanType;

    fn context(t: CartanType, r: usize, n: u64, q: u64) -> ScatterContext {
        let cover = CoverSpec::simply_connected(t, r, n, 1).unwrap();
        ScatterContext::new(&cover, q, &Coweight::zero(r)).unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let ctx = context(CartanType::A, 2, 2, 5);
        let chi = ChiPoint::roots_of_unity(7, &[1, 3]);
        let m = ctx.scattering_matrix(&[], &chi).unwrap();
        assert!(m.close_to(&ScatterMatrix::identity(4), 0.0));
    }

    #[test]
    fn linear_sl2_gives_the_classical_scalar() {
        let ctx = context(CartanType::A, 1, 1, 5);
        let chi = ChiPoint::roots_of_unity(3, &[1]);
        let m = ctx.rank_one_matrix(0, &chi).unwrap();
        assert_eq!(m.size(), 1);
        let x = Cyclo::root_of_unity(3, 1);
        let expected = (&x - &Cyclo::frac(1, 5))
            .checked_div(&(&Cyclo::one() - &x))
            .unwrap();
        assert_eq!(m.get(0, 0), &expected);
    }

    #[test]
    fn trivial_chi_alpha_is_a_pole() {
        let ctx = context(CartanType::A, 1, 2, 5);
        let chi = ChiPoint::roots_of_unity(1, &[0]);
        assert!(matches!(ctx.rank_one_matrix(0, &chi), Err(Error::Pole(_))));
    }

    #[test]
    fn reduced_words_of_longest_elements() {
        for (t, r, count) in [
            (CartanType::A, 2, 2),
            (CartanType::B, 2, 2),
            (CartanType::G, 2, 2),
            (CartanType::A, 3, 16),
        ] {
            let cover = CoverSpec::simply_connected(t, r, 1, 1).unwrap();
            let group = cover.weyl_group().unwrap();
            let words = reduced_words(&group, group.longest());
            assert_eq!(words.len(), count, "{t}{r}");
            assert!(words
                .iter()
                .all(|w| w.len() == group.length(group.longest()) as usize));
        }
    }

    #[test]
    fn exact_and_float_backends_agree() {
        let ctx = context(CartanType::A, 2, 2, 3);
        let exact = ChiPoint::roots_of_unity(5, &[1, 2]);
        let float = ChiPoint::new(exact.values.iter().map(Cyclo::to_complex).collect());
        let word = [0, 1, 0];
        let a = ctx.scattering_matrix(&word, &exact).unwrap();
        let b = ctx.scattering_matrix(&word, &float).unwrap();
        for r in 0..a.size() {
            for c in 0..a.size() {
                assert!(a.get(r, c).to_complex().close_to(b.get(r, c), 1e-9));
            }
        }
    }

    #[test]
    fn cocycle_holds_exactly_on_a2_and_c2() {
        for (t, n, q) in [(CartanType::A, 2, 3), (CartanType::C, 4, 5)] {
            let ctx = context(t, 2, n, q);
            let chi = ChiPoint::roots_of_unity(7, &[2, 3]);
            assert!(ctx.cocycle_check(&chi, 0.0).unwrap().agree, "{t}2 n={n}");
        }
    }

    #[test]
    fn scaling_the_gauss_term_breaks_the_cocycle() {
        let mut ctx = context(CartanType::A, 2, 2, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let chi = ChiPoint::<Complex64>::random_unitary(2, &mut rng);
        assert!(ctx.cocycle_check(&chi, 1e-9).unwrap().agree);
        ctx.gauss
            .iter_mut()
            .for_each(|g| *g = &*g * &Cyclo::from_int(2));
        assert!(!ctx.cocycle_check(&chi, 1e-9).unwrap().agree);
    }

    #[test]
    fn twisted_reflection_swaps_adjacent_coroot_multiples() {
        let cover = CoverSpec::simply_connected(CartanType::A, 1, 2, 1).unwrap();
        let rho = cover.datum().rho();
        let ctx = ScatterContext::new(&cover, 5, &rho.neg()).unwrap();
        // <y - rho, alpha> = 2y - 1 is odd, so no lift is fixed.
        assert_eq!(ctx.twisted_reflection(0, &[1]), vec![0]);
        assert_eq!(ctx.twisted_reflection(0, &[0]), vec![1]);
    }

    #[test]
    fn integral_twist_is_a_translation_when_epsilon_is_trivial() {
        let cover = CoverSpec::simply_connected(CartanType::A, 2, 2, 1).unwrap();
        let z = vec![1, -1];
        let plain = ScatterContext::new(&cover, 5, &Coweight::zero(2)).unwrap();
        let twisted = ScatterContext::new(&cover, 5, &Coweight::integral(z.clone())).unwrap();
        let chi = ChiPoint::roots_of_unity(7, &[1, 3]);
        let shift = |y: &[i64]| -> IVec { y.iter().zip(&z).map(|(a, b)| a + b).collect() };
        for i in 0..2 {
            for row in plain.quotient().representatives() {
                for col in plain.quotient().representatives() {
                    let lhs = twisted.tau(i, &chi, &row, &col).unwrap();
                    let rhs = plain.tau(i, &chi, &shift(&row), &shift(&col)).unwrap();
                    assert_eq!(lhs, rhs, "{row:?} {col:?}");
                }
            }
        }
    }
}
