use serde::{Deserialize, Serialize};

use super::matrix::{sub, IVec, IntMatrix};
use super::normal_form::{hermite_basis, kernel, smith_form, solve};
use crate::error::{quotient_bound, Error, Result};

/// A sublattice of `Z^dim`, stored by its lower column Hermite basis.
///
/// Two lattices are equal exactly when their Hermite bases agree, so the derived
/// equality is lattice equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Lattice {
    dim: usize,
    basis: Vec<IVec>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, generators: &[IVec]) -> Self {
        if generators.is_empty() {
            return Lattice {
                dim,
                basis: Vec::new(),
                pivots: Vec::new(),
            };
        }
        let (basis, pivots) = hermite_basis(&IntMatrix::from_columns(dim, generators));
        Lattice { dim, basis, pivots }
    }

    /// The full lattice `Z^dim`.
    pub fn standard(dim: usize) -> Self {
        let gens: Vec<IVec> = (0..dim).map(|i| unit(dim, i)).collect();
        Self::from_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IVec] {
        &self.basis
    }

    pub fn basis_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.dim, &self.basis)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// Coordinates of `v` in the Hermite basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[i64]) -> Option<IVec> {
        if self.basis.is_empty() {
            return v.iter().all(|&x| x == 0).then(Vec::new);
        }
        solve(&self.basis_matrix(), v)
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        assert_eq!(self.dim, other.dim, "lattices in different ambient spaces");
        if self.basis.is_empty() || other.basis.is_empty() {
            return Lattice::from_generators(self.dim, &[]);
        }
        // x1 in ker [B1 | -B2] gives B1 x1 = B2 x2 in both lattices
        let (k1, k2) = (self.rank(), other.rank());
        let rows: Vec<IVec> = (0..self.dim)
            .map(|i| {
                let mut row: IVec = self.basis.iter().map(|b| b[i]).collect();
                row.extend(other.basis.iter().map(|b| -b[i]));
                row
            })
            .collect();
        let b1 = self.basis_matrix();
        let gens: Vec<IVec> = kernel(&IntMatrix::from_rows(&rows))
            .into_iter()
            .map(|x| {
                debug_assert_eq!(x.len(), k1 + k2);
                b1.apply(&x[..k1])
            })
            .collect();
        Lattice::from_generators(self.dim, &gens)
    }

    /// `k * L`.
    pub fn scaled(&self, k: i64) -> Lattice {
        let gens: Vec<IVec> = self
            .basis
            .iter()
            .map(|b| b.iter().map(|x| k * x).collect())
            .collect();
        Lattice::from_generators(self.dim, &gens)
    }

    /// The `k` with `self = k * other`, if one exists and `other` is nonzero.
    pub fn scalar_multiple_of(&self, other: &Lattice) -> Option<i64> {
        let first = other.basis.first()?;
        let row = other.pivots[0];
        let mine = self.basis.first()?;
        let k = mine[row] / first[row];
        (k > 0 && mine[row] % first[row] == 0 && *self == other.scaled(k)).then_some(k)
    }
}

fn unit(dim: usize, i: usize) -> IVec {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

/// The finite quotient `Z^dim / L` for a full-rank sublattice `L`.
///
/// Canonical representatives satisfy `0 <= y_i < H_ii` for the Hermite diagonal `H`,
/// and are indexed in mixed radix with the first coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeQuotient {
    sublattice: Lattice,
    diagonal: Vec<i64>,
    invariant_factors: Vec<i64>,
}

impl LatticeQuotient {
    pub fn new(sublattice: Lattice) -> Result<Self> {
        if !sublattice.is_full_rank() {
            return Err(Error::Config(
                "quotient by a lattice of deficient rank is infinite".into(),
            ));
        }
        debug_assert!(sublattice.pivots.iter().enumerate().all(|(j, &p)| j == p));
        let diagonal: Vec<i64> = (0..sublattice.dim)
            .map(|i| sublattice.basis[i][i])
            .collect();
        let size = diagonal
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d as usize));
        match size {
            Some(s) if s <= quotient_bound() => {}
            _ => {
                return Err(Error::Resource(format!(
                    "lattice quotient with diagonal {diagonal:?} exceeds the quotient bound {}",
                    quotient_bound()
                )))
            }
        }
        let (_, d, _) = smith_form(&sublattice.basis_matrix());
        let invariant_factors = (0..sublattice.dim).map(|i| d[(i, i)]).collect();
        Ok(LatticeQuotient {
            sublattice,
            diagonal,
            invariant_factors,
        })
    }

    pub fn sublattice(&self) -> &Lattice {
        &self.sublattice
    }

    pub fn dim(&self) -> usize {
        self.sublattice.dim
    }

    pub fn size(&self) -> usize {
        self.diagonal.iter().map(|&d| d as usize).product()
    }

    /// Invariant factors `d_1 | d_2 | ...` of the quotient, ones included.
    pub fn invariant_factors(&self) -> &[i64] {
        &self.invariant_factors
    }

    pub fn reduce(&self, y: &[i64]) -> IVec {
        let mut v = y.to_vec();
        self.reduce_in_place(&mut v);
        v
    }

    fn reduce_in_place(&self, v: &mut [i64]) {
        for (i, col) in self.sublattice.basis.iter().enumerate() {
            let f = v[i].div_euclid(self.diagonal[i]);
            if f != 0 {
                // column i vanishes above row i, so earlier coordinates stay reduced
                for (x, c) in v.iter_mut().zip(col).skip(i) {
                    *x -= f * c;
                }
            }
        }
    }

    /// [`Self::index`], overwriting `y` with its reduced representative.
    pub fn index_in_place(&self, y: &mut [i64]) -> usize {
        self.reduce_in_place(y);
        y.iter()
            .zip(&self.diagonal)
            .rev()
            .fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize)
    }

    /// [`Self::from_index`] into a caller-provided buffer.
    pub fn decode_into(&self, mut index: usize, out: &mut [i64]) {
        for (x, &d) in out.iter_mut().zip(&self.diagonal) {
            *x = (index % d as usize) as i64;
            index /= d as usize;
        }
    }

    pub fn same_class(&self, a: &[i64], b: &[i64]) -> bool {
        self.sublattice.contains(&sub(a, b))
    }

    pub fn index(&self, y: &[i64]) -> usize {
        self.index_in_place(&mut y.to_vec())
    }

    pub fn from_index(&self, mut index: usize) -> IVec {
        self.diagonal
            .iter()
            .map(|&d| {
                let x = (index % d as usize) as i64;
                index /= d as usize;
                x
            })
            .collect()
    }

    /// Canonical representatives in index order.
    pub fn representatives(&self) -> impl Iterator<Item = IVec> + '_ {
        (0..self.size()).map(|i| self.from_index(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn intersection_of_coprime_scalings() {
        let a = Lattice::standard(2).scaled(2);
        let b = Lattice::standard(2).scaled(3);
        assert_eq!(a.intersect(&b), Lattice::standard(2).scaled(6));
        assert_eq!(
            a.intersect(&b).scalar_multiple_of(&Lattice::standard(2)),
            Some(6)
        );
    }

    #[test]
    fn quotient_representatives_round_trip() {
        let l = Lattice::from_generators(2, &[vec![2, 1], vec![0, 3]]);
        let q = LatticeQuotient::new(l.clone()).unwrap();
        assert_eq!(q.size(), 6);
        assert_eq!(q.invariant_factors(), &[1, 6]);
        for (i, rep) in q.representatives().enumerate() {
            assert_eq!(q.index(&rep), i);
            assert_eq!(q.reduce(&rep), rep);
        }
        let y = vec![7, -4];
        assert!(l.contains(&sub(&y, &q.reduce(&y))));
    }

    #[test]
    fn deficient_rank_has_no_finite_quotient() {
        let l = Lattice::from_generators(2, &[vec![1, 1]]);
        assert!(matches!(LatticeQuotient::new(l), Err(Error::Config(_))));
    }
}
