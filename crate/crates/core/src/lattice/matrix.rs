use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// Integer vector in a fixed coordinate basis.
pub type IVec = Vec<i64>;

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[IVec]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    /// Matrix whose columns are the given vectors, all of length `dim`.
    pub fn from_columns(dim: usize, cols: &[IVec]) -> Self {
        let mut m = Self::zeros(dim, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), dim, "column of wrong length");
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> IVec {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<IVec> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn apply(&self, v: &[i64]) -> IVec {
        assert_eq!(
            v.len(),
            self.cols,
            "dimension mismatch in matrix-vector product"
        );
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self[(i, j)] == i64::from(i == j)))
    }

    /// `self - I`, the operator whose kernel is the fixed lattice.
    pub fn minus_identity(&self) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m[(i, i)] -= 1;
        }
        m
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<Vec<i128>> = (0..n)
            .map(|i| self.row(i).iter().map(|&x| x as i128).collect())
            .collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        (sign * a[n - 1][n - 1]) as i64
    }
}

impl IntMatrix {
    /// `(N, d)` with `self^-1 = N / d` and `d > 0` minimal, or `None` when singular.
    pub fn inverse_scaled(&self) -> Option<(IntMatrix, i64)> {
        assert_eq!(self.rows, self.cols, "inverse of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<Ratio<i128>>> = (0..n)
            .map(|i| {
                let mut row: Vec<Ratio<i128>> = self
                    .row(i)
                    .iter()
                    .map(|&x| Ratio::from_integer(x as i128))
                    .collect();
                row.extend((0..n).map(|j| Ratio::from_integer(i128::from(i == j))));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&i| a[i][c] != Ratio::from_integer(0))?;
            a.swap(c, p);
            let pivot = a[c][c];
            for x in a[c].iter_mut() {
                *x /= pivot;
            }
            for i in 0..n {
                if i != c && a[i][c] != Ratio::from_integer(0) {
                    let f = a[i][c];
                    for j in 0..2 * n {
                        let t = a[c][j];
                        a[i][j] -= f * t;
                    }
                }
            }
        }
        let den = a
            .iter()
            .flat_map(|row| row[n..].iter())
            .fold(1i128, |acc, x| acc.lcm(x.denom()));
        let mut out = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let x = a[i][n + j] * den;
                out[(i, j)] = i64::try_from(x.to_integer()).expect("inverse entries fit i64");
            }
        }
        Some((out, den as i64))
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;
    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[i64]> = (0..self.rows).map(|i| self.row(i)).collect();
        write!(f, "{rows:?}")
    }
}

pub fn add(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> IVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(k: i64, a: &[i64]) -> IVec {
    a.iter().map(|x| k * x).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
