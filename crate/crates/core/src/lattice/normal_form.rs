//! Hermite and Smith normal forms over `Z`, computed with `i128` intermediates.

use super::matrix::{IVec, IntMatrix};

type Wide = Vec<Vec<i128>>;

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with g = x a + y b >= 0
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer normal form overflowed i64")
}

fn widen(m: &IntMatrix) -> Wide {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&x| x as i128).collect())
        .collect()
}

fn narrow_matrix(rows: &Wide, ncols: usize) -> IntMatrix {
    let rows: Vec<IVec> = rows
        .iter()
        .map(|r| r.iter().map(|&x| narrow(x)).collect())
        .collect();
    if rows.is_empty() {
        return IntMatrix::zeros(0, ncols);
    }
    IntMatrix::from_rows(&rows)
}

/// Column operations on the working matrix and, in lockstep, on a transform.
struct ColumnReducer {
    a: Wide,
    t: Wide,
    rows: usize,
    cols: usize,
}

impl ColumnReducer {
    fn new(m: &IntMatrix) -> Self {
        let cols = m.cols();
        let t = (0..cols)
            .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
            .collect();
        ColumnReducer {
            a: widen(m),
            t,
            rows: m.rows(),
            cols,
        }
    }

    /// Replaces columns `(j, k)` by `(x c_j + y c_k, u c_j + v c_k)`.
    fn combine(&mut self, j: usize, k: usize, x: i128, y: i128, u: i128, v: i128) {
        for m in [&mut self.a, &mut self.t] {
            for row in m.iter_mut() {
                let (cj, ck) = (row[j], row[k]);
                row[j] = x * cj + y * ck;
                row[k] = u * cj + v * ck;
            }
        }
    }

    fn add_multiple(&mut self, target: usize, source: usize, factor: i128) {
        for m in [&mut self.a, &mut self.t] {
            for row in m.iter_mut() {
                row[target] += factor * row[source];
            }
        }
    }

    fn negate(&mut self, j: usize) {
        for m in [&mut self.a, &mut self.t] {
            for row in m.iter_mut() {
                row[j] = -row[j];
            }
        }
    }

    fn swap(&mut self, j: usize, k: usize) {
        for m in [&mut self.a, &mut self.t] {
            for row in m.iter_mut() {
                row.swap(j, k);
            }
        }
    }

    /// Brings the matrix to lower column Hermite form; returns pivot rows per column.
    fn hermite(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut c = 0;
        for i in 0..self.rows {
            if c == self.cols {
                break;
            }
            for k in c + 1..self.cols {
                let (p, b) = (self.a[i][c], self.a[i][k]);
                if b == 0 {
                    continue;
                }
                let (g, x, y) = ext_gcd(p, b);
                self.combine(c, k, x, y, b / g, -p / g);
            }
            if self.a[i][c] == 0 {
                if let Some(k) = (c + 1..self.cols).find(|&k| self.a[i][k] != 0) {
                    self.swap(c, k);
                } else {
                    continue;
                }
            }
            if self.a[i][c] < 0 {
                self.negate(c);
            }
            let p = self.a[i][c];
            for j in 0..c {
                let f = self.a[i][j].div_euclid(p);
                if f != 0 {
                    self.add_multiple(j, c, -f);
                }
            }
            pivots.push(i);
            c += 1;
        }
        pivots
    }
}

/// Lower column Hermite form of the lattice spanned by the columns of `m`.
///
/// Returns the nonzero basis columns; entry `(pivot_j, j)` is positive and every entry
/// to its left in that row lies in `[0, pivot)`.
pub fn hermite_basis(m: &IntMatrix) -> (Vec<IVec>, Vec<usize>) {
    let mut r = ColumnReducer::new(m);
    let pivots = r.hermite();
    let cols = (0..pivots.len())
        .map(|j| r.a.iter().map(|row| narrow(row[j])).collect())
        .collect();
    (cols, pivots)
}

/// `Z`-basis of `{x : m x = 0}`.
pub fn kernel(m: &IntMatrix) -> Vec<IVec> {
    let mut r = ColumnReducer::new(m);
    let rank = r.hermite().len();
    let basis: Vec<IVec> = (rank..r.cols)
        .map(|j| r.t.iter().map(|row| narrow(row[j])).collect())
        .collect();
    // re-reduce for small canonical entries
    if basis.is_empty() {
        return basis;
    }
    hermite_basis(&IntMatrix::from_columns(m.cols(), &basis)).0
}

/// Some integer solution of `m x = b`, if one exists.
pub fn solve(m: &IntMatrix, b: &[i64]) -> Option<IVec> {
    assert_eq!(b.len(), m.rows(), "right-hand side of wrong length");
    let mut r = ColumnReducer::new(m);
    let pivots = r.hermite();
    let mut z = vec![0i128; r.cols];
    for (j, &row) in pivots.iter().enumerate() {
        let acc: i128 = (0..j).map(|k| r.a[row][k] * z[k]).sum();
        let rhs = b[row] as i128 - acc;
        if rhs % r.a[row][j] != 0 {
            return None;
        }
        z[j] = rhs / r.a[row][j];
    }
    for (i, &bi) in b.iter().enumerate() {
        let lhs: i128 = (0..pivots.len()).map(|k| r.a[i][k] * z[k]).sum();
        if lhs != bi as i128 {
            return None;
        }
    }
    Some(
        r.t.iter()
            .map(|row| narrow(row.iter().zip(&z).map(|(a, b)| a * b).sum()))
            .collect(),
    )
}

/// Smith normal form `u * m * v = d` with unimodular `u`, `v` and `d` diagonal,
/// each diagonal entry dividing the next.
pub fn smith_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = widen(m);
    let mut u: Wide = (0..rows)
        .map(|i| (0..rows).map(|j| i128::from(i == j)).collect())
        .collect();
    let mut v: Wide = (0..cols)
        .map(|i| (0..cols).map(|j| i128::from(i == j)).collect())
        .collect();
    let row_op = |a: &mut Wide, u: &mut Wide, i: usize, k: usize, f: i128| {
        // row_i += f * row_k
        for j in 0..a[0].len() {
            let t = a[k][j];
            a[i][j] += f * t;
        }
        for j in 0..u[0].len() {
            let t = u[k][j];
            u[i][j] += f * t;
        }
    };
    let col_op = |a: &mut Wide, v: &mut Wide, j: usize, k: usize, f: i128| {
        for row in a.iter_mut() {
            row[j] += f * row[k];
        }
        for row in v.iter_mut() {
            row[j] += f * row[k];
        }
    };
    for t in 0..rows.min(cols) {
        loop {
            // move the smallest nonzero entry of the trailing block to (t, t)
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            u.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let f = a[i][t].div_euclid(p);
                if f != 0 {
                    row_op(&mut a, &mut u, i, t, -f);
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let f = a[t][j].div_euclid(p);
                if f != 0 {
                    col_op(&mut a, &mut v, j, t, -f);
                }
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // enforce divisibility of the trailing block by the pivot
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => row_op(&mut a, &mut u, t, i, 1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for x in a[t].iter_mut() {
                *x = -*x;
            }
            for x in u[t].iter_mut() {
                *x = -*x;
            }
        }
    }
    (
        narrow_matrix(&u, rows),
        narrow_matrix(&a, cols),
        narrow_matrix(&v, cols),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_of_dependent_generators() {
        let m = IntMatrix::from_columns(2, &[vec![2, 0], vec![0, 2], vec![1, 1]]);
        let (basis, pivots) = hermite_basis(&m);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(basis, vec![vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn kernel_of_rank_one_row() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 6]]);
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert_eq!(m.apply(v), vec![0]);
        }
    }

    #[test]
    fn solve_detects_parity_obstruction() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(solve(&m, &[2, 4]), Some(vec![1, 2]));
        assert_eq!(solve(&m, &[1, 0]), None);
    }

    #[test]
    fn smith_form_invariants() {
        let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let (u, d, v) = smith_form(&m);
        assert_eq!(&(&u * &m) * &v, d);
        assert_eq!((d[(0, 0)], d[(1, 1)], d[(2, 2)]), (2, 6, 12));
        assert_eq!(u.determinant().abs(), 1);
        assert_eq!(v.determinant().abs(), 1);
    }
}
