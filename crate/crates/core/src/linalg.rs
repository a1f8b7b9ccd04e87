//! Exact linear algebra over ℚ: rank, kernel, and linear solves.
//!
//! Ranks go through fraction-free (Bareiss) elimination on integer matrices
//! after clearing denominators; kernels and solves use rational reduced row
//! echelon form. No tolerances anywhere.

use crate::scalar::Rational;
use num::bigint::BigInt;
use num::{Integer, One, Zero};

/// Dense rational matrix, rows × cols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other[(k, j)].is_zero() {
                        continue;
                    }
                    let add = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += add;
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] += other[(i, j)].clone();
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] -= other[(i, j)].clone();
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = self.clone();
        for v in &mut out.data {
            *v = &*v * c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Rank by fraction-free Bareiss elimination on the denominator-cleared
    /// integer matrix.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // Clear denominators row by row (row scaling preserves rank).
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self[(i, j)].denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let v = &self[(i, j)];
                        v.numer() * (&lcm / v.denom())
                    })
                    .collect()
            })
            .collect();

        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..c {
            // find pivot
            let Some(p) = (row..r).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            for i in (row + 1)..r {
                for j in (col + 1)..c {
                    let t = &m[row][col] * &m[i][j] - &m[i][col] * &m[row][j];
                    m[i][j] = &t / &prev;
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            rank += 1;
            row += 1;
            if row == r {
                break;
            }
        }
        rank
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&i| !m[(i, col)].is_zero()) else {
                continue;
            };
            // swap rows
            for j in 0..m.cols {
                let a = m[(row, j)].clone();
                let b = m[(p, j)].clone();
                m[(row, j)] = b;
                m[(p, j)] = a;
            }
            let inv = Rational::one() / m[(row, col)].clone();
            for j in col..m.cols {
                m[(row, j)] = &m[(row, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != row && !m[(i, col)].is_zero() {
                    let f = m[(i, col)].clone();
                    for j in col..m.cols {
                        let sub = &f * &m[(row, j)];
                        m[(i, j)] -= sub;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel {v : M v = 0}, one column vector per element.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
        for free in 0..self.cols {
            if pivot_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (prow, &pcol) in pivots.iter().enumerate() {
                v[pcol] = -r[(prow, free)].clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve M x = b. Returns None when inconsistent. Free variables are set
    /// to zero, so the answer is deterministic.
    pub fn solve(&self, b: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        // inconsistent if a pivot lands in the last column
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (prow, &pcol) in pivots.iter().enumerate() {
            x[pcol] = r[(prow, self.cols)].clone();
        }
        Some(x)
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Rank of a sparse rational matrix given as rows (column → value maps).
/// Plain elimination with a sparsest-pivot-row heuristic; exact.
pub fn sparse_rank(mut rows: Vec<std::collections::BTreeMap<usize, Rational>>) -> usize {
    let mut rank = 0;
    rows.retain(|r| !r.is_empty());
    while !rows.is_empty() {
        // pick the shortest row as pivot
        let (idx, _) = rows
            .iter()
            .enumerate()
            .min_by_key(|(_, r)| r.len())
            .unwrap();
        let pivot_row = rows.swap_remove(idx);
        let (&pcol, pval) = pivot_row.iter().next().unwrap();
        let pinv = Rational::one() / pval.clone();
        rank += 1;
        for r in rows.iter_mut() {
            if let Some(v) = r.get(&pcol).cloned() {
                let factor = &v * &pinv;
                for (c, pv) in &pivot_row {
                    let sub = &factor * pv;
                    let entry = r.entry(*c).or_insert_with(Rational::zero);
                    *entry -= sub;
                    if entry.is_zero() {
                        r.remove(c);
                    }
                }
            }
        }
        rows.retain(|r| !r.is_empty());
    }
    rank
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| rat(x, 1)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[1, 0], &[0, 1]]).rank(), 2);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).rank(), 2);
        assert_eq!(QMatrix::zeros(0, 5).rank(), 0);
    }

    #[test]
    fn rank_with_fractions() {
        let mut a = QMatrix::zeros(2, 2);
        a[(0, 0)] = rat(1, 2);
        a[(0, 1)] = rat(1, 3);
        a[(1, 0)] = rat(3, 2);
        a[(1, 1)] = rat(1, 1);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn kernel_and_rank_complement() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let k = a.kernel_basis();
        assert_eq!(k.len(), 3 - a.rank());
        for v in &k {
            assert!(a.apply(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn sparse_rank_matches_dense() {
        use std::collections::BTreeMap;
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9], &[0, 0, 0]]);
        let rows: Vec<BTreeMap<usize, Rational>> = (0..a.rows)
            .map(|i| {
                (0..a.cols)
                    .filter(|&j| !a[(i, j)].is_zero())
                    .map(|j| (j, a[(i, j)].clone()))
                    .collect()
            })
            .collect();
        assert_eq!(sparse_rank(rows), a.rank());
    }

    #[test]
    fn solve_unique_and_inconsistent() {
        let a = m(&[&[2, 0], &[0, 4]]);
        let x = a.solve(&[rat(1, 1), rat(2, 1)]).unwrap();
        assert_eq!(x, vec![rat(1, 2), rat(1, 2)]);
        let b = m(&[&[1, 1], &[1, 1]]);
        assert!(b.solve(&[rat(0, 1), rat(1, 1)]).is_none());
    }
}
