//! Dense exact linear algebra: fraction-free rank, reduced echelon forms,
//! kernels, and an incremental echelon basis used for span membership.

use std::fmt;

use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[S]> = (0..self.rows).map(|r| &self.data[r * self.cols..(r + 1) * self.cols]).collect();
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &rows).finish()
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    /// Builds a matrix from rows; all rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<S>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix row");
            data.extend(row);
        }
        Matrix { rows: n, cols, data }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix column");
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
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

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: S) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Row vector times matrix: `v^T A`.
    pub fn vec_mul(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![S::zero(); self.cols];
        for (r, coeff) in v.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for (c, slot) in out.iter_mut().enumerate() {
                let a = self.get(r, c);
                if !a.is_zero() {
                    *slot = slot.clone() + coeff.clone() * a.clone();
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let row = other.vec_mul(self.row(r));
            for (c, v) in row.into_iter().enumerate() {
                out.set(r, c, v);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Top-left `rows x cols` block.
    pub fn leading_block(&self, rows: usize, cols: usize) -> Matrix<S> {
        let mut m = Matrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m.set(r, c, self.get(r, c).clone());
            }
        }
        m
    }

    /// Rank by fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut prev = S::one();
        let mut k = 0;
        for col in 0..m.cols {
            if k == m.rows {
                break;
            }
            let Some(p) = (k..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(k, p);
            let pivot = m.get(k, col).clone();
            for i in (k + 1)..m.rows {
                let lead = m.get(i, col).clone();
                for j in (col + 1)..m.cols {
                    let v = (m.get(i, j).clone() * pivot.clone() - lead.clone() * m.get(k, j).clone()) / prev.clone();
                    m.set(i, j, v);
                }
                m.set(i, col, S::zero());
            }
            prev = pivot;
            k += 1;
        }
        k
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref(&self) -> (Matrix<S>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut k = 0;
        for col in 0..m.cols {
            if k == m.rows {
                break;
            }
            let Some(p) = (k..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(k, p);
            let inv = S::one() / m.get(k, col).clone();
            for j in col..m.cols {
                let v = m.get(k, j).clone() * inv.clone();
                m.set(k, j, v);
            }
            for i in 0..m.rows {
                if i == k || m.get(i, col).is_zero() {
                    continue;
                }
                let factor = m.get(i, col).clone();
                for j in col..m.cols {
                    let v = m.get(i, j).clone() - factor.clone() * m.get(k, j).clone();
                    m.set(i, j, v);
                }
            }
            pivots.push(col);
            k += 1;
        }
        (m, pivots)
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(row, f).clone();
                }
                v
            })
            .collect()
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = red.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// `d[j][i]` = rank of the top-left `j x i` block, for `0 <= j <= rows`, `0 <= i <= cols`.
    pub fn leading_ranks(&self) -> Vec<Vec<usize>> {
        let mut table = vec![vec![0usize; self.cols + 1]; self.rows + 1];
        for i in 1..=self.cols {
            let mut basis = EchelonBasis::new(i);
            for j in 1..=self.rows {
                basis.insert(self.row(j - 1)[..i].to_vec());
                table[j][i] = basis.rank();
            }
        }
        table
    }
}

/// Incrementally maintained echelon basis of a subspace of `S^dim`.
///
/// Stored rows are fully reduced against each other and have leading entry 1.
#[derive(Clone, Debug)]
pub struct EchelonBasis<S> {
    dim: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Scalar> EchelonBasis<S> {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Remainder of `v` after reduction against the basis (zero iff `v` is in the span).
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone();
            for (slot, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *slot = slot.clone() - factor.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut v = self.reduce(&v);
        let Some(pivot) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = S::one() / v[pivot].clone();
        for x in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if row[pivot].is_zero() {
                continue;
            }
            let factor = row[pivot].clone();
            for (slot, r) in row.iter_mut().zip(&v) {
                *slot = slot.clone() - factor.clone() * r.clone();
            }
        }
        let at = self.rows.iter().position(|(p, _)| *p > pivot).unwrap_or(self.rows.len());
        self.rows.insert(at, (pivot, v));
        true
    }

    /// Basis rows in reduced row echelon order.
    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    pub fn to_matrix(&self) -> Matrix<S> {
        Matrix::from_rows(self.dim, self.rows.iter().map(|(_, r)| r.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::from_ratio(n, 1)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(cols, rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(mat(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(mat(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]).rank(), 2);
        assert_eq!(Matrix::<Rational>::zeros(3, 4).rank(), 0);
        assert_eq!(mat(&[&[0, 0, 1], &[0, 1, 1], &[1, 1, 1]]).rank(), 3);
    }

    #[test]
    fn rref_nullspace_solve() {
        let a = mat(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        let (r, pivots) = a.rref();
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(r.row(2), &[q(0), q(0), q(0)]);
        let ker = a.nullspace();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).iter().all(|x| x.is_zero()));
        let x = a.solve(&[q(6), q(12), q(2)]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![q(6), q(12), q(2)]);
        assert!(a.solve(&[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn leading_ranks_match_block_ranks() {
        let a = mat(&[&[0, 0, 1, 2], &[0, 0, 3, 0], &[-1, -3, 0, 5], &[-2, 0, -5, 0]]);
        let table = a.leading_ranks();
        for j in 0..=4 {
            for i in 0..=4 {
                assert_eq!(table[j][i], a.leading_block(j, i).rank(), "block {j}x{i}");
            }
        }
    }

    #[test]
    fn echelon_membership() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(vec![q(0), q(2), q(4)]));
        assert!(!b.insert(vec![q(0), q(1), q(2)]));
        assert!(b.insert(vec![q(1), q(1), q(1)]));
        assert!(b.contains(&[q(3), q(5), q(7)]));
        assert!(!b.contains(&[q(0), q(0), q(1)]));
        assert_eq!(b.pivots(), vec![0, 1]);
    }
}
