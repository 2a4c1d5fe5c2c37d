//! Exact dense linear algebra over a [`Field`].

use crate::field::{Field, FieldElem};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        Self::scalar(n, FieldElem::ONE)
    }

    pub fn scalar(n: usize, c: FieldElem) -> Matrix {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diagonal(diag: &[FieldElem]) -> Matrix {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<FieldElem>>, cols: usize) -> Matrix {
        let n = rows.len();
        let data: Vec<FieldElem> = rows.into_iter().flatten().collect();
        assert_eq!(data.len(), n * cols, "ragged rows");
        Matrix { rows: n, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<FieldElem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn diag(&self) -> Vec<FieldElem> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).collect()
    }

    /// `Some(c)` if the matrix is `c·I`.
    pub fn as_scalar(&self) -> Option<FieldElem> {
        if self.rows != self.cols || !self.is_diagonal() {
            return None;
        }
        let c = if self.rows == 0 { FieldElem::ZERO } else { self.get(0, 0) };
        self.diag().iter().all(|&d| d == c).then_some(c)
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sum");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in difference");
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, f: &Field, c: FieldElem) -> Matrix {
        let data = self.data.iter().map(|&a| f.mul(c, a)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self + c·other`.
    pub fn add_scaled(&mut self, f: &Field, c: FieldElem, other: &Matrix) {
        if c.is_zero() {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = f.add(*a, f.mul(c, b));
            }
        }
    }

    pub fn pow(&self, f: &Field, e: u64) -> Matrix {
        (0..e).fold(Matrix::identity(self.rows), |acc, _| acc.mul(f, self))
    }

    pub fn commutator(&self, f: &Field, other: &Matrix) -> Matrix {
        self.mul(f, other).sub(f, &other.mul(f, self))
    }

    pub fn apply(&self, f: &Field, v: &[FieldElem]) -> Vec<FieldElem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(FieldElem::ZERO, |acc, (&a, &x)| {
                    if a.is_zero() || x.is_zero() {
                        acc
                    } else {
                        f.add(acc, f.mul(a, x))
                    }
                })
            })
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j));
            }
        }
        m
    }

    pub fn to_sparse(&self) -> Sparse {
        let rows = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(j, &x)| (j, x))
                    .collect()
            })
            .collect();
        Sparse { cols: self.cols, rows }
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut s = Subspace::new(self.cols);
        for i in 0..self.rows {
            s.insert(f, self.row(i).to_vec());
        }
        s.dim()
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        self.rows == self.cols && self.rank(f) == self.rows
    }

    /// Basis of `{x : self·x = 0}`.
    pub fn nullspace(&self, f: &Field) -> Vec<Vec<FieldElem>> {
        let mut s = Subspace::new(self.cols);
        for i in 0..self.rows {
            s.insert(f, self.row(i).to_vec());
        }
        s.complement_kernel(f)
    }
}

/// Row-wise sparse copy of a matrix, for repeated application to vectors.
#[derive(Clone, Debug)]
pub struct Sparse {
    cols: usize,
    rows: Vec<Vec<(usize, FieldElem)>>,
}

impl Sparse {
    pub fn apply(&self, f: &Field, v: &[FieldElem]) -> Vec<FieldElem> {
        debug_assert_eq!(v.len(), self.cols);
        self.rows
            .iter()
            .map(|row| {
                row.iter().fold(FieldElem::ZERO, |acc, &(j, a)| {
                    let x = v[j];
                    if x.is_zero() {
                        acc
                    } else {
                        f.add(acc, f.mul(a, x))
                    }
                })
            })
            .collect()
    }
}

/// A subspace of `K^n` held as a reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    // sorted by pivot column
    rows: Vec<Vec<FieldElem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn new(ambient: usize) -> Subspace {
        Subspace { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        let mut s = Self::new(ambient);
        s.rows = (0..ambient).map(|i| unit(ambient, i)).collect();
        s.pivots = (0..ambient).collect();
        s
    }

    pub fn spanned_by(f: &Field, ambient: usize, vecs: impl IntoIterator<Item = Vec<FieldElem>>) -> Subspace {
        let mut s = Self::new(ambient);
        for v in vecs {
            s.insert(f, v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<FieldElem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its projection along the pivot coordinates.
    pub fn reduce(&self, f: &Field, mut v: Vec<FieldElem>) -> Vec<FieldElem> {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let a = v[c];
            if a.is_zero() {
                continue;
            }
            let na = f.neg(a);
            for (x, &y) in v.iter_mut().zip(row).skip(c) {
                if !y.is_zero() {
                    *x = f.add(*x, f.mul(na, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, f: &Field, v: &[FieldElem]) -> bool {
        self.reduce(f, v.to_vec()).iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, f: &Field, v: Vec<FieldElem>) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut v = self.reduce(f, v);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv(v[c]).expect("nonzero pivot");
        for x in v.iter_mut().skip(c) {
            *x = f.mul(inv, *x);
        }
        for row in self.rows.iter_mut() {
            let a = row[c];
            if a.is_zero() {
                continue;
            }
            let na = f.neg(a);
            for (x, &y) in row.iter_mut().zip(&v).skip(c) {
                if !y.is_zero() {
                    *x = f.add(*x, f.mul(na, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < c);
        self.pivots.insert(pos, c);
        self.rows.insert(pos, v);
        true
    }

    pub fn contains_subspace(&self, f: &Field, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains(f, v))
    }

    /// Basis of the solutions `x` with `row·x = 0` for every basis row.
    pub fn complement_kernel(&self, f: &Field) -> Vec<Vec<FieldElem>> {
        let free: Vec<usize> = (0..self.ambient).filter(|c| !self.pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![FieldElem::ZERO; self.ambient];
                x[fc] = FieldElem::ONE;
                for (row, &pc) in self.rows.iter().zip(&self.pivots) {
                    x[pc] = f.neg(row[fc]);
                }
                x
            })
            .collect()
    }
}

pub fn unit(n: usize, i: usize) -> Vec<FieldElem> {
    let mut v = vec![FieldElem::ZERO; n];
    v[i] = FieldElem::ONE;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f5() -> Field {
        Field::prime(5).unwrap()
    }

    fn mat(f: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect(), cols)
    }

    #[test]
    fn echelon_is_canonical() {
        let f = f5();
        let a = Subspace::spanned_by(&f, 3, [mat(&f, &[&[1, 2, 3]]).row(0).to_vec(), mat(&f, &[&[2, 4, 0]]).row(0).to_vec()]);
        let b = Subspace::spanned_by(&f, 3, [mat(&f, &[&[0, 0, 1]]).row(0).to_vec(), mat(&f, &[&[3, 1, 0]]).row(0).to_vec()]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 2]);
    }

    #[test]
    fn nullspace_of_rank_one() {
        let f = f5();
        let m = mat(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(&f), 1);
        let ker = m.nullspace(&f);
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(m.apply(&f, &v).iter().all(|x| x.is_zero()));
        }
        assert!(!m.select(&[0, 1], &[0, 1]).is_invertible(&f));
        assert!(mat(&f, &[&[1, 2], &[3, 4]]).is_invertible(&f));
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in prop::collection::vec(0i64..5, 12)) {
            let f = f5();
            let m = Matrix::from_rows(entries.chunks(4).map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect(), 4);
            prop_assert_eq!(m.rank(&f) + m.nullspace(&f).len(), 4);
            prop_assert_eq!(m.rank(&f), m.transpose().rank(&f));
            let sp = m.to_sparse();
            let v: Vec<_> = (0..4).map(|i| f.from_int(i * 3 + 1)).collect();
            prop_assert_eq!(sp.apply(&f, &v), m.apply(&f, &v));
        }
    }
}
