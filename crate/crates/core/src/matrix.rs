//! Exact matrices over a [`Field`].
//!
//! Elimination always pivots on the first nonzero entry in column order, so
//! kernels and ranks are reproducible bit for bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::rational::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl Matrix {
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, f: impl Fn(usize, usize) -> FieldElement) -> Matrix {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { field: field.clone(), rows, cols, data }
    }

    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Matrix::from_fn(field, r, c, |i, j| field.from_int(rows[i][j]))
    }

    pub fn diagonal(field: &Field, diag: &[FieldElement]) -> Matrix {
        let mut m = Matrix::zero(field, diag.len(), diag.len());
        for (i, x) in diag.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<FieldElement>]) -> Matrix {
        Matrix::from_fn(field, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElement::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Matrix {
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn conj(&self) -> Matrix {
        self.map(FieldElement::conj)
    }

    pub fn add(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, o: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols), "shape mismatch");
        let data = self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect();
        Matrix { field: self.field.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, x: &FieldElement) -> Matrix {
        self.map(|a| a * x)
    }

    pub fn scale_q(&self, x: &Q) -> Matrix {
        self.map(|a| a.scale(x))
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut out = Matrix::zero(&self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = &out.data[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Vec<FieldElement> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// `self·o − o·self`
    pub fn commutator(&self, o: &Matrix) -> Matrix {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn commutes_with(&self, o: &Matrix) -> bool {
        self.commutator(o).is_zero()
    }

    pub fn trace(&self) -> FieldElement {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + self.get(i, i))
    }

    pub fn pow(&self, k: u32) -> Matrix {
        let mut acc = Matrix::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(&self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let rv = m.get(r, j);
                    if !rv.is_zero() {
                        let v = m.get(i, j) - &(&f * rv);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and a kernel basis in reduced echelon parametrisation: each kernel
    /// vector has a 1 at one free column and 0 at the other free columns.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<FieldElement>>) {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let kernel = free
            .iter()
            .map(|&fc| {
                let mut v = vec![self.field.zero(); self.cols];
                v[fc] = self.field.one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, fc);
                }
                v
            })
            .collect();
        (pivots.len(), kernel)
    }

    pub fn kernel(&self) -> Vec<Vec<FieldElement>> {
        self.rank_kernel().1
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        let aug = Matrix::from_fn(&self.field, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                self.field.one()
            } else {
                self.field.zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::DivisionByZero);
        }
        Ok(Matrix::from_fn(&self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    /// Some solution of `self · x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[FieldElement]) -> Option<Vec<FieldElement>> {
        assert_eq!(b.len(), self.rows, "shape mismatch");
        let aug = Matrix::from_fn(&self.field, self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// `m^cols = 0`.
    pub fn is_nilpotent(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NonSquare { rows: self.rows, cols: self.cols });
        }
        let mut p = self.clone();
        for _ in 1..self.cols.max(1) {
            if p.is_zero() {
                return Ok(true);
            }
            p = p.mul(self);
        }
        Ok(p.is_zero())
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

pub fn is_nilpotent(m: &Matrix) -> Result<bool> {
    m.is_nilpotent()
}

pub fn rank_kernel(m: &Matrix) -> (usize, Vec<Vec<FieldElement>>) {
    m.rank_kernel()
}

/// Sparse row of `(column, value)` pairs, sorted by column, no zeros.
pub type SparseRow = Vec<(usize, FieldElement)>;

/// Column-sparse matrix used for coboundary operators of large complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    /// Entries of each column, sorted by row.
    columns: Vec<SparseRow>,
}

impl SparseMatrix {
    pub fn new(field: &Field, rows: usize, cols: usize) -> Self {
        SparseMatrix { field: field.clone(), rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn from_columns(field: &Field, rows: usize, columns: Vec<SparseRow>) -> Self {
        SparseMatrix { field: field.clone(), rows, cols: columns.len(), columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &SparseRow {
        &self.columns[j]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zero(&self.field, self.rows, self.cols);
        for (j, col) in self.columns.iter().enumerate() {
            for (i, x) in col {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    /// Sparse product `self · o`.
    pub fn mul(&self, o: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let columns = o
            .columns
            .iter()
            .map(|ocol| {
                let mut acc: std::collections::BTreeMap<usize, FieldElement> = Default::default();
                for (k, b) in ocol {
                    for (i, a) in &self.columns[*k] {
                        let e = acc.entry(*i).or_insert_with(|| self.field.zero());
                        *e = &*e + &(a * b);
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix { field: self.field.clone(), rows: self.rows, cols: o.cols, columns }
    }

    /// Rank by sparse elimination on columns: each column is reduced against
    /// the stored pivot columns keyed by their leading row.
    pub fn rank(&self) -> usize {
        let mut pivots: std::collections::BTreeMap<usize, SparseRow> = Default::default();
        for col in &self.columns {
            let mut v = col.clone();
            while let Some((lead, lv)) = v.first().cloned() {
                match pivots.get(&lead) {
                    Some(p) => v = axpy(&v, &(&-&lv * &p[0].1.inv().expect("pivot")), p),
                    None => {
                        pivots.insert(lead, v);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

/// `v + f·w` on sorted sparse vectors.
fn axpy(v: &SparseRow, f: &FieldElement, w: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(v.len() + w.len());
    let (mut i, mut j) = (0, 0);
    while i < v.len() || j < w.len() {
        let take_v = j == w.len() || (i < v.len() && v[i].0 < w[j].0);
        let take_w = i == v.len() || (j < w.len() && w[j].0 < v[i].0);
        if take_v {
            out.push(v[i].clone());
            i += 1;
        } else if take_w {
            out.push((w[j].0, f * &w[j].1));
            j += 1;
        } else {
            let s = &v[i].1 + &(f * &w[j].1);
            if !s.is_zero() {
                out.push((v[i].0, s));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_kernel_examples() {
        let f = Field::rationals();
        let (r, k) = Matrix::identity(&f, 2).rank_kernel();
        assert_eq!((r, k.len()), (2, 0));
        let (r, k) = Matrix::zero(&f, 2, 2).rank_kernel();
        assert_eq!(r, 0);
        assert_eq!(k, vec![vec![f.one(), f.zero()], vec![f.zero(), f.one()]]);
        let (r, k) = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]).rank_kernel();
        assert_eq!(r, 1);
        assert_eq!(k, vec![vec![f.from_int(-2), f.one()]]);
    }

    #[test]
    fn inverse_and_solve() {
        let f = Field::gaussian_rationals();
        let m = Matrix::from_fn(&f, 2, 2, |i, j| f.parse(["1", "i", "2", "3"][2 * i + j]).unwrap());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&f, 2));
        let b = vec![f.one(), f.zero()];
        assert_eq!(m.mul_vec(&m.solve(&b).unwrap()), b);
        assert!(Matrix::from_ints(&f, &[&[1, 1], &[1, 1]]).inverse().is_err());
    }

    #[test]
    fn nilpotency() {
        let f = Field::rationals();
        let m = Matrix::from_ints(&f, &[&[0, 1, 5], &[0, 0, 2], &[0, 0, 0]]);
        assert!(m.is_nilpotent().unwrap());
        assert!(!Matrix::identity(&f, 3).is_nilpotent().unwrap());
        assert!(Matrix::zero(&f, 2, 3).is_nilpotent().is_err());
    }

    #[test]
    fn sparse_rank_matches_dense() {
        let f = Field::rationals();
        let m = Matrix::from_ints(&f, &[&[1, 2, 3, 0], &[2, 4, 6, 0], &[0, 1, 0, 1]]);
        let cols = (0..m.cols())
            .map(|j| (0..m.rows()).filter(|&i| !m.get(i, j).is_zero()).map(|i| (i, m.get(i, j).clone())).collect())
            .collect();
        let s = SparseMatrix::from_columns(&f, 3, cols);
        assert_eq!(s.rank(), m.rank());
        assert_eq!(s.to_dense(), m);
    }
}
