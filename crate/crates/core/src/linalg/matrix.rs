use std::collections::BTreeMap;
use std::fmt;

use super::{Echelon, SparseVec, Subspace};
use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// A sparse matrix over the Gaussian rationals, stored by rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![SparseVec::new(); rows],
        }
    }

    pub fn identity(k: usize) -> Self {
        let mut m = Matrix::zeros(k, k);
        for i in 0..k {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let mut m = Matrix::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for (j, v) in row.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Convenience for small integer matrices.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
            .collect();
        Matrix::from_rows(rows, cols).expect("rectangular input")
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (&i, v) in col {
                m.set(i, j, v.clone());
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

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(i < self.rows && j < self.cols, "entry ({i},{j}) outside {}x{}", self.rows, self.cols);
        if v.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, v);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: &Scalar) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v.clone());
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(BTreeMap::is_empty)
    }

    pub fn column(&self, j: usize) -> SparseVec {
        self.data
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.get(&j).map(|v| (i, v.clone())))
            .collect()
    }

    pub fn columns(&self) -> Vec<SparseVec> {
        let mut out = vec![SparseVec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (&j, v) in row {
                out[j].insert(i, v.clone());
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data: self.columns(),
        }
    }

    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = Scalar::zero();
            for (j, x) in v {
                if let Some(a) = row.get(j) {
                    acc.add_mul(a, x);
                }
            }
            if !acc.is_zero() {
                out.insert(i, acc);
            }
        }
        out
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, a) in row {
                super::axpy(&mut acc, a, &other.data[*k]);
            }
            out.data[i] = acc;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut out = Matrix::zeros(self.rows, self.cols);
        if c.is_zero() {
            return out;
        }
        for (i, row) in self.data.iter().enumerate() {
            out.data[i] = row.iter().map(|(&j, v)| (j, v * c)).collect();
        }
        out
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (i, row) in other.data.iter().enumerate() {
            super::axpy(&mut out.data[i], &Scalar::one(), row);
        }
        Ok(out)
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::Shape(format!(
                "vstack of {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::Shape(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = self.clone();
        out.cols += other.cols;
        for (i, row) in other.data.iter().enumerate() {
            for (&j, v) in row {
                out.data[i].insert(self.cols + j, v.clone());
            }
        }
        Ok(out)
    }

    /// Block matrix `[[a, b], [c, d]]`; block shapes must agree.
    pub fn blocks(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Result<Matrix> {
        a.hstack(b)?.vstack(&c.hstack(d)?)
    }

    /// Rows permuted so that row `i` of the result is row `perm[i]` of self.
    pub fn permute_rows(&self, perm: &[usize]) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: perm.iter().map(|&i| self.data[i].clone()).collect(),
        }
    }

    pub fn permute_cols(&self, perm: &[usize]) -> Matrix {
        self.transpose().permute_rows(perm).transpose()
    }

    /// Reduced row echelon form of the rows, pivots chosen row by row at the
    /// lowest nonzero column.
    pub fn row_echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.cols);
        for row in &self.data {
            e.insert(row.clone());
        }
        e
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            self.row_echelon().rank()
        } else {
            self.transpose().row_echelon().rank()
        }
    }

    /// Null space `{v : Mv = 0}` as a subspace of the column space.
    pub fn kernel_basis(&self) -> Subspace {
        let e = self.row_echelon();
        let pivots = e.pivot_columns();
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivots.contains_key(&j) {
                continue;
            }
            let mut v = SparseVec::new();
            v.insert(j, Scalar::one());
            for (&c, &r) in pivots {
                if let Some(x) = e.rows()[r].get(&j) {
                    v.insert(c, -x);
                }
            }
            basis.push(v);
        }
        Subspace::from_independent(self.cols, basis)
    }

    /// Column space as a subspace of the row space.
    pub fn image(&self) -> Subspace {
        Subspace::span(self.rows, self.columns())
    }

    /// Some `x` with `Mx = b`, or `None` if the system is inconsistent.
    pub fn solve(&self, b: &SparseVec) -> Result<Option<SparseVec>> {
        if let Some((&i, _)) = b.iter().next_back() {
            if i >= self.rows {
                return Err(Error::Shape(format!(
                    "right-hand side index {i} outside {} rows",
                    self.rows
                )));
            }
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, std::slice::from_ref(b)))?;
        let e = aug.row_echelon();
        let pivots = e.pivot_columns();
        if pivots.contains_key(&self.cols) {
            return Ok(None);
        }
        let mut x = SparseVec::new();
        for (&c, &r) in pivots {
            if let Some(v) = e.rows()[r].get(&self.cols) {
                x.insert(c, v.clone());
            }
        }
        Ok(Some(x))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
