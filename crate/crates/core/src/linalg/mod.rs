//! Exact linear algebra over the Gaussian rationals.
//!
//! Elimination is incremental: rows are inserted one at a time into a reduced
//! row echelon form, each taking its pivot at its lowest surviving column.
//! The result depends only on the insertion order, so every rank, kernel and
//! solution is reproducible bit for bit.

mod matrix;

use std::collections::BTreeMap;

use crate::algebra::Scalar;
use crate::error::{Error, Result};

pub use matrix::Matrix;

/// A sparse coordinate vector; absent indices are zero.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// `y += a·x`, dropping cancelled entries.
pub fn axpy(y: &mut SparseVec, a: &Scalar, x: &SparseVec) {
    if a.is_zero() {
        return;
    }
    for (&i, v) in x {
        let prod = a * v;
        match y.get_mut(&i) {
            Some(cur) => {
                *cur += &prod;
                if cur.is_zero() {
                    y.remove(&i);
                }
            }
            None => {
                y.insert(i, prod);
            }
        }
    }
}

pub fn scale_vec(x: &SparseVec, a: &Scalar) -> SparseVec {
    if a.is_zero() {
        return SparseVec::new();
    }
    x.iter().map(|(&i, v)| (i, v * a)).collect()
}

/// Dense view of a sparse vector.
pub fn to_dense(x: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (&i, v) in x {
        out[i] = v.clone();
    }
    out
}

pub fn from_dense(x: &[Scalar]) -> SparseVec {
    x.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// Reduced row echelon form built by insertion. Every stored row has a
/// leading 1 at its pivot column and zeros at all other pivot columns.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    width: usize,
    rows: Vec<SparseVec>,
    pivots: BTreeMap<usize, usize>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: BTreeMap::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Pivot column to row index.
    pub fn pivot_columns(&self) -> &BTreeMap<usize, usize> {
        &self.pivots
    }

    /// Remainder of `v` after clearing every pivot column.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = v.clone();
        for (&c, &i) in &self.pivots {
            if let Some(x) = r.get(&c).cloned() {
                axpy(&mut r, &-x, &self.rows[i]);
            }
        }
        r
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut r = self.reduce(&v);
        let Some((&c, lead)) = r.iter().next() else {
            return false;
        };
        let inv = lead.inv().expect("nonzero lead");
        r = scale_vec(&r, &inv);
        for row in &mut self.rows {
            if let Some(x) = row.get(&c).cloned() {
                axpy(row, &-x, &r);
            }
        }
        self.pivots.insert(c, self.rows.len());
        self.rows.push(r);
        true
    }
}

/// A linear subspace of `Q(i)^ambient`, held as a basis plus its echelon form.
#[derive(Clone, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<SparseVec>,
    echelon: Echelon,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
            echelon: Echelon::new(ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        let basis = (0..ambient)
            .map(|i| SparseVec::from([(i, Scalar::one())]))
            .collect();
        Subspace::from_independent(ambient, basis)
    }

    /// Span of arbitrary vectors; dependent ones are dropped in order.
    pub fn span(ambient: usize, vectors: Vec<SparseVec>) -> Self {
        let mut s = Subspace::zero(ambient);
        for v in vectors {
            s.push(v);
        }
        s
    }

    /// Basis known to be independent; asserted in debug builds.
    pub(crate) fn from_independent(ambient: usize, basis: Vec<SparseVec>) -> Self {
        let mut echelon = Echelon::new(ambient);
        for v in &basis {
            let grew = echelon.insert(v.clone());
            debug_assert!(grew, "dependent basis vector");
        }
        Subspace {
            ambient,
            basis,
            echelon,
        }
    }

    /// Adds `v` if it is not already in the span.
    pub fn push(&mut self, v: SparseVec) -> bool {
        if self.echelon.insert(v.clone()) {
            self.basis.push(v);
            true
        } else {
            false
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[SparseVec] {
        &self.basis
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.echelon.contains(v)
    }

    /// Remainder of `v` modulo the subspace: a canonical coset representative.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        self.echelon.reduce(v)
    }

    pub fn includes(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_ambient(other)?;
        let mut out = self.clone();
        for v in &other.basis {
            out.push(v.clone());
        }
        Ok(out)
    }

    /// Image under `m` (columns of `m` index this ambient space).
    pub fn map(&self, m: &Matrix) -> Result<Subspace> {
        if m.cols() != self.ambient {
            return Err(Error::Shape(format!(
                "map with {} columns applied to subspace of dimension-{} space",
                m.cols(),
                self.ambient
            )));
        }
        Ok(Subspace::span(m.rows(), self.basis.iter().map(|v| m.mul_vec(v)).collect()))
    }

    /// Basis vectors as the columns of a matrix.
    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_columns(self.ambient, &self.basis)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::Shape(format!(
                "subspaces of dimension-{} and dimension-{} spaces",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }
}

/// `dim K − dim I` after checking `I ⊆ K`.
pub fn quotient_dim(k: &Subspace, i: &Subspace) -> Result<usize> {
    k.check_ambient(i)?;
    for (n, v) in i.basis().iter().enumerate() {
        if !k.contains(v) {
            return Err(Error::InclusionViolation(format!(
                "image basis vector {n} lies outside the kernel"
            )));
        }
    }
    Ok(k.dim() - i.dim())
}

/// Rank of the map `K_a / I_a → K_b / I_b` induced by `m`, given that `m`
/// sends `K_a` into `K_b` and `I_a` into `I_b` (both checked).
pub fn induced_rank(m: &Matrix, ka: &Subspace, ia: &Subspace, kb: &Subspace, ib: &Subspace) -> Result<usize> {
    let mk = ka.map(m)?;
    if !kb.includes(&mk) {
        return Err(Error::InclusionViolation("map does not preserve cycles".into()));
    }
    if !ib.includes(&ia.map(m)?) {
        return Err(Error::InclusionViolation("map does not preserve boundaries".into()));
    }
    Ok(ib.sum(&mk)?.dim() - ib.dim())
}
