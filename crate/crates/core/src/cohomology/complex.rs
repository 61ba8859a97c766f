use crate::error::{Error, Result};
use crate::linalg::{quotient_dim, Matrix, Subspace};

/// A bounded cochain complex of finite-dimensional spaces. Grade `q` has
/// dimension `dims[q]`; `diffs[q]` maps grade `q` to grade `q + 1`.
#[derive(Clone, Debug)]
pub struct CochainComplex {
    labels: Vec<String>,
    dims: Vec<usize>,
    diffs: Vec<Matrix>,
}

impl CochainComplex {
    /// Checks shapes and `d_{q+1} d_q = 0`.
    pub fn new(labels: Vec<String>, dims: Vec<usize>, diffs: Vec<Matrix>) -> Result<Self> {
        if labels.len() != dims.len() || diffs.len() + 1 != dims.len().max(1) {
            return Err(Error::Shape(format!(
                "{} labels, {} grades and {} differentials",
                labels.len(),
                dims.len(),
                diffs.len()
            )));
        }
        for (q, d) in diffs.iter().enumerate() {
            if d.cols() != dims[q] || d.rows() != dims[q + 1] {
                return Err(Error::Shape(format!(
                    "differential {q} is {}x{}, grades are {} and {}",
                    d.rows(),
                    d.cols(),
                    dims[q],
                    dims[q + 1]
                )));
            }
        }
        for q in 1..diffs.len() {
            if !diffs[q].mul(&diffs[q - 1])?.is_zero() {
                return Err(Error::NotAComplex(q - 1));
            }
        }
        Ok(CochainComplex { labels, dims, diffs })
    }

    /// The zero complex on `grades` grades.
    pub fn zero(grades: usize) -> Self {
        CochainComplex {
            labels: (0..grades).map(|q| format!("0[{q}]")).collect(),
            dims: vec![0; grades],
            diffs: (1..grades).map(|_| Matrix::zeros(0, 0)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, q: usize) -> usize {
        self.dims[q]
    }

    pub fn label(&self, q: usize) -> &str {
        &self.labels[q]
    }

    pub fn differential(&self, q: usize) -> Option<&Matrix> {
        self.diffs.get(q)
    }

    /// `ker d_q`; everything at the last grade.
    pub fn cycles(&self, q: usize) -> Subspace {
        match self.diffs.get(q) {
            Some(d) => d.kernel_basis(),
            None => Subspace::full(self.dims[q]),
        }
    }

    /// `im d_{q−1}`; zero at grade 0.
    pub fn boundaries(&self, q: usize) -> Subspace {
        if q == 0 {
            Subspace::zero(self.dims[0])
        } else {
            self.diffs[q - 1].image()
        }
    }

    pub fn cohomology_dim(&self, q: usize) -> Result<usize> {
        quotient_dim(&self.cycles(q), &self.boundaries(q))
    }

    pub fn betti(&self) -> Result<Vec<usize>> {
        (0..self.len()).map(|q| self.cohomology_dim(q)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_complexes() {
        let d = Matrix::identity(1);
        let err = CochainComplex::new(vec!["a".into(), "b".into(), "c".into()], vec![1, 1, 1], vec![d.clone(), d]);
        assert_eq!(err.unwrap_err(), Error::NotAComplex(0));
        let bad = CochainComplex::new(vec!["a".into(), "b".into()], vec![2, 1], vec![Matrix::identity(1)]);
        assert!(matches!(bad, Err(Error::Shape(_))));
    }

    #[test]
    fn betti_numbers() {
        let d = Matrix::from_ints(&[&[1, -1]]);
        let c = CochainComplex::new(vec!["C0".into(), "C1".into()], vec![2, 1], vec![d]).unwrap();
        assert_eq!(c.betti().unwrap(), vec![1, 0]);
        assert_eq!(CochainComplex::zero(3).betti().unwrap(), vec![0, 0, 0]);
    }
}
