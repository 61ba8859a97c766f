//! Short exact sequences of cochain complexes and their long exact
//! cohomology sequences.

mod mv;
mod relative;

use std::fmt;

use serde::Serialize;

use crate::algebra::Scalar;
use crate::checks::gen::Gen;
use crate::cohomology::CochainComplex;
use crate::error::{Error, Result};
use crate::linalg::{axpy, induced_rank, Echelon, Matrix, SparseVec, Subspace};

pub use mv::{direct_sum, identity_cover, laurent_cover, make_mv_ses, residue_cover, Cover};
pub use relative::{
    corollary28_report, delta_equals_pullback_check, make_relative_complex, CorollaryItem, CorollaryReport,
    relative_reports, DeltaReport, DeltaVerdict, RelativeComplex,
};

/// Which short-exactness condition failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SesCondition {
    InjectNotInjective,
    ProjectNotSurjective,
    KernelNotImage,
}

impl fmt::Display for SesCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SesCondition::InjectNotInjective => "left map is not injective",
            SesCondition::ProjectNotSurjective => "right map is not surjective",
            SesCondition::KernelNotImage => "kernel of the right map differs from the image of the left map",
        })
    }
}

/// Per-grade matrices commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    components: Vec<Matrix>,
}

impl ChainMap {
    /// Checks shapes and `d_target · c_q = c_{q+1} · d_source` at every grade.
    pub fn new(source: &CochainComplex, target: &CochainComplex, components: Vec<Matrix>) -> Result<Self> {
        if source.len() != target.len() || components.len() != source.len() {
            return Err(Error::Shape(format!(
                "chain map with {} components between complexes of {} and {} grades",
                components.len(),
                source.len(),
                target.len()
            )));
        }
        for (q, c) in components.iter().enumerate() {
            if c.cols() != source.dim(q) || c.rows() != target.dim(q) {
                return Err(Error::Shape(format!(
                    "component {q} is {}x{}, expected {}x{}",
                    c.rows(),
                    c.cols(),
                    target.dim(q),
                    source.dim(q)
                )));
            }
        }
        for q in 0..components.len().saturating_sub(1) {
            let (Some(ds), Some(dt)) = (source.differential(q), target.differential(q)) else {
                continue;
            };
            if dt.mul(&components[q])? != components[q + 1].mul(ds)? {
                return Err(Error::NotAChainMap(q));
            }
        }
        Ok(ChainMap { components })
    }

    pub fn identity(c: &CochainComplex) -> Self {
        ChainMap {
            components: (0..c.len()).map(|q| Matrix::identity(c.dim(q))).collect(),
        }
    }

    pub fn zero(source: &CochainComplex, target: &CochainComplex) -> Self {
        ChainMap {
            components: (0..source.len()).map(|q| Matrix::zeros(target.dim(q), source.dim(q))).collect(),
        }
    }

    pub fn component(&self, q: usize) -> &Matrix {
        &self.components[q]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Rank of the induced map on cohomology at grade `q`.
    pub fn induced_rank(&self, source: &CochainComplex, target: &CochainComplex, q: usize) -> Result<usize> {
        induced_rank(
            &self.components[q],
            &source.cycles(q),
            &source.boundaries(q),
            &target.cycles(q),
            &target.boundaries(q),
        )
    }
}

/// `0 → left → middle → right → 0`, verified grade by grade.
#[derive(Clone, Debug)]
pub struct ShortExactSequence {
    pub left: CochainComplex,
    pub middle: CochainComplex,
    pub right: CochainComplex,
    pub inject: ChainMap,
    pub project: ChainMap,
}

impl ShortExactSequence {
    pub fn new(
        left: CochainComplex,
        middle: CochainComplex,
        right: CochainComplex,
        inject: ChainMap,
        project: ChainMap,
    ) -> Result<Self> {
        for q in 0..middle.len() {
            let i = inject.component(q);
            let p = project.component(q);
            let ses = |condition| Error::Ses { grade: q, condition };
            let ri = i.rank();
            if ri != left.dim(q) {
                return Err(ses(SesCondition::InjectNotInjective));
            }
            let rp = p.rank();
            if rp != right.dim(q) {
                return Err(ses(SesCondition::ProjectNotSurjective));
            }
            if !p.mul(i)?.is_zero() || ri != middle.dim(q) - rp {
                return Err(ses(SesCondition::KernelNotImage));
            }
        }
        Ok(ShortExactSequence {
            left,
            middle,
            right,
            inject,
            project,
        })
    }

    pub fn grades(&self) -> usize {
        self.middle.len()
    }

    /// `δ(z)` for a cycle `z` of the right complex at grade `q`, using the
    /// lift `y + inject·shift` of `z`. Every step is an exact solve.
    fn zig_zag(&self, q: usize, z: &SparseVec, shift: Option<&SparseVec>) -> Result<SparseVec> {
        let Some(dm) = self.middle.differential(q) else {
            return Ok(SparseVec::new());
        };
        let mut y = self
            .project
            .component(q)
            .solve(z)?
            .ok_or_else(|| Error::ZigZag(format!("no lift through the right map at grade {q}")))?;
        if let Some(s) = shift {
            axpy(&mut y, &Scalar::one(), &self.inject.component(q).mul_vec(s));
        }
        let dy = dm.mul_vec(&y);
        let x = self
            .inject
            .component(q + 1)
            .solve(&dy)?
            .ok_or_else(|| Error::ZigZag(format!("differential of the lift leaves the left complex at grade {}", q + 1)))?;
        if let Some(dl) = self.left.differential(q + 1) {
            if !dl.mul_vec(&x).is_empty() {
                return Err(Error::ZigZag(format!("connecting image is not a cycle at grade {}", q + 1)));
            }
        }
        Ok(x)
    }

    /// Connecting images of the given right cycles at grade `q`.
    pub fn connecting(&self, q: usize, cycles: &[SparseVec]) -> Result<Vec<SparseVec>> {
        cycles.iter().map(|z| self.zig_zag(q, z, None)).collect()
    }
}

/// A basis of cycles independent modulo boundaries: one vector per class.
pub fn class_representatives(cycles: &Subspace, boundaries: &Subspace) -> Vec<SparseVec> {
    let mut e = Echelon::new(cycles.ambient());
    for b in boundaries.basis() {
        e.insert(b.clone());
    }
    cycles
        .basis()
        .iter()
        .filter(|z| e.insert((*z).clone()))
        .cloned()
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LesNode {
    pub group: String,
    pub dim: usize,
    pub out_map: String,
    pub out_map_rank: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LongExactSequenceReport {
    pub nodes: Vec<LesNode>,
    pub alternating_sum: i64,
    pub lift_checks: usize,
    pub exact: bool,
}

impl LongExactSequenceReport {
    /// Node for group `k ∈ {0,1,2}` (left, middle, right) at grade `q`.
    pub fn node(&self, q: usize, k: usize) -> &LesNode {
        &self.nodes[3 * q + k]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

const ALTERNATE_LIFTS: usize = 2;

/// Builds the long exact sequence of `ses` with the connecting map computed
/// by zig-zag, and checks it node by node. Alternate lifts are sampled to
/// confirm that connecting classes do not depend on the lift.
pub fn snake_les(ses: &ShortExactSequence) -> Result<LongExactSequenceReport> {
    let n = ses.grades();
    let mut dims = Vec::with_capacity(3 * n);
    let mut ranks = Vec::with_capacity(3 * n);
    let mut labels = Vec::with_capacity(3 * n);
    let mut lift_checks = 0;
    let mut gen = Gen::new(0x1e5);
    for q in 0..n {
        let (zl, bl) = (ses.left.cycles(q), ses.left.boundaries(q));
        let (zm, bm) = (ses.middle.cycles(q), ses.middle.boundaries(q));
        let (zr, br) = (ses.right.cycles(q), ses.right.boundaries(q));
        dims.push(crate::linalg::quotient_dim(&zl, &bl)?);
        dims.push(crate::linalg::quotient_dim(&zm, &bm)?);
        dims.push(crate::linalg::quotient_dim(&zr, &br)?);
        ranks.push(induced_rank(ses.inject.component(q), &zl, &bl, &zm, &bm)?);
        ranks.push(induced_rank(ses.project.component(q), &zm, &bm, &zr, &br)?);
        labels.push((format!("H^{q}({})", ses.left.label(q)), format!("inject*[{q}]")));
        labels.push((format!("H^{q}({})", ses.middle.label(q)), format!("project*[{q}]")));
        labels.push((format!("H^{q}({})", ses.right.label(q)), format!("delta[{q}]")));
        if q + 1 == n {
            ranks.push(0);
            continue;
        }
        let bl1 = ses.left.boundaries(q + 1);
        let reps = zr.basis();
        let images = ses.connecting(q, reps)?;
        for (z, x) in reps.iter().zip(&images) {
            for _ in 0..ALTERNATE_LIFTS {
                let shift: SparseVec = (0..ses.left.dim(q))
                    .map(|i| (i, Scalar::from_int(gen.range(-2, 2))))
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
                let x2 = ses.zig_zag(q, z, Some(&shift))?;
                let mut diff = x2;
                axpy(&mut diff, &Scalar::from_int(-1), x);
                if !bl1.contains(&diff) {
                    return Err(Error::ZigZag(format!("connecting class depends on the lift at grade {q}")));
                }
                lift_checks += 1;
            }
        }
        for b in ses.connecting(q, br.basis())? {
            if !bl1.contains(&b) {
                return Err(Error::ZigZag(format!("connecting map sends a boundary to a nonzero class at grade {q}")));
            }
        }
        let span = bl1.sum(&Subspace::span(ses.left.dim(q + 1), images))?;
        ranks.push(span.dim() - bl1.dim());
    }
    let mut nodes = Vec::with_capacity(dims.len());
    for k in 0..dims.len() {
        let incoming = if k == 0 { 0 } else { ranks[k - 1] };
        let (group, out_map) = labels[k].clone();
        nodes.push(LesNode {
            group,
            dim: dims[k],
            out_map,
            out_map_rank: ranks[k],
            exact: incoming + ranks[k] == dims[k],
        });
    }
    let alternating_sum = dims
        .iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum();
    let exact = nodes.iter().all(|n| n.exact) && alternating_sum == 0;
    Ok(LongExactSequenceReport {
        nodes,
        alternating_sum,
        lift_checks,
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(d: &[&[i64]], labels: [&str; 2]) -> CochainComplex {
        let m = Matrix::from_ints(d);
        CochainComplex::new(vec![labels[0].into(), labels[1].into()], vec![m.cols(), m.rows()], vec![m]).unwrap()
    }

    #[test]
    fn chain_maps_must_commute() {
        let a = two_term(&[&[1]], ["A0", "A1"]);
        let b = two_term(&[&[2]], ["B0", "B1"]);
        assert!(ChainMap::new(&a, &b, vec![Matrix::identity(1), Matrix::identity(1)]).is_err());
        assert!(ChainMap::new(&a, &b, vec![Matrix::identity(1), Matrix::from_ints(&[&[2]])]).is_ok());
    }

    #[test]
    fn zero_left_gives_isomorphisms() {
        let c = two_term(&[&[1, 0]], ["C0", "C1"]);
        let zero = CochainComplex::zero(2);
        let ses = ShortExactSequence::new(
            zero.clone(),
            c.clone(),
            c.clone(),
            ChainMap::zero(&zero, &c),
            ChainMap::identity(&c),
        )
        .unwrap();
        let les = snake_les(&ses).unwrap();
        assert!(les.exact);
        assert_eq!(les.node(0, 2).out_map_rank, 0);
        assert_eq!(les.node(0, 1).out_map_rank, les.node(0, 1).dim);
    }

    #[test]
    fn acyclic_middle_makes_delta_an_isomorphism() {
        // 0 → C[1] → cone → C → 0 for C = (k → 0)
        let left = CochainComplex::new(vec!["L0".into(), "L1".into()], vec![0, 1], vec![Matrix::zeros(1, 0)]).unwrap();
        let right = CochainComplex::new(vec!["R0".into(), "R1".into()], vec![1, 0], vec![Matrix::zeros(0, 1)]).unwrap();
        let middle = two_term(&[&[1]], ["M0", "M1"]);
        let ses = ShortExactSequence::new(
            left.clone(),
            middle.clone(),
            right.clone(),
            ChainMap::new(&left, &middle, vec![Matrix::zeros(1, 0), Matrix::identity(1)]).unwrap(),
            ChainMap::new(&middle, &right, vec![Matrix::identity(1), Matrix::zeros(0, 1)]).unwrap(),
        )
        .unwrap();
        let les = snake_les(&ses).unwrap();
        assert!(les.exact, "{}", les.to_json());
        assert_eq!(les.node(0, 2).out_map_rank, 1);
        assert_eq!(les.node(1, 0).dim, 1);
    }

    #[test]
    fn ses_failures_name_the_condition() {
        let c = two_term(&[&[1]], ["C0", "C1"]);
        let err = ShortExactSequence::new(c.clone(), c.clone(), c.clone(), ChainMap::identity(&c), ChainMap::identity(&c))
            .unwrap_err();
        assert_eq!(
            err,
            Error::Ses {
                grade: 0,
                condition: SesCondition::KernelNotImage
            }
        );
        let err = ShortExactSequence::new(c.clone(), c.clone(), c.clone(), ChainMap::zero(&c, &c), ChainMap::identity(&c))
            .unwrap_err();
        assert!(matches!(err, Error::Ses { grade: 0, condition: SesCondition::InjectNotInjective }));
    }

    #[test]
    fn representatives_skip_boundaries() {
        let z = Subspace::full(2);
        let b = Subspace::span(2, vec![SparseVec::from([(0, Scalar::one())])]);
        let reps = class_representatives(&z, &b);
        assert_eq!(reps, vec![SparseVec::from([(1, Scalar::one())])]);
    }
}
