//! Mayer–Vietoris sequences for two-set covers given algebraically.
//!
//! A cover supplies complexes for `M`, `U`, `V`, `U∩V` and the four
//! restriction chain maps. The sequence is
//! `0 → M → U ⊕ V → U∩V → 0` with `A = (r_U, r_V)` and
//! `B = r_{U,UV} − r_{V,UV}`.

use super::{ChainMap, ShortExactSequence};
use crate::algebra::Scalar;
use crate::cohomology::{dolbeault_complex, CochainComplex, OperatorTag};
use crate::error::Result;
use crate::forms::FoliationModel;
use crate::linalg::Matrix;

#[derive(Clone, Debug)]
pub struct Cover {
    pub m: CochainComplex,
    pub u: CochainComplex,
    pub v: CochainComplex,
    pub uv: CochainComplex,
    pub r_u: ChainMap,
    pub r_v: ChainMap,
    pub r_u_uv: ChainMap,
    pub r_v_uv: ChainMap,
}

/// `a ⊕ b` with block-diagonal differentials.
pub fn direct_sum(a: &CochainComplex, b: &CochainComplex) -> Result<CochainComplex> {
    let n = a.len();
    let labels = (0..n).map(|q| format!("{} + {}", a.label(q), b.label(q))).collect();
    let dims = (0..n).map(|q| a.dim(q) + b.dim(q)).collect();
    let mut diffs = Vec::new();
    for q in 0..n.saturating_sub(1) {
        let (da, db) = (a.differential(q).expect("grade below top"), b.differential(q).expect("grade below top"));
        diffs.push(Matrix::blocks(
            da,
            &Matrix::zeros(da.rows(), db.cols()),
            &Matrix::zeros(db.rows(), da.cols()),
            db,
        )?);
    }
    CochainComplex::new(labels, dims, diffs)
}

/// Assembles and validates the Mayer–Vietoris short exact sequence.
pub fn make_mv_ses(cover: &Cover) -> Result<ShortExactSequence> {
    let middle = direct_sum(&cover.u, &cover.v)?;
    let n = cover.m.len();
    let minus = Scalar::from_int(-1);
    let a = (0..n)
        .map(|q| cover.r_u.component(q).vstack(cover.r_v.component(q)))
        .collect::<Result<Vec<_>>>()?;
    let b = (0..n)
        .map(|q| cover.r_u_uv.component(q).hstack(&cover.r_v_uv.component(q).scale(&minus)))
        .collect::<Result<Vec<_>>>()?;
    let a = ChainMap::new(&cover.m, &middle, a)?;
    let b = ChainMap::new(&middle, &cover.uv, b)?;
    ShortExactSequence::new(cover.m.clone(), middle, cover.uv.clone(), a, b)
}

/// `∂̄` on spans of `z̄^k` (or `z̄^k dz̄`), one exponent per coordinate.
fn laurent_complex(name: &str, grade0: &[i64], grade1: &[i64]) -> Result<CochainComplex> {
    let mut d = Matrix::zeros(grade1.len(), grade0.len());
    for (j, &k) in grade0.iter().enumerate() {
        if k != 0 {
            let i = grade1.iter().position(|&e| e == k - 1).expect("derivative stays in the span");
            d.set(i, j, Scalar::from_int(k));
        }
    }
    CochainComplex::new(vec![format!("{name}^0"), format!("{name}^1")], vec![grade0.len(), grade1.len()], vec![d])
}

fn inclusion(from: &[i64], to: &[i64]) -> Matrix {
    let mut m = Matrix::zeros(to.len(), from.len());
    for (j, k) in from.iter().enumerate() {
        let i = to.iter().position(|e| e == k).expect("span inclusion");
        m.set(i, j, Scalar::one());
    }
    m
}

/// The Laurent cover on one leaf coordinate, truncated at order `d >= 1`:
///
/// * `U = span{z̄^j : 0 ≤ j ≤ d}`, `V = span{z̄^{−j} : 0 ≤ j ≤ d}`;
/// * `U∩V = span{z̄^j : |j| ≤ d}` in degree 0 and, in degree 1, the span of
///   `z̄^k dz̄` for `−d−1 ≤ k ≤ d−1`, `k ≠ −1` (no residue term);
/// * `M = U ∩ V`, the constants.
///
/// Restrictions are inclusions of spans and `∂̄` acts as `z̄^k ↦ k z̄^{k−1} dz̄`.
pub fn laurent_cover(d: u32) -> Result<Cover> {
    let d = d.max(1) as i64;
    let m0 = vec![0];
    let u0: Vec<i64> = (0..=d).collect();
    let u1: Vec<i64> = (0..d).collect();
    let v0: Vec<i64> = (-d..=0).collect();
    let v1: Vec<i64> = (-d - 1..=-2).collect();
    let uv0: Vec<i64> = (-d..=d).collect();
    let uv1: Vec<i64> = (-d - 1..d).filter(|&k| k != -1).collect();
    let m = laurent_complex("M", &m0, &[])?;
    let u = laurent_complex("U", &u0, &u1)?;
    let v = laurent_complex("V", &v0, &v1)?;
    let uv = laurent_complex("UV", &uv0, &uv1)?;
    let r_u = ChainMap::new(&m, &u, vec![inclusion(&m0, &u0), inclusion(&[], &u1)])?;
    let r_v = ChainMap::new(&m, &v, vec![inclusion(&m0, &v0), inclusion(&[], &v1)])?;
    let r_u_uv = ChainMap::new(&u, &uv, vec![inclusion(&u0, &uv0), inclusion(&u1, &uv1)])?;
    let r_v_uv = ChainMap::new(&v, &uv, vec![inclusion(&v0, &uv0), inclusion(&v1, &uv1)])?;
    Ok(Cover {
        m,
        u,
        v,
        uv,
        r_u,
        r_v,
        r_u_uv,
        r_v_uv,
    })
}

/// The Laurent cover with the residue form `z̄^{−1} dz̄` kept on the overlap.
/// No difference of forms from `U` and `V` reaches it, so `B` fails to be
/// onto in degree 1.
pub fn residue_cover(d: u32) -> Result<Cover> {
    let mut cover = laurent_cover(d)?;
    let d = d.max(1) as i64;
    let uv0: Vec<i64> = (-d..=d).collect();
    let uv1: Vec<i64> = (-d - 1..d).collect();
    let u1: Vec<i64> = (0..d).collect();
    let v1: Vec<i64> = (-d - 1..=-2).collect();
    let (u0, v0): (Vec<i64>, Vec<i64>) = ((0..=d).collect(), (-d..=0).collect());
    cover.uv = laurent_complex("UV", &uv0, &uv1)?;
    cover.r_u_uv = ChainMap::new(&cover.u, &cover.uv, vec![inclusion(&u0, &uv0), inclusion(&u1, &uv1)])?;
    cover.r_v_uv = ChainMap::new(&cover.v, &cover.uv, vec![inclusion(&v0, &uv0), inclusion(&v1, &uv1)])?;
    Ok(cover)
}

/// `U = V = M = U∩V` with identity restrictions. Here
/// `B(σ, τ) = σ − τ` is onto with kernel the diagonal, so the sequence is
/// exact.
pub fn identity_cover(model: &FoliationModel, p: usize, top: i64) -> Result<Cover> {
    let c = dolbeault_complex(OperatorTag::DbarF, model, p, top)?;
    let id = ChainMap::identity(&c);
    Ok(Cover {
        m: c.clone(),
        u: c.clone(),
        v: c.clone(),
        uv: c,
        r_u: id.clone(),
        r_v: id.clone(),
        r_u_uv: id.clone(),
        r_v_uv: id,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::sequences::{snake_les, SesCondition};

    #[test]
    fn laurent_cover_is_exact() {
        for d in 1..=3 {
            let ses = make_mv_ses(&laurent_cover(d).unwrap()).unwrap();
            let les = snake_les(&ses).unwrap();
            assert!(les.exact, "{}", les.to_json());
            let dims: Vec<usize> = les.nodes.iter().map(|n| n.dim).collect();
            assert_eq!(dims, vec![1, 2, 1, 0, 0, 0]);
        }
    }

    #[test]
    fn residue_cover_fails_surjectivity() {
        let err = make_mv_ses(&residue_cover(2).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Error::Ses {
                grade: 1,
                condition: SesCondition::ProjectNotSurjective
            }
        );
    }

    #[test]
    fn identity_cover_is_exact() {
        let model = FoliationModel::untwisted(1, 0, 2).unwrap();
        let les = snake_les(&make_mv_ses(&identity_cover(&model, 0, 2).unwrap()).unwrap()).unwrap();
        assert!(les.exact);
    }

    #[test]
    fn empty_overlap_splits() {
        let model = FoliationModel::untwisted(1, 0, 2).unwrap();
        let u = dolbeault_complex(OperatorTag::DbarF, &model, 0, 2).unwrap();
        let v = dolbeault_complex(OperatorTag::DbarF, &model, 0, 1).unwrap();
        let m = direct_sum(&u, &v).unwrap();
        let uv = CochainComplex::zero(2);
        let n = |c: &CochainComplex, q: usize| c.dim(q);
        let proj = |first: bool| -> Vec<Matrix> {
            (0..2)
                .map(|q| {
                    let (a, b) = (n(&u, q), n(&v, q));
                    if first {
                        Matrix::identity(a).hstack(&Matrix::zeros(a, b)).unwrap()
                    } else {
                        Matrix::zeros(b, a).hstack(&Matrix::identity(b)).unwrap()
                    }
                })
                .collect()
        };
        let cover = Cover {
            r_u: ChainMap::new(&m, &u, proj(true)).unwrap(),
            r_v: ChainMap::new(&m, &v, proj(false)).unwrap(),
            r_u_uv: ChainMap::zero(&u, &uv),
            r_v_uv: ChainMap::zero(&v, &uv),
            m,
            u,
            v,
            uv,
        };
        let les = snake_les(&make_mv_ses(&cover).unwrap()).unwrap();
        assert!(les.exact);
        assert!(les.nodes.iter().filter(|n| n.out_map.starts_with("inject")).all(|n| n.out_map_rank == n.dim));
    }
}
