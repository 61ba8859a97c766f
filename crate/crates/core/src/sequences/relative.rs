//! The mapping cone of a foliated morphism on jets.
//!
//! Grade `q` is `Ω^{p,q}(F′) ⊕ Ω^{p,q−1}(F)`. Both factors keep the jet
//! order of their own form degree `j`, namely `D + Q − j` with
//! `Q = max(m′, m+1) + 1` the top grade, so the target part of grade `q` is
//! truncated at `b_q = D + Q − q` and the source part at `b_q + 1`. Every
//! differential lowers the jet order by one, and the morphism must fix the
//! origin so that pullback respects jet order.

use serde::Serialize;

use super::{class_representatives, snake_les, ChainMap, LongExactSequenceReport, ShortExactSequence};
use crate::algebra::Series;
use crate::cohomology::{operator_matrix, CochainComplex, OperatorTag};
use crate::error::{Error, Result};
use crate::forms::{FoliationModel, FormBasis};
use crate::linalg::{axpy, Matrix};
use crate::operators::{pullback_to, FoliatedMorphism};

/// The relative complex with its defining short exact sequence
/// `0 → Ω̃(F) → Ω(μ) → Ω(F′) → 0`.
#[derive(Clone, Debug)]
pub struct RelativeComplex {
    pub p: usize,
    pub budgets: Vec<i64>,
    pub source_m: usize,
    pub target_m: usize,
    /// Pullback at grade `q`: `Ω^{p,q}(F′)_{b_q} → Ω^{p,q}(F)_{b_q}`.
    pub pullbacks: Vec<Matrix>,
    pub ses: ShortExactSequence,
}

impl RelativeComplex {
    pub fn top_grade(&self) -> usize {
        self.budgets.len() - 1
    }

    pub fn complex(&self) -> &CochainComplex {
        &self.ses.middle
    }
}

fn basis(vars: crate::algebra::Vars, p: usize, q: i64, budget: i64) -> FormBasis {
    if q < 0 {
        FormBasis::new(vars, p, 0, -1)
    } else {
        FormBasis::new(vars, p, q as usize, budget)
    }
}

fn pullback_matrix(mu: &FoliatedMorphism, from: &FormBasis, to: &FormBasis) -> Result<Matrix> {
    let mut m = Matrix::zeros(to.len(), from.len());
    let Some(budget) = to.budget() else {
        return Ok(m);
    };
    for j in 0..from.len() {
        for (i, c) in to.coords(&pullback_to(mu, &from.form(j), budget)?)? {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

fn dbar_matrix(model: &FoliationModel, p: usize, q: i64, from: i64, to: i64) -> Result<Matrix> {
    if q < 0 {
        let rows = basis(model.vars(), p, q + 1, to).len();
        return Ok(Matrix::zeros(rows, 0));
    }
    operator_matrix(OperatorTag::DbarF, model, p, q as usize, from, to)
}

/// Builds `Ω^{p,•}(μ)` for `μ: F → F′` and twist `f′` on the target.
pub fn make_relative_complex(mu: &FoliatedMorphism, f_prime: &Series, p: usize, d: u32) -> Result<RelativeComplex> {
    if !mu.preserves_base_point() {
        return Err(Error::InvalidMorphism(
            "jet complexes need a morphism fixing the origin".into(),
        ));
    }
    let (src, tgt) = (mu.source(), mu.target());
    let target_model = FoliationModel::new(tgt, d, f_prime.clone())?;
    let source_model = FoliationModel::new(src, d, mu.pullback_series_exact(f_prime)?)?;
    let (m, mp) = (src.m, tgt.m);
    let top = mp.max(m + 1) + 1;
    let budgets: Vec<i64> = (0..=top).map(|q| d as i64 + top as i64 - q as i64).collect();
    let t_basis: Vec<FormBasis> = (0..=top).map(|q| basis(tgt, p, q as i64, budgets[q])).collect();
    let s_basis: Vec<FormBasis> = (0..=top).map(|q| basis(src, p, q as i64 - 1, budgets[q] + 1)).collect();
    let label = |q: usize| format!("Omega^{{{p},{q}}}");

    let mut right_d = Vec::new();
    let mut left_d = Vec::new();
    let mut mid_d = Vec::new();
    let mut pullbacks = Vec::new();
    for q in 0..top {
        let (b, b1) = (budgets[q], budgets[q + 1]);
        let dt = dbar_matrix(&target_model, p, q as i64, b, b1)?;
        let ds = dbar_matrix(&source_model, p, q as i64 - 1, b + 1, b1 + 1)?.scale(&crate::algebra::Scalar::from_int(-1));
        let pb = pullback_matrix(mu, &t_basis[q], &s_basis[q + 1])?;
        let zero = Matrix::zeros(t_basis[q + 1].len(), s_basis[q].len());
        mid_d.push(Matrix::blocks(&dt, &zero, &pb, &ds)?);
        right_d.push(dt);
        left_d.push(ds);
        pullbacks.push(pb);
    }
    let t_dims: Vec<usize> = t_basis.iter().map(FormBasis::len).collect();
    let s_dims: Vec<usize> = s_basis.iter().map(FormBasis::len).collect();
    let right = CochainComplex::new((0..=top).map(|q| format!("{} on F'", label(q))).collect(), t_dims.clone(), right_d)?;
    let left = CochainComplex::new(
        (0..=top).map(|q| format!("Omega^{{{p},{}}} on F", q as i64 - 1)).collect(),
        s_dims.clone(),
        left_d,
    )?;
    let middle = CochainComplex::new(
        (0..=top).map(|q| format!("{}(mu)", label(q))).collect(),
        (0..=top).map(|q| t_dims[q] + s_dims[q]).collect(),
        mid_d,
    )?;
    let inject = (0..=top)
        .map(|q| Matrix::zeros(t_dims[q], s_dims[q]).vstack(&Matrix::identity(s_dims[q])))
        .collect::<Result<Vec<_>>>()?;
    let project = (0..=top)
        .map(|q| Matrix::identity(t_dims[q]).hstack(&Matrix::zeros(t_dims[q], s_dims[q])))
        .collect::<Result<Vec<_>>>()?;
    let inject = ChainMap::new(&left, &middle, inject)?;
    let project = ChainMap::new(&middle, &right, project)?;
    let ses = ShortExactSequence::new(left, middle, right, inject, project)?;
    Ok(RelativeComplex {
        p,
        budgets,
        source_m: m,
        target_m: mp,
        pullbacks,
        ses,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaVerdict {
    pub grade: usize,
    pub class: usize,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub classes: Vec<DeltaVerdict>,
    pub passed: bool,
}

/// Compares the connecting class `δ[φ]` with `[μ*φ]` for a basis of every
/// `H^{p,q}_{f′}(F′)`.
pub fn delta_equals_pullback_check(rel: &RelativeComplex) -> Result<DeltaReport> {
    let ses = &rel.ses;
    let mut classes = Vec::new();
    for q in 0..rel.top_grade() {
        let reps = class_representatives(&ses.right.cycles(q), &ses.right.boundaries(q));
        let images = ses.connecting(q, &reps)?;
        let boundaries = ses.left.boundaries(q + 1);
        for (class, (z, delta)) in reps.iter().zip(images).enumerate() {
            let mut diff = rel.pullbacks[q].mul_vec(z);
            axpy(&mut diff, &crate::algebra::Scalar::from_int(-1), &delta);
            classes.push(DeltaVerdict {
                grade: q,
                class,
                equal: boundaries.contains(&diff),
            });
        }
    }
    let passed = classes.iter().all(|c| c.equal);
    Ok(DeltaReport { classes, passed })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryItem {
    pub item: String,
    pub statement: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub m: usize,
    pub m_prime: usize,
    pub top_grade: usize,
    pub items: Vec<CorollaryItem>,
    pub passed: bool,
}

/// Checks the five boundary statements of the relative sequence as rank and
/// dimension identities on `les`, the sequence of `rel`.
pub fn corollary28_report(rel: &RelativeComplex, les: &LongExactSequenceReport) -> CorollaryReport {
    let (m, mp, top) = (rel.source_m, rel.target_m, rel.top_grade());
    // node(q, 0) = H^{q-1}(F) --alpha*--> node(q, 1) = H^q(mu) --beta*--> node(q, 2) = H^q(F')
    let alpha = |q: usize| les.node(q, 0).out_map_rank;
    let beta = |q: usize| les.node(q, 1).out_map_rank;
    let h_src = |q: usize| les.node(q, 0).dim;
    let h_mu = |q: usize| les.node(q, 1).dim;
    let h_tgt = |q: usize| les.node(q, 2).dim;
    let mut items = Vec::new();
    let mut push = |item: &str, statement: String, checks: Vec<(bool, String)>| {
        items.push(CorollaryItem {
            item: item.into(),
            statement,
            passed: checks.iter().all(|(ok, _)| *ok),
            witnesses: checks.into_iter().map(|(_, w)| w).collect(),
        });
    };

    let q = m + 1;
    push(
        "i",
        format!("beta*: H^{{p,{q}}}(mu) -> H^{{p,{q}}}(F') is onto"),
        if q <= top {
            vec![(beta(q) == h_tgt(q), format!("q={q}: rank {} of target dim {}", beta(q), h_tgt(q)))]
        } else {
            Vec::new()
        },
    );
    let q = mp + 1;
    push(
        "ii",
        format!("alpha*: H^{{p,{mp}}}(F) -> H^{{p,{q}}}(mu) is onto"),
        if q <= top {
            vec![(alpha(q) == h_mu(q), format!("q={q}: rank {} of target dim {}", alpha(q), h_mu(q)))]
        } else {
            Vec::new()
        },
    );
    push(
        "iii",
        format!("beta*: H^{{p,q}}(mu) -> H^{{p,q}}(F') is an isomorphism for q > {}", m + 1),
        (m + 2..=top)
            .map(|q| {
                let ok = beta(q) == h_mu(q) && beta(q) == h_tgt(q);
                (ok, format!("q={q}: rank {}, dims {}/{}", beta(q), h_mu(q), h_tgt(q)))
            })
            .collect(),
    );
    push(
        "iv",
        format!("alpha*: H^{{p,q}}(F) -> H^{{p,q+1}}(mu) is an isomorphism for q > {mp}"),
        (mp + 1..top)
            .map(|q| {
                let ok = alpha(q + 1) == h_src(q + 1) && alpha(q + 1) == h_mu(q + 1);
                (
                    ok,
                    format!("q={q}: rank {}, dims {}/{}", alpha(q + 1), h_src(q + 1), h_mu(q + 1)),
                )
            })
            .collect(),
    );
    let bound = (m + 1).max(mp);
    push(
        "v",
        format!("H^{{p,q}}(mu) = 0 for q > {bound}"),
        (bound + 1..=top)
            .map(|q| (h_mu(q) == 0, format!("q={q}: dim {}", h_mu(q))))
            .collect(),
    );
    let passed = items.iter().all(|i| i.passed);
    CorollaryReport {
        m,
        m_prime: mp,
        top_grade: top,
        items,
        passed,
    }
}

/// Convenience: the relative complex, its sequence and both reports.
pub fn relative_reports(
    mu: &FoliatedMorphism,
    f_prime: &Series,
    p: usize,
    d: u32,
) -> Result<(RelativeComplex, LongExactSequenceReport, DeltaReport, CorollaryReport)> {
    let rel = make_relative_complex(mu, f_prime, p, d)?;
    let les = snake_les(&rel.ses)?;
    let delta = delta_equals_pullback_check(&rel)?;
    let cor = corollary28_report(&rel, &les);
    Ok((rel, les, delta, cor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_series, Vars};

    fn v1() -> Vars {
        Vars::new(1, 0)
    }

    fn s(t: &str) -> Series {
        parse_series(t, v1(), 4).unwrap()
    }

    fn dims(c: &CochainComplex) -> Vec<usize> {
        c.betti().unwrap()
    }

    #[test]
    fn identity_cone_is_acyclic() {
        let id = FoliatedMorphism::identity(v1(), 4);
        let (rel, les, delta, cor) = relative_reports(&id, &s("1"), 0, 2).unwrap();
        assert!(dims(rel.complex()).iter().all(|&d| d == 0));
        assert!(les.exact && delta.passed && cor.passed, "{}", les.to_json());
    }

    #[test]
    fn square_map_dims() {
        let mu = FoliatedMorphism::new(v1(), v1(), vec![s("z1^2")], vec![]).unwrap();
        let rel = make_relative_complex(&mu, &s("1"), 0, 2).unwrap();
        assert_eq!(rel.budgets, vec![5, 4, 3, 2]);
        assert_eq!(dims(rel.complex()), vec![3, 3, 0, 0]);
        assert_eq!(dims(&rel.ses.left), vec![0, 6, 0, 0]);
        assert_eq!(dims(&rel.ses.right), vec![6, 0, 0, 0]);
    }

    #[test]
    fn moving_base_point_is_rejected() {
        let mu = FoliatedMorphism::new(v1(), v1(), vec![s("1 + z1")], vec![]).unwrap();
        assert!(matches!(make_relative_complex(&mu, &s("1"), 0, 2), Err(Error::InvalidMorphism(_))));
    }
}
