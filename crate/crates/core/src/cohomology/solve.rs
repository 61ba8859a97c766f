//! Exact preimage search for closed forms.

use std::collections::BTreeMap;

use super::OperatorTag;
use crate::algebra::{Monomial, Scalar, Series};
use crate::error::{Error, Result};
use crate::forms::{FoliatedForm, FoliationModel, FormBasis, FormKey};
use crate::linalg::{Matrix, SparseVec};
use crate::operators::{dbar_twisted, tilde_dbar, FoliatedMorphism};

/// Row index assigned on first sight, so only monomials that actually occur
/// in some image or in the target become equations.
#[derive(Default)]
struct Rows {
    index: BTreeMap<(u8, FormKey, Monomial), usize>,
}

impl Rows {
    fn vectorize(&mut self, parts: &[(u8, &FoliatedForm)]) -> SparseVec {
        let mut v = SparseVec::new();
        for &(tag, form) in parts {
            for (key, series) in form.coeffs() {
                for (mono, c) in series.terms() {
                    let next = self.index.len();
                    let i = *self
                        .index
                        .entry((tag, key.clone(), mono.clone()))
                        .or_insert(next);
                    v.insert(i, c.clone());
                }
            }
        }
        v
    }

    fn len(&self) -> usize {
        self.index.len()
    }
}

fn search_budget(forms: &[&FoliatedForm], slack: u32) -> u32 {
    forms.iter().filter_map(|f| f.max_degree()).max().unwrap_or(0) + slack
}

/// Outcome of a primitive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Primitive {
    /// A preimage whose image reproduces the target exactly.
    Found(FoliatedForm),
    /// No preimage among forms of degree `<= budget`; not a disproof.
    NoneWithinSlack { budget: u32 },
}

/// Searches `η` with `op(η) = target` among forms of degree at most
/// `deg target + slack`. The target must be closed under `op`.
pub fn solve_primitive(tag: OperatorTag, model: &FoliationModel, target: &FoliatedForm, slack: u32) -> Result<Primitive> {
    let f = model.f();
    let (p, q) = target.bidegree();
    let (dp, dq) = tag.shift();
    if p < dp || q < dq {
        return Err(Error::BidegreeMismatch(format!(
            "({p},{q}) has no source bidegree under {}",
            tag.name()
        )));
    }
    let residual = tag.apply(target, f)?;
    if !residual.is_zero() {
        return Err(Error::NotClosed(residual.to_string()));
    }
    let budget = search_budget(&[target], slack);
    if target.is_zero() {
        return Ok(Primitive::Found(FoliatedForm::zero(model.vars(), p - dp, q - dq, budget)));
    }
    let basis = FormBasis::new(model.vars(), p - dp, q - dq, budget as i64);
    let mut rows = Rows::default();
    let mut cols = Vec::with_capacity(basis.len());
    for j in 0..basis.len() {
        let image = tag.apply(&basis.form(j), f)?;
        cols.push(rows.vectorize(&[(0, &image)]));
    }
    let b = rows.vectorize(&[(0, target)]);
    let m = Matrix::from_columns(rows.len(), &cols);
    let Some(x) = m.solve(&b)? else {
        return Ok(Primitive::NoneWithinSlack { budget });
    };
    let coords: Vec<(usize, Scalar)> = x.into_iter().collect();
    let eta = basis.form_from_coords(&coords);
    if !tag.apply(&eta, f)?.same_terms(target) {
        return Err(Error::ZigZag("primitive failed certification".into()));
    }
    Ok(Primitive::Found(eta))
}

/// Outcome of a primitive search for the mapping-cone operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TildePrimitive {
    Found {
        phi: FoliatedForm,
        psi: Option<FoliatedForm>,
    },
    NoneWithinSlack {
        budget: u32,
    },
}

/// Searches `(φ₁, ψ₁)` with `tilde(φ₁, ψ₁) = (φ, ψ)` for a closed pair of
/// grade `q >= 1`: `φ` of bidegree `(p,q)` on the target, `ψ` of `(p,q−1)`
/// on the source.
pub fn solve_tilde_primitive(
    mu: &FoliatedMorphism,
    f_prime: &Series,
    phi: &FoliatedForm,
    psi: &FoliatedForm,
    slack: u32,
) -> Result<TildePrimitive> {
    if phi.q() == 0 {
        return Err(Error::BidegreeMismatch("grade 0 has no grade below it".into()));
    }
    let (a, b) = tilde_dbar(phi, Some(psi), mu, f_prime)?;
    if !a.is_zero() || !b.is_zero() {
        return Err(Error::NotClosed(format!("({a}, {b})")));
    }
    let (p, q) = phi.bidegree();
    let budget = search_budget(&[phi, psi], slack);
    let left = FormBasis::new(mu.target(), p, q - 1, budget as i64);
    let right = if q >= 2 {
        Some(FormBasis::new(mu.source(), p, q - 2, budget as i64))
    } else {
        None
    };
    let pf = mu.pullback_series_exact(f_prime)?;
    let mut rows = Rows::default();
    let mut cols = Vec::new();
    let zero_psi = right.as_ref().map(|_| FoliatedForm::zero(mu.source(), p, q - 2, 0));
    for j in 0..left.len() {
        let (x, y) = tilde_dbar(&left.form(j), zero_psi.as_ref(), mu, f_prime)?;
        cols.push(rows.vectorize(&[(0, &x), (1, &y)]));
    }
    if let Some(right) = &right {
        for j in 0..right.len() {
            let y = -&dbar_twisted(&right.form(j), &pf)?;
            cols.push(rows.vectorize(&[(1, &y)]));
        }
    }
    let target = rows.vectorize(&[(0, phi), (1, psi)]);
    let m = Matrix::from_columns(rows.len(), &cols);
    let Some(x) = m.solve(&target)? else {
        return Ok(TildePrimitive::NoneWithinSlack { budget });
    };
    let (mut cl, mut cr) = (Vec::new(), Vec::new());
    for (i, c) in x {
        if i < left.len() {
            cl.push((i, c));
        } else {
            cr.push((i - left.len(), c));
        }
    }
    let phi1 = left.form_from_coords(&cl);
    let psi1 = right.as_ref().map(|r| r.form_from_coords(&cr));
    let (x1, y1) = tilde_dbar(&phi1, psi1.as_ref(), mu, f_prime)?;
    if !x1.same_terms(phi) || !y1.same_terms(psi) {
        return Err(Error::ZigZag("tilde primitive failed certification".into()));
    }
    Ok(TildePrimitive::Found { phi: phi1, psi: psi1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{parse_series, Vars};

    fn v1() -> Vars {
        Vars::new(1, 0)
    }

    #[test]
    fn integrates_dbar() {
        let model = FoliationModel::untwisted(1, 0, 3).unwrap();
        let target = FoliatedForm::term(v1(), &[], &[1], parse_series("zb1", v1(), 3).unwrap()).unwrap();
        let Primitive::Found(eta) = solve_primitive(OperatorTag::Dbar, &model, &target, 1).unwrap() else {
            panic!("expected a primitive");
        };
        let expect = FoliatedForm::function(parse_series("1/2*zb1^2", v1(), 3).unwrap());
        assert!(eta.same_terms(&expect));
        assert_eq!(
            solve_primitive(OperatorTag::Dbar, &model, &target, 0).unwrap(),
            Primitive::NoneWithinSlack { budget: 1 }
        );
    }

    #[test]
    fn zero_and_non_closed_targets() {
        let model = FoliationModel::parse(1, 0, 3, "1 + z1").unwrap();
        let zero = FoliatedForm::zero(v1(), 0, 1, 2);
        assert!(matches!(solve_primitive(OperatorTag::DbarF, &model, &zero, 0).unwrap(), Primitive::Found(e) if e.is_zero()));
        let g = FoliatedForm::function(parse_series("zb1", v1(), 2).unwrap());
        assert!(matches!(solve_primitive(OperatorTag::DbarF, &model, &g, 0), Err(Error::BidegreeMismatch(_))));
        let model2 = FoliationModel::parse(2, 0, 3, "1").unwrap();
        let v2 = model2.vars();
        let t = FoliatedForm::term(v2, &[], &[1], parse_series("zb2", v2, 2).unwrap()).unwrap();
        assert!(matches!(solve_primitive(OperatorTag::Dbar, &model2, &t, 1), Err(Error::NotClosed(_))));
    }

    #[test]
    fn tilde_round_trip() {
        let mu = FoliatedMorphism::new(v1(), v1(), vec![parse_series("z1^2", v1(), 2).unwrap()], vec![]).unwrap();
        let fp = parse_series("z1", v1(), 1).unwrap();
        let phi1 = FoliatedForm::function(parse_series("z1*zb1 + zb1^2", v1(), 2).unwrap());
        let (phi, psi) = tilde_dbar(&phi1, None, &mu, &fp).unwrap();
        match solve_tilde_primitive(&mu, &fp, &phi, &psi, 2).unwrap() {
            TildePrimitive::Found { phi: a, psi: b } => {
                assert!(b.is_none());
                let (x, y) = tilde_dbar(&a, None, &mu, &fp).unwrap();
                assert!(x.same_terms(&phi) && y.same_terms(&psi));
            }
            other => panic!("no primitive: {other:?}"),
        }
    }
}
