//! Monomial bases of budget-bounded form spaces and coordinate maps.

use std::collections::HashMap;

use super::{FoliatedForm, FormKey, MultiIndex};
use crate::algebra::{binomial, Monomial, Scalar, Series, Vars};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BasisElement {
    pub a: MultiIndex,
    pub b: MultiIndex,
    pub mono: Monomial,
}

/// All `(A, B, monomial)` triples with monomial degree `<= budget`, ordered
/// by `(A, B)` lexicographically and then graded-lex on the monomial.
/// Empty when `p` or `q` exceeds `m`.
pub fn basis_enumerate(vars: Vars, p: usize, q: usize, budget: u32) -> Vec<BasisElement> {
    if p > vars.m || q > vars.m {
        return Vec::new();
    }
    let monos = Monomial::enumerate(&vars, budget);
    let mut out = Vec::with_capacity(binomial(vars.m, p) * binomial(vars.m, q) * monos.len());
    for a in MultiIndex::all(vars.m, p) {
        for b in MultiIndex::all(vars.m, q) {
            for mono in &monos {
                out.push(BasisElement {
                    a: a.clone(),
                    b: b.clone(),
                    mono: mono.clone(),
                });
            }
        }
    }
    out
}

/// An enumerated basis of `Ω^{p,q}` at a budget, with a reverse index. A
/// negative budget denotes the zero space (used for jet targets below degree 0).
#[derive(Clone, Debug)]
pub struct FormBasis {
    vars: Vars,
    p: usize,
    q: usize,
    budget: Option<u32>,
    elems: Vec<BasisElement>,
    index: HashMap<(FormKey, Monomial), usize>,
}

impl FormBasis {
    pub fn new(vars: Vars, p: usize, q: usize, budget: i64) -> Self {
        let budget = u32::try_from(budget).ok();
        let elems = budget
            .map(|b| basis_enumerate(vars, p, q, b))
            .unwrap_or_default();
        let index = elems
            .iter()
            .enumerate()
            .map(|(i, e)| (((e.a.clone(), e.b.clone()), e.mono.clone()), i))
            .collect();
        FormBasis {
            vars,
            p,
            q,
            budget,
            elems,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Budget of the space; `None` for the zero space of a negative budget.
    pub fn budget(&self) -> Option<u32> {
        self.budget
    }

    pub fn elements(&self) -> &[BasisElement] {
        &self.elems
    }

    /// The basis form at position `i` (coefficient 1).
    pub fn form(&self, i: usize) -> FoliatedForm {
        let e = &self.elems[i];
        let budget = self.budget.unwrap_or(0);
        let mut f = FoliatedForm::zero(self.vars, self.p, self.q, budget);
        f.add_coeff(
            (e.a.clone(), e.b.clone()),
            &Series::monomial(self.vars, e.mono.clone(), Scalar::one(), budget),
        );
        f
    }

    /// Sparse coordinates of `form` truncated to this space's budget. Errors
    /// if the form has a different bidegree or layout.
    pub fn coords(&self, form: &FoliatedForm) -> Result<Vec<(usize, Scalar)>> {
        self.vars.check_same(&form.vars())?;
        if form.bidegree() != (self.p, self.q) {
            return Err(Error::BidegreeMismatch(format!(
                "form of bidegree {:?} in basis of {:?}",
                form.bidegree(),
                (self.p, self.q)
            )));
        }
        let Some(budget) = self.budget else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for (key, series) in form.coeffs() {
            for (mono, c) in series.terms() {
                if mono.degree() > budget {
                    continue;
                }
                let i = self.index[&(key.clone(), mono.clone())];
                out.push((i, c.clone()));
            }
        }
        out.sort_by_key(|(i, _)| *i);
        Ok(out)
    }

    /// Inverse of [`FormBasis::coords`].
    pub fn form_from_coords(&self, coords: &[(usize, Scalar)]) -> FoliatedForm {
        let budget = self.budget.unwrap_or(0);
        let mut f = FoliatedForm::zero(self.vars, self.p, self.q, budget);
        for (i, c) in coords {
            let e = &self.elems[*i];
            f.add_coeff(
                (e.a.clone(), e.b.clone()),
                &Series::monomial(self.vars, e.mono.clone(), c.clone(), budget),
            );
        }
        f
    }
}
