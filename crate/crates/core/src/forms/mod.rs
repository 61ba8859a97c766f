//! Foliated `(p,q)`-forms `Σ φ_{AB} dz^A ∧ dz̄^B` with series coefficients.
//!
//! Only strictly increasing index tuples are stored. Generator words are
//! ordered `dz^{a_1} ∧ … ∧ dz^{a_p} ∧ dz̄^{b_1} ∧ … ∧ dz̄^{b_q}`; any other order
//! is normalized with the sign of the sorting permutation.

mod basis;
mod model;

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::algebra::{Scalar, Series, VarKind, Vars};
use crate::error::{Error, Result};

pub use basis::{basis_enumerate, BasisElement, FormBasis};
pub use model::{twist_growth, FoliationModel};

/// Strictly increasing tuple of 1-based leaf indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    /// Validates a strictly increasing tuple with entries in `1..=m`.
    pub fn new(entries: Vec<usize>, m: usize) -> Result<Self> {
        if entries.iter().any(|&e| e == 0 || e > m) || !entries.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::BidegreeMismatch(format!(
                "multi-index {entries:?} is not strictly increasing within 1..={m}"
            )));
        }
        Ok(MultiIndex(entries))
    }

    /// Sorts an arbitrary tuple, returning the permutation sign, or `None`
    /// when an index repeats (the wedge vanishes).
    pub fn normalize(raw: &[usize]) -> Option<(i64, MultiIndex)> {
        let mut v = raw.to_vec();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] > v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                } else if v[j] == v[j + 1] {
                    return None;
                }
            }
        }
        if v.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, MultiIndex(v)))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All increasing tuples of length `k` from `1..=m`, lexicographically.
    pub fn all(m: usize, k: usize) -> Vec<MultiIndex> {
        (1..=m).combinations(k).map(MultiIndex).collect()
    }

    /// Sign and result of `self ∧ other` for same-kind generators.
    pub fn merge(&self, other: &MultiIndex) -> Option<(i64, MultiIndex)> {
        let mut inversions = 0usize;
        for a in &self.0 {
            for b in &other.0 {
                match a.cmp(b) {
                    std::cmp::Ordering::Equal => return None,
                    std::cmp::Ordering::Greater => inversions += 1,
                    std::cmp::Ordering::Less => {}
                }
            }
        }
        let merged: Vec<usize> = self.0.iter().chain(other.0.iter()).copied().sorted().collect();
        Some((if inversions.is_multiple_of(2) { 1 } else { -1 }, MultiIndex(merged)))
    }

    /// `e ∧ self` for one generator `e`: sign `(-1)^{#entries < e}`.
    pub fn prepend(&self, e: usize) -> Option<(i64, MultiIndex)> {
        MultiIndex(vec![e]).merge(self)
    }
}

pub type FormKey = (MultiIndex, MultiIndex);

/// A foliated form of a single bidegree. Bidegrees beyond `m` are allowed
/// and always hold the zero form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliatedForm {
    vars: Vars,
    p: usize,
    q: usize,
    budget: u32,
    coeffs: BTreeMap<FormKey, Series>,
}

impl FoliatedForm {
    pub fn zero(vars: Vars, p: usize, q: usize, budget: u32) -> Self {
        FoliatedForm {
            vars,
            p,
            q,
            budget,
            coeffs: BTreeMap::new(),
        }
    }

    /// A `(0,0)`-form.
    pub fn function(s: Series) -> Self {
        let mut f = FoliatedForm::zero(s.vars(), 0, 0, s.budget());
        if !s.is_zero() {
            f.coeffs.insert((MultiIndex::empty(), MultiIndex::empty()), s);
        }
        f
    }

    /// `coeff · dz^A ∧ dz̄^B` for arbitrary (not necessarily sorted) tuples.
    pub fn term(vars: Vars, a: &[usize], b: &[usize], coeff: Series) -> Result<Self> {
        vars.check_same(&coeff.vars())?;
        let budget = coeff.budget();
        for &i in a.iter().chain(b) {
            if i == 0 || i > vars.m {
                return Err(Error::IndexOutOfRange {
                    kind: "leaf index",
                    index: i,
                    len: vars.m,
                });
            }
        }
        let mut f = FoliatedForm::zero(vars, a.len(), b.len(), budget);
        if let (Some((sa, ia)), Some((sb, ib))) = (MultiIndex::normalize(a), MultiIndex::normalize(b)) {
            f.add_coeff((ia, ib), &coeff.scale(&Scalar::from_int(sa * sb)));
        }
        Ok(f)
    }

    /// The generator `dz^a` or `dz̄^a` with coefficient 1.
    pub fn generator(vars: Vars, kind: VarKind, a: usize, budget: u32) -> Result<Self> {
        let one = Series::one(vars, budget);
        match kind {
            VarKind::Z => FoliatedForm::term(vars, &[a], &[], one),
            VarKind::Zbar => FoliatedForm::term(vars, &[], &[a], one),
            VarKind::X => Err(Error::BidegreeMismatch(
                "transverse differentials are not foliated forms".into(),
            )),
        }
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn bidegree(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Total degree `p + q`.
    pub fn degree(&self) -> usize {
        self.p + self.q
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn coeffs(&self) -> &BTreeMap<FormKey, Series> {
        &self.coeffs
    }

    pub fn coeff(&self, a: &MultiIndex, b: &MultiIndex) -> Series {
        self.coeffs
            .get(&(a.clone(), b.clone()))
            .cloned()
            .unwrap_or_else(|| Series::zero(self.vars, self.budget))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest monomial degree among the coefficients.
    pub fn max_degree(&self) -> Option<u32> {
        self.coeffs.values().filter_map(Series::degree).max()
    }

    /// Accumulates `s` into the coefficient at `key`, dropping the entry if
    /// it cancels. Keys must already be normalized.
    pub(crate) fn add_coeff(&mut self, key: FormKey, s: &Series) {
        if s.is_zero() || self.p > self.vars.m || self.q > self.vars.m {
            return;
        }
        debug_assert_eq!(key.0.len(), self.p);
        debug_assert_eq!(key.1.len(), self.q);
        let budget = self.budget;
        match self.coeffs.get_mut(&key) {
            Some(c) => {
                *c = (&*c + s).truncate(budget);
                if c.is_zero() {
                    self.coeffs.remove(&key);
                }
            }
            None => {
                let t = s.truncate(budget);
                if !t.is_zero() {
                    self.coeffs.insert(key, t);
                }
            }
        }
    }

    pub fn truncate(&self, budget: u32) -> FoliatedForm {
        let mut out = FoliatedForm::zero(self.vars, self.p, self.q, budget);
        for (k, c) in &self.coeffs {
            out.add_coeff(k.clone(), c);
        }
        out
    }

    /// Same terms under a different budget cap (truncating if lower).
    pub fn with_budget(&self, budget: u32) -> FoliatedForm {
        if budget < self.budget {
            return self.truncate(budget);
        }
        FoliatedForm {
            vars: self.vars,
            p: self.p,
            q: self.q,
            budget,
            coeffs: self
                .coeffs
                .iter()
                .map(|(k, c)| (k.clone(), c.with_budget(budget)))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> FoliatedForm {
        let mut out = FoliatedForm::zero(self.vars, self.p, self.q, self.budget);
        for (k, s) in &self.coeffs {
            out.add_coeff(k.clone(), &s.scale(c));
        }
        out
    }

    /// Multiplies every coefficient by the function `g`, truncating at `out_budget`.
    pub fn mul_function(&self, g: &Series, out_budget: u32) -> Result<FoliatedForm> {
        let mut out = FoliatedForm::zero(self.vars, self.p, self.q, out_budget);
        for (k, s) in &self.coeffs {
            out.add_coeff(k.clone(), &g.mul(s, out_budget)?);
        }
        Ok(out)
    }

    /// Checked sum; bidegrees and layouts must agree.
    pub fn try_add(&self, other: &FoliatedForm) -> Result<FoliatedForm> {
        self.vars.check_same(&other.vars)?;
        if self.bidegree() != other.bidegree() {
            return Err(Error::BidegreeMismatch(format!(
                "cannot add {:?} and {:?} forms",
                self.bidegree(),
                other.bidegree()
            )));
        }
        let mut out = self.with_budget(self.budget.max(other.budget));
        for (k, c) in &other.coeffs {
            out.add_coeff(k.clone(), c);
        }
        Ok(out)
    }

    /// Splits off the part whose coefficients have degree `<= budget` and
    /// compares it with the same part of `other`.
    pub fn eq_up_to(&self, other: &FoliatedForm, budget: u32) -> bool {
        self.bidegree() == other.bidegree()
            && self.vars == other.vars
            && self.truncate(budget).coeffs == other.truncate(budget).coeffs
    }

    /// Term-wise equality that ignores the budget caps.
    pub fn same_terms(&self, other: &FoliatedForm) -> bool {
        self.vars == other.vars
            && self.bidegree() == other.bidegree()
            && self.coeffs.len() == other.coeffs.len()
            && self
                .coeffs
                .iter()
                .zip(other.coeffs.iter())
                .all(|((ka, ca), (kb, cb))| ka == kb && ca.terms() == cb.terms())
    }
}

impl std::ops::Add<&FoliatedForm> for &FoliatedForm {
    type Output = FoliatedForm;
    /// Panics on bidegree mismatch; use [`FoliatedForm::try_add`] for a checked sum.
    fn add(self, rhs: &FoliatedForm) -> FoliatedForm {
        self.try_add(rhs).expect("form addition")
    }
}

impl std::ops::Sub<&FoliatedForm> for &FoliatedForm {
    type Output = FoliatedForm;
    fn sub(self, rhs: &FoliatedForm) -> FoliatedForm {
        self.try_add(&rhs.scale(&Scalar::from_int(-1)))
            .expect("form subtraction")
    }
}

impl std::ops::Neg for &FoliatedForm {
    type Output = FoliatedForm;
    fn neg(self) -> FoliatedForm {
        self.scale(&Scalar::from_int(-1))
    }
}

/// Exterior product truncated at `out_budget`.
pub fn wedge(a: &FoliatedForm, b: &FoliatedForm, out_budget: u32) -> Result<FoliatedForm> {
    a.vars.check_same(&b.vars)?;
    let mut out = FoliatedForm::zero(a.vars, a.p + b.p, a.q + b.q, out_budget);
    for ((a1, b1), ca) in &a.coeffs {
        for ((a2, b2), cb) in &b.coeffs {
            let Some((sa, ia)) = a1.merge(a2) else { continue };
            let Some((sb, ib)) = b1.merge(b2) else { continue };
            // moving dz^{A2} left past dz̄^{B1}
            let cross = if (b1.len() * a2.len()) % 2 == 0 { 1 } else { -1 };
            let c = ca.mul(cb, out_budget)?;
            out.add_coeff((ia, ib), &c.scale(&Scalar::from_int(sa * sb * cross)));
        }
    }
    Ok(out)
}

/// Wedge with every term kept.
pub fn wedge_exact(a: &FoliatedForm, b: &FoliatedForm) -> Result<FoliatedForm> {
    wedge(a, b, a.budget + b.budget)
}

/// `φ / h^{p+q}` truncated at the form's budget. `h` must be a unit.
pub fn rescale_power(phi: &FoliatedForm, h: &Series) -> Result<FoliatedForm> {
    phi.vars.check_same(&h.vars())?;
    let budget = phi.budget;
    let inv = h.invert_to(budget)?;
    let r = phi.degree() as u32;
    if r == 0 {
        return Ok(phi.clone());
    }
    let factor = inv.pow(r, budget)?;
    phi.mul_function(&factor, budget)
}

impl fmt::Display for FoliatedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let gens: Vec<String> = a
                .0
                .iter()
                .map(|i| format!("dz{i}"))
                .chain(b.0.iter().map(|i| format!("dzb{i}")))
                .collect();
            if gens.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) {}", gens.join("^"))?;
            }
        }
        Ok(())
    }
}
