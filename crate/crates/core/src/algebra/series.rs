//! Truncated multivariate power series in `z₁..z_m, z̄₁..z̄_m, x₁..x_n`.
//!
//! A [`Series`] stores only nonzero coefficients, keyed by exponent vectors
//! laid out as `(α | β | γ)`: holomorphic exponents, antiholomorphic
//! exponents, transverse exponents. Every stored monomial has total degree at
//! most the series' `budget`. Products take an explicit output budget and
//! discard everything above it.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Scalar;
use crate::error::{Error, Result};

/// Variable layout: `m` leafwise complex coordinates and `n` transverse real ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vars {
    pub m: usize,
    pub n: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Z,
    Zbar,
    X,
}

impl VarKind {
    pub fn name(self) -> &'static str {
        match self {
            VarKind::Z => "z",
            VarKind::Zbar => "zb",
            VarKind::X => "x",
        }
    }
}

impl Vars {
    pub fn new(m: usize, n: usize) -> Self {
        Vars { m, n }
    }

    /// Total number of real-coordinate slots, `2m + n`.
    pub fn len(&self) -> usize {
        2 * self.m + self.n
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Slot of a 1-based variable index.
    pub fn slot(&self, kind: VarKind, index: usize) -> Result<usize> {
        let len = match kind {
            VarKind::Z | VarKind::Zbar => self.m,
            VarKind::X => self.n,
        };
        if index == 0 || index > len {
            return Err(Error::IndexOutOfRange {
                kind: kind.name(),
                index,
                len,
            });
        }
        Ok(match kind {
            VarKind::Z => index - 1,
            VarKind::Zbar => self.m + index - 1,
            VarKind::X => 2 * self.m + index - 1,
        })
    }

    pub fn kind_of_slot(&self, slot: usize) -> (VarKind, usize) {
        if slot < self.m {
            (VarKind::Z, slot + 1)
        } else if slot < 2 * self.m {
            (VarKind::Zbar, slot - self.m + 1)
        } else {
            (VarKind::X, slot - 2 * self.m + 1)
        }
    }

    pub fn check_same(&self, other: &Vars) -> Result<()> {
        if self != other {
            return Err(Error::DimensionMismatch(format!(
                "(m={}, n={}) vs (m={}, n={})",
                self.m, self.n, other.m, other.n
            )));
        }
        Ok(())
    }
}

/// Exponent vector. Ordered graded-lexicographically: lower total degree
/// first, then `z₁ > z₂ > … > z̄₁ > … > x₁ > …`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(vars: &Vars) -> Self {
        Monomial(vec![0; vars.len()].into_boxed_slice())
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps.into_boxed_slice())
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// Swap the `z` and `z̄` exponent blocks.
    pub fn conj(&self, vars: &Vars) -> Monomial {
        let mut e = self.0.clone();
        for a in 0..vars.m {
            e.swap(a, vars.m + a);
        }
        Monomial(e)
    }

    /// All monomials of total degree `<= budget`, in graded-lex order.
    pub fn enumerate(vars: &Vars, budget: u32) -> Vec<Monomial> {
        let k = vars.len();
        let mut out = Vec::new();
        for d in 0..=budget {
            let mut cur = vec![0u32; k];
            compositions(&mut cur, 0, d, &mut out);
        }
        out
    }

    /// Number of monomials of degree `<= budget` in `k` variables: `C(budget + k, k)`.
    pub fn count(vars: &Vars, budget: u32) -> usize {
        binomial(budget as usize + vars.len(), vars.len())
    }
}

// Emits exponent vectors of exact degree `rest` in descending-lex order.
fn compositions(cur: &mut Vec<u32>, pos: usize, rest: u32, out: &mut Vec<Monomial>) {
    if cur.is_empty() {
        if rest == 0 {
            out.push(Monomial(Box::new([])));
        }
        return;
    }
    if pos + 1 == cur.len() {
        cur[pos] = rest;
        out.push(Monomial(cur.clone().into_boxed_slice()));
        cur[pos] = 0;
        return;
    }
    for e in (0..=rest).rev() {
        cur[pos] = e;
        compositions(cur, pos + 1, rest - e, out);
    }
    cur[pos] = 0;
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    vars: Vars,
    budget: u32,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Series {
    pub fn zero(vars: Vars, budget: u32) -> Self {
        Series {
            vars,
            budget,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: Scalar, budget: u32) -> Self {
        Series::monomial(vars, Monomial::one(&vars), c, budget)
    }

    pub fn one(vars: Vars, budget: u32) -> Self {
        Series::constant(vars, Scalar::one(), budget)
    }

    /// `c · mono`, or zero if the monomial does not fit in the budget.
    pub fn monomial(vars: Vars, mono: Monomial, c: Scalar, budget: u32) -> Self {
        let mut s = Series::zero(vars, budget);
        if !c.is_zero() && mono.degree() <= budget {
            s.terms.insert(mono, c);
        }
        s
    }

    /// The coordinate function `z_a`, `z̄_a` or `x_j`.
    pub fn var(vars: Vars, kind: VarKind, index: usize, budget: u32) -> Result<Self> {
        let slot = vars.slot(kind, index)?;
        let mut e = vec![0; vars.len()];
        e[slot] = 1;
        Ok(Series::monomial(
            vars,
            Monomial::from_exponents(e),
            Scalar::one(),
            budget,
        ))
    }

    /// Builds a series from raw terms, summing duplicates and dropping zeros
    /// and terms above `budget`.
    pub fn from_terms<I>(vars: Vars, budget: u32, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Scalar)>,
    {
        let mut s = Series::zero(vars, budget);
        for (mono, c) in terms {
            assert_eq!(mono.0.len(), vars.len(), "exponent vector length");
            if mono.degree() <= budget {
                s.add_term(mono, &c);
            }
        }
        s
    }

    pub(crate) fn add_term(&mut self, mono: Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, c.clone());
            }
        }
    }

    pub fn vars(&self) -> Vars {
        self.vars
    }

    pub fn budget(&self) -> u32 {
        self.budget
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest total degree of a stored term; `None` for the zero series.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(&self.vars))
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    /// Drops every term of degree above `budget` and sets the new budget.
    pub fn truncate(&self, budget: u32) -> Series {
        Series {
            vars: self.vars,
            budget,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= budget)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        if c.is_zero() {
            return Series::zero(self.vars, self.budget);
        }
        Series {
            vars: self.vars,
            budget: self.budget,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Truncated product. Fails on a variable-layout mismatch.
    pub fn mul(&self, other: &Series, out_budget: u32) -> Result<Series> {
        self.vars.check_same(&other.vars)?;
        let mut acc: BTreeMap<Monomial, Scalar> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > out_budget {
                break;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() > out_budget {
                    break;
                }
                acc.entry(ma.mul(mb)).or_default().add_mul(ca, cb);
            }
        }
        acc.retain(|_, v| !v.is_zero());
        Ok(Series {
            vars: self.vars,
            budget: out_budget,
            terms: acc,
        })
    }

    /// Product with every term kept; the budget is the sum of the two budgets.
    pub fn mul_exact(&self, other: &Series) -> Result<Series> {
        self.mul(other, self.budget + other.budget)
    }

    pub fn pow(&self, k: u32, out_budget: u32) -> Result<Series> {
        let mut acc = Series::one(self.vars, out_budget);
        for _ in 0..k {
            acc = acc.mul(self, out_budget)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to a 1-based coordinate.
    pub fn deriv(&self, kind: VarKind, index: usize) -> Result<Series> {
        let slot = self.vars.slot(kind, index)?;
        let mut out = Series::zero(self.vars, self.budget);
        for (mono, c) in &self.terms {
            let e = mono.0[slot];
            if e == 0 {
                continue;
            }
            let mut exps = mono.0.clone();
            exps[slot] -= 1;
            out.terms
                .insert(Monomial(exps), c * &Scalar::from_int(e as i64));
        }
        Ok(out)
    }

    /// Inverse up to `self.budget()`.
    pub fn invert(&self) -> Result<Series> {
        self.invert_to(self.budget)
    }

    /// Inverse up to `budget` by the Neumann expansion
    /// `1/h = c⁻¹ Σ_k u^k` with `u = 1 − h/c` and `c` the constant term.
    pub fn invert_to(&self, budget: u32) -> Result<Series> {
        let c = self.constant_term();
        let c_inv = c.inv().ok_or(Error::NonUnit)?;
        let h = self.truncate(budget);
        let u = (&Series::one(self.vars, budget) - &h.scale(&c_inv)).truncate(budget);
        let mut acc = Series::one(self.vars, budget);
        let mut power = Series::one(self.vars, budget);
        // u has no constant term, so u^k vanishes above degree `budget` once k > budget.
        for _ in 0..budget {
            power = power.mul(&u, budget)?;
            if power.is_zero() {
                break;
            }
            acc = &acc + &power;
        }
        Ok(acc.scale(&c_inv))
    }

    /// Complex conjugation: conjugates coefficients and swaps `z ↔ z̄`.
    pub fn conj(&self) -> Series {
        Series {
            vars: self.vars,
            budget: self.budget,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.conj(&self.vars), c.conj()))
                .collect(),
        }
    }

    /// Raises the budget cap without touching terms.
    pub fn with_budget(&self, budget: u32) -> Series {
        if budget < self.budget {
            return self.truncate(budget);
        }
        Series {
            vars: self.vars,
            budget,
            terms: self.terms.clone(),
        }
    }

    /// True if some term carries a `z̄` exponent.
    pub fn depends_on_zbar(&self) -> bool {
        let m = self.vars.m;
        self.terms.keys().any(|e| e.0[m..2 * m].iter().any(|&k| k > 0))
    }

    /// True if some term carries a `z` or `z̄` exponent.
    pub fn depends_on_leaf(&self) -> bool {
        let m = self.vars.m;
        self.terms.keys().any(|e| e.0[..2 * m].iter().any(|&k| k > 0))
    }

    /// Composition `self ∘ images`: variable slot `s` of `self` is replaced by
    /// `images[s]`, a series over `target_vars`. Truncated at `out_budget`.
    pub fn substitute(&self, images: &[Series], out_budget: u32) -> Result<Series> {
        if images.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "substitution needs {} images, got {}",
                self.vars.len(),
                images.len()
            )));
        }
        let Some(first) = images.first() else {
            // No variables at all: the series is a constant.
            return Ok(self.clone());
        };
        let tv = first.vars;
        for img in images {
            tv.check_same(&img.vars)?;
        }
        // power caches per slot
        let mut powers: Vec<Vec<Series>> = images
            .iter()
            .map(|s| vec![Series::one(tv, out_budget), s.truncate(out_budget)])
            .collect();
        let mut out = Series::zero(tv, out_budget);
        for (mono, c) in &self.terms {
            let mut prod = Series::constant(tv, c.clone(), out_budget);
            for (slot, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[slot].len() <= e as usize {
                    let next = powers[slot]
                        .last()
                        .unwrap()
                        .mul(&images[slot], out_budget)?;
                    powers[slot].push(next);
                }
                prod = prod.mul(&powers[slot][e as usize], out_budget)?;
                if prod.is_zero() {
                    break;
                }
            }
            out = &out + &prod;
        }
        Ok(out.truncate(out_budget))
    }

    fn combine(&self, other: &Series, sign: &Scalar) -> Series {
        assert_eq!(self.vars, other.vars, "series variable layouts differ");
        let mut out = Series {
            vars: self.vars,
            budget: self.budget.max(other.budget),
            terms: self.terms.clone(),
        };
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &(c * sign));
        }
        out
    }

    /// Writes one monomial as `z1^2*zb1*x1`, or nothing for the constant.
    pub(crate) fn fmt_monomial(vars: &Vars, mono: &Monomial) -> String {
        let mut parts = Vec::new();
        for (slot, &e) in mono.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (kind, idx) = vars.kind_of_slot(slot);
            if e == 1 {
                parts.push(format!("{}{}", kind.name(), idx));
            } else {
                parts.push(format!("{}{}^{}", kind.name(), idx, e));
            }
        }
        parts.join("*")
    }
}

impl<'a> std::ops::Add<&'a Series> for &'a Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        self.combine(rhs, &Scalar::one())
    }
}

impl<'a> std::ops::Sub<&'a Series> for &'a Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        self.combine(rhs, &Scalar::from_int(-1))
    }
}

impl std::ops::Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&Scalar::from_int(-1))
    }
}

impl fmt::Display for Series {
    /// Canonical text in the input grammar. Gaussian coefficients with both
    /// parts nonzero are split into a real and an imaginary term so that the
    /// output parses back to the same series.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, c) in &self.terms {
            let mono_txt = Series::fmt_monomial(&self.vars, mono);
            let parts = [
                Scalar::new(c.re().clone(), num::Zero::zero()),
                Scalar::new(num::Zero::zero(), c.im().clone()),
            ];
            for part in parts.iter().filter(|p| !p.is_zero()) {
                let negative = if part.is_real() {
                    num::Signed::is_negative(part.re())
                } else {
                    num::Signed::is_negative(part.im())
                };
                let abs = if negative { -part } else { part.clone() };
                if first {
                    if negative {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, " {} ", if negative { "-" } else { "+" })?;
                }
                first = false;
                if mono_txt.is_empty() {
                    write!(f, "{abs}")?;
                } else if abs.is_one() {
                    write!(f, "{mono_txt}")?;
                } else {
                    write!(f, "{abs}*{mono_txt}")?;
                }
            }
        }
        Ok(())
    }
}
