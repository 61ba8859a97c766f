//! Leafwise Cauchy–Riemann operators, their twisted versions and pullbacks.
//!
//! For a function `f` and a form `φ` of total degree `r = p + q`:
//!
//! ```text
//! ∂̄_f φ   = f ∂̄φ − r ∂̄f ∧ φ
//! ∂_f φ   = f ∂φ − r ∂f ∧ φ
//! ∂̄ᵏ_f φ  = f ∂̄φ − (r − k) ∂̄f ∧ φ
//! ```
//!
//! The weight `r` is always read from the stored bidegree. Twisted operators
//! enlarge the budget by `max(deg f − 1, 0)`, which is exactly enough for the
//! untruncated result, so `d ∘ d = 0` holds without truncation artifacts.

mod morphism;

use crate::algebra::{Scalar, Series, VarKind};
use crate::error::Result;
use crate::forms::{twist_growth, wedge, FoliatedForm, FoliationModel, MultiIndex};

pub use morphism::{pair_pullback, pullback, pullback_exact, pullback_to, tilde_dbar, FoliatedMorphism, MorphismPair};

/// `dw^a ∧ φ` for `w = z` or `w = z̄` with coefficient `c`, accumulated into `out`.
fn prepend_generator(out: &mut FoliatedForm, kind: VarKind, a: usize, key: &(MultiIndex, MultiIndex), c: &Series) {
    let (ia, ib) = key;
    match kind {
        VarKind::Z => {
            if let Some((s, na)) = ia.prepend(a) {
                out.add_coeff((na, ib.clone()), &c.scale(&Scalar::from_int(s)));
            }
        }
        VarKind::Zbar => {
            if let Some((s, nb)) = ib.prepend(a) {
                // carry dz̄^a past the p holomorphic generators first
                let cross = if ia.len() % 2 == 0 { 1 } else { -1 };
                out.add_coeff((ia.clone(), nb), &c.scale(&Scalar::from_int(s * cross)));
            }
        }
        VarKind::X => unreachable!("no transverse generators in foliated forms"),
    }
}

fn leaf_derivative(phi: &FoliatedForm, kind: VarKind) -> FoliatedForm {
    let vars = phi.vars();
    let (p, q) = phi.bidegree();
    let (np, nq) = if kind == VarKind::Z { (p + 1, q) } else { (p, q + 1) };
    let mut out = FoliatedForm::zero(vars, np, nq, phi.budget());
    for (key, c) in phi.coeffs() {
        for a in 1..=vars.m {
            let dc = c.deriv(kind, a).expect("index within range");
            if !dc.is_zero() {
                prepend_generator(&mut out, kind, a, key, &dc);
            }
        }
    }
    out
}

/// `∂̄_F φ = Σ_a ∂φ/∂z̄^a dz̄^a ∧ φ`, bidegree `(p, q+1)`.
pub fn dbar(phi: &FoliatedForm) -> FoliatedForm {
    leaf_derivative(phi, VarKind::Zbar)
}

/// `∂_F φ = Σ_a ∂φ/∂z^a dz^a ∧ φ`, bidegree `(p+1, q)`.
pub fn partial(phi: &FoliatedForm) -> FoliatedForm {
    leaf_derivative(phi, VarKind::Z)
}

fn twisted(phi: &FoliatedForm, f: &Series, weight: i64, kind: VarKind) -> Result<FoliatedForm> {
    phi.vars().check_same(&f.vars())?;
    let out_budget = phi.budget() + twist_growth(f);
    let d_phi = leaf_derivative(phi, kind);
    let mut out = d_phi.mul_function(f, out_budget)?;
    if weight != 0 {
        let df = leaf_derivative(&FoliatedForm::function(f.clone()), kind);
        let correction = wedge(&df, phi, out_budget)?.scale(&Scalar::from_int(-weight));
        out = out.try_add(&correction)?;
    }
    Ok(out)
}

/// `f ∂̄φ − w ∂̄f ∧ φ` for an explicit weight `w`.
pub fn dbar_weighted(phi: &FoliatedForm, f: &Series, weight: i64) -> Result<FoliatedForm> {
    twisted(phi, f, weight, VarKind::Zbar)
}

/// `f ∂φ − w ∂f ∧ φ` for an explicit weight `w`.
pub fn partial_weighted(phi: &FoliatedForm, f: &Series, weight: i64) -> Result<FoliatedForm> {
    twisted(phi, f, weight, VarKind::Z)
}

/// `∂̄_{F,f}` with twist `f`.
pub fn dbar_twisted(phi: &FoliatedForm, f: &Series) -> Result<FoliatedForm> {
    dbar_weighted(phi, f, phi.degree() as i64)
}

/// `∂_{F,f}` with twist `f`.
pub fn partial_twisted(phi: &FoliatedForm, f: &Series) -> Result<FoliatedForm> {
    partial_weighted(phi, f, phi.degree() as i64)
}

/// `∂̄_{F,f}` with the model's twist.
pub fn dbar_f(phi: &FoliatedForm, model: &FoliationModel) -> Result<FoliatedForm> {
    dbar_twisted(phi, model.f())
}

/// `∂_{F,f}` with the model's twist.
pub fn partial_f(phi: &FoliatedForm, model: &FoliationModel) -> Result<FoliatedForm> {
    partial_twisted(phi, model.f())
}

/// `∂̄ᵏ_{F,f}`: weight `p + q − k`.
pub fn dbar_f_k(phi: &FoliatedForm, model: &FoliationModel, k: i64) -> Result<FoliatedForm> {
    dbar_weighted(phi, model.f(), phi.degree() as i64 - k)
}

/// The composite `∂_{F,f} ∂̄_{F,f}`.
pub fn ddbar_f(phi: &FoliatedForm, f: &Series) -> Result<FoliatedForm> {
    partial_twisted(&dbar_twisted(phi, f)?, f)
}
