use crate::algebra::{Series, VarKind, Vars};
use crate::error::{Error, Result};
use crate::forms::{rescale_power, wedge, FoliatedForm};

use super::dbar_twisted;

/// A foliated map `(z, x) ↦ (z′(z, x), x′(x))` between single-chart models.
/// Components are series over the source variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliatedMorphism {
    source: Vars,
    target: Vars,
    z: Vec<Series>,
    x: Vec<Series>,
}

impl FoliatedMorphism {
    pub fn new(source: Vars, target: Vars, z: Vec<Series>, x: Vec<Series>) -> Result<Self> {
        if z.len() != target.m || x.len() != target.n {
            return Err(Error::InvalidMorphism(format!(
                "expected {} z-components and {} x-components, got {} and {}",
                target.m,
                target.n,
                z.len(),
                x.len()
            )));
        }
        for (a, c) in z.iter().enumerate() {
            source.check_same(&c.vars())?;
            if c.depends_on_zbar() {
                return Err(Error::InvalidMorphism(format!(
                    "z-component {} depends on zb",
                    a + 1
                )));
            }
        }
        for (j, c) in x.iter().enumerate() {
            source.check_same(&c.vars())?;
            if c.depends_on_leaf() {
                return Err(Error::InvalidMorphism(format!(
                    "x-component {} depends on leaf variables",
                    j + 1
                )));
            }
            if c.terms().values().any(|s| !s.is_real()) {
                return Err(Error::InvalidMorphism(format!(
                    "x-component {} has non-real coefficients",
                    j + 1
                )));
            }
        }
        Ok(FoliatedMorphism { source, target, z, x })
    }

    pub fn identity(vars: Vars, budget: u32) -> Self {
        let z = (1..=vars.m)
            .map(|a| Series::var(vars, VarKind::Z, a, budget.max(1)).expect("in range"))
            .collect();
        let x = (1..=vars.n)
            .map(|j| Series::var(vars, VarKind::X, j, budget.max(1)).expect("in range"))
            .collect();
        FoliatedMorphism {
            source: vars,
            target: vars,
            z,
            x,
        }
    }

    pub fn source(&self) -> Vars {
        self.source
    }

    pub fn target(&self) -> Vars {
        self.target
    }

    pub fn z_components(&self) -> &[Series] {
        &self.z
    }

    pub fn x_components(&self) -> &[Series] {
        &self.x
    }

    /// Largest component degree, at least 1.
    pub fn degree(&self) -> u32 {
        self.z
            .iter()
            .chain(&self.x)
            .filter_map(Series::degree)
            .max()
            .unwrap_or(0)
            .max(1)
    }

    /// True when every component vanishes at the origin. Only such maps
    /// send jets to jets of the same order.
    pub fn preserves_base_point(&self) -> bool {
        self.z.iter().chain(&self.x).all(|c| c.constant_term().is_zero())
    }

    /// Substitution images by target slot: `z′_a`, then `z̄′_a`, then `x′_j`.
    fn images(&self, budget: u32) -> Vec<Series> {
        let mut out: Vec<Series> = self.z.iter().map(|c| c.with_budget(budget)).collect();
        out.extend(self.z.iter().map(|c| c.conj().with_budget(budget)));
        out.extend(self.x.iter().map(|c| c.with_budget(budget)));
        out
    }

    /// `μ*g` for a function on the target, truncated at `budget`.
    pub fn pullback_series(&self, g: &Series, budget: u32) -> Result<Series> {
        self.target.check_same(&g.vars())?;
        if self.target.is_empty() {
            return Ok(Series::constant(self.source, g.constant_term(), budget));
        }
        g.substitute(&self.images(budget), budget)
    }

    /// `μ*g` with every term kept.
    pub fn pullback_series_exact(&self, g: &Series) -> Result<Series> {
        let bound = g.degree().unwrap_or(0) * self.degree();
        self.pullback_series(g, bound)
    }
}

/// `μ*φ′` truncated at `φ′`'s budget.
pub fn pullback(mu: &FoliatedMorphism, phi: &FoliatedForm) -> Result<FoliatedForm> {
    pullback_to(mu, phi, phi.budget())
}

/// `μ*φ′` with every term kept: degree at most `budget·k + (p+q)(k−1)` for
/// components of degree `k`.
pub fn pullback_exact(mu: &FoliatedMorphism, phi: &FoliatedForm) -> Result<FoliatedForm> {
    let k = mu.degree();
    let bound = phi.max_degree().unwrap_or(0) * k + phi.degree() as u32 * (k - 1);
    pullback_to(mu, phi, bound)
}

/// `μ*φ′` truncated at `budget`.
pub fn pullback_to(mu: &FoliatedMorphism, phi: &FoliatedForm, budget: u32) -> Result<FoliatedForm> {
    mu.target.check_same(&phi.vars())?;
    let src = mu.source;
    let (p, q) = phi.bidegree();
    let dz: Vec<FoliatedForm> = mu
        .z
        .iter()
        .map(|c| super::partial(&FoliatedForm::function(c.with_budget(budget + 1))))
        .collect();
    let dzb: Vec<FoliatedForm> = mu
        .z
        .iter()
        .map(|c| super::dbar(&FoliatedForm::function(c.conj().with_budget(budget + 1))))
        .collect();
    let mut out = FoliatedForm::zero(src, p, q, budget);
    for ((ia, ib), c) in phi.coeffs() {
        let mut acc = FoliatedForm::function(mu.pullback_series(c, budget)?);
        // build the generator word from the right so each step is a prepend
        for &b in ib.entries().iter().rev() {
            acc = wedge(&dzb[b - 1], &acc, budget)?;
        }
        for &a in ia.entries().iter().rev() {
            acc = wedge(&dz[a - 1], &acc, budget)?;
        }
        out = out.try_add(&acc)?;
    }
    Ok(out.with_budget(budget))
}

/// A morphism together with a unit `α` such that `f′ ∘ φ = α f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismPair {
    phi: FoliatedMorphism,
    alpha: Series,
}

impl MorphismPair {
    /// Validates `μ*f′ = α f` exactly up to `budget`.
    pub fn new(phi: FoliatedMorphism, alpha: Series, f: &Series, f_prime: &Series, budget: u32) -> Result<Self> {
        phi.source.check_same(&alpha.vars())?;
        if !alpha.is_unit() {
            return Err(Error::InvalidPair("alpha must have a nonzero constant term".into()));
        }
        let lhs = phi.pullback_series(f_prime, budget)?;
        let rhs = alpha.mul(f, budget)?;
        if lhs.terms() != rhs.terms() {
            return Err(Error::InvalidPair(format!(
                "pullback of f' is {lhs}, alpha*f is {rhs}"
            )));
        }
        Ok(MorphismPair { phi, alpha })
    }

    pub fn morphism(&self) -> &FoliatedMorphism {
        &self.phi
    }

    pub fn alpha(&self) -> &Series {
        &self.alpha
    }
}

/// `φ′ ↦ φ*φ′ / α^{p+q}`, truncated at `φ′`'s budget.
pub fn pair_pullback(pair: &MorphismPair, phi: &FoliatedForm) -> Result<FoliatedForm> {
    rescale_power(&pullback(&pair.phi, phi)?, &pair.alpha)
}

/// The mapping-cone differential
/// `(φ′, ψ) ↦ (∂̄_{f′} φ′, μ*φ′ − ∂̄_{μ*f′} ψ)` with all terms kept. `ψ` is
/// absent at grade 0, where the source part is the zero space.
pub fn tilde_dbar(
    phi: &FoliatedForm,
    psi: Option<&FoliatedForm>,
    mu: &FoliatedMorphism,
    f_prime: &Series,
) -> Result<(FoliatedForm, FoliatedForm)> {
    let (p, q) = phi.bidegree();
    let first = dbar_twisted(phi, f_prime)?;
    let mut second = pullback_exact(mu, phi)?;
    match psi {
        Some(psi) => {
            mu.source.check_same(&psi.vars())?;
            if psi.p() != p || psi.q() + 1 != q {
                return Err(Error::BidegreeMismatch(format!(
                    "tilde operator pairs ({p},{q}) with ({p},{}), got {:?}",
                    q as i64 - 1,
                    psi.bidegree()
                )));
            }
            let pf = mu.pullback_series_exact(f_prime)?;
            second = second.try_add(&-&dbar_twisted(psi, &pf)?)?;
        }
        None if q != 0 => {
            return Err(Error::BidegreeMismatch(format!(
                "source part missing at grade {q}"
            )));
        }
        None => {}
    }
    Ok((first, second))
}
