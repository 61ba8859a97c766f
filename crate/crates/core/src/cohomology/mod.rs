//! Operator matrices and truncated cohomology dimensions.
//!
//! Forms are modeled by their jets: a space at budget `D` holds all forms
//! whose coefficients have degree `<= D`. A first-order operator sends the
//! `D`-jet of a form to a well-defined `(D−1)`-jet of its image, so every
//! group below is computed on a jet complex
//!
//! ```text
//! Ω^{p,q−1}_{D+1} → Ω^{p,q}_D → Ω^{p,q+1}_{D−1}
//! ```
//!
//! whose differentials compose to zero exactly. Second-order operators drop
//! two degrees. Operator matrices can also be assembled in exact mode, where
//! the output budget is large enough to hold the full image.

mod complex;
mod pairing;
mod solve;

use serde::Serialize;

use crate::algebra::Series;
use crate::error::{Error, Result};
use crate::forms::{rescale_power, twist_growth, FoliatedForm, FoliationModel, FormBasis};
use crate::linalg::{induced_rank, quotient_dim, Matrix, Subspace};
use crate::operators::{dbar, dbar_twisted, dbar_weighted, partial, partial_twisted};

pub use complex::CochainComplex;
pub use pairing::{pairing_check, PairingReport};
pub use solve::{solve_primitive, solve_tilde_primitive, Primitive, TildePrimitive};

/// The operators that can be vectorized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorTag {
    Dbar,
    Partial,
    DbarF,
    PartialF,
    DbarFK(i64),
    /// The composite `∂_{F,f} ∂̄_{F,f}`.
    DdbarF,
}

impl OperatorTag {
    /// Bidegree shift `(Δp, Δq)`.
    pub fn shift(self) -> (usize, usize) {
        match self {
            OperatorTag::Partial | OperatorTag::PartialF => (1, 0),
            OperatorTag::DdbarF => (1, 1),
            _ => (0, 1),
        }
    }

    /// Number of derivatives taken.
    pub fn order(self) -> u32 {
        if self == OperatorTag::DdbarF {
            2
        } else {
            1
        }
    }

    pub fn is_twisted(self) -> bool {
        !matches!(self, OperatorTag::Dbar | OperatorTag::Partial)
    }

    /// Budget growth of the exact image.
    pub fn growth(self, f: &Series) -> u32 {
        if self.is_twisted() {
            self.order() * twist_growth(f)
        } else {
            0
        }
    }

    pub fn apply(self, phi: &FoliatedForm, f: &Series) -> Result<FoliatedForm> {
        match self {
            OperatorTag::Dbar => Ok(dbar(phi)),
            OperatorTag::Partial => Ok(partial(phi)),
            OperatorTag::DbarF => dbar_twisted(phi, f),
            OperatorTag::PartialF => partial_twisted(phi, f),
            OperatorTag::DbarFK(k) => dbar_weighted(phi, f, phi.degree() as i64 - k),
            OperatorTag::DdbarF => partial_twisted(&dbar_twisted(phi, f)?, f),
        }
    }

    /// Inverse of [`OperatorTag::name`]; `k` is used by `dbar_f_k`.
    pub fn parse(name: &str, k: Option<i64>) -> Option<OperatorTag> {
        Some(match name {
            "dbar" => OperatorTag::Dbar,
            "partial" => OperatorTag::Partial,
            "dbar_f" => OperatorTag::DbarF,
            "partial_f" => OperatorTag::PartialF,
            "dbar_f_k" => OperatorTag::DbarFK(k?),
            "ddbar_f" => OperatorTag::DdbarF,
            _ => return None,
        })
    }

    pub fn name(self) -> String {
        match self {
            OperatorTag::Dbar => "dbar".into(),
            OperatorTag::Partial => "partial".into(),
            OperatorTag::DbarF => "dbar_f".into(),
            OperatorTag::PartialF => "partial_f".into(),
            OperatorTag::DbarFK(k) => format!("dbar_f_k({k})"),
            OperatorTag::DdbarF => "ddbar_f".into(),
        }
    }
}

/// Matrix of `tag` from `Ω^{p,q}` at `in_budget` to its target at
/// `out_budget`. Valid in exact mode (`out >= in + growth`) and in jet mode
/// (`out <= in − order`); any budget in between is rejected. Negative
/// budgets denote zero spaces.
pub fn operator_matrix(
    tag: OperatorTag,
    model: &FoliationModel,
    p: usize,
    q: usize,
    in_budget: i64,
    out_budget: i64,
) -> Result<Matrix> {
    let f = model.f();
    let exact = out_budget >= in_budget + tag.growth(f) as i64;
    let jet = out_budget <= in_budget - tag.order() as i64;
    if !exact && !jet {
        return Err(Error::BudgetContract(format!(
            "{} from budget {in_budget} to {out_budget}: need >= {} or <= {}",
            tag.name(),
            in_budget + tag.growth(f) as i64,
            in_budget - tag.order() as i64
        )));
    }
    let vars = model.vars();
    let (dp, dq) = tag.shift();
    let source = FormBasis::new(vars, p, q, in_budget);
    let target = FormBasis::new(vars, p + dp, q + dq, out_budget);
    let mut m = Matrix::zeros(target.len(), source.len());
    if target.is_empty() {
        return Ok(m);
    }
    for j in 0..source.len() {
        let image = tag.apply(&source.form(j), f)?;
        for (i, c) in target.coords(&image)? {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

fn jet_matrix(tag: OperatorTag, model: &FoliationModel, p: i64, q: i64, budget: i64) -> Result<Option<Matrix>> {
    if p < 0 || q < 0 {
        return Ok(None);
    }
    operator_matrix(tag, model, p as usize, q as usize, budget, budget - tag.order() as i64).map(Some)
}

fn space_dim(model: &FoliationModel, p: usize, q: usize, budget: i64) -> usize {
    FormBasis::new(model.vars(), p, q, budget).len()
}

fn image_or_zero(m: Option<Matrix>, ambient: usize) -> Subspace {
    m.map_or_else(|| Subspace::zero(ambient), |m| m.image())
}

fn check_bidegree(model: &FoliationModel, p: usize, q: usize) -> Result<()> {
    if p > model.m() || q > model.m() {
        return Err(Error::BidegreeMismatch(format!(
            "({p},{q}) outside 0..={}",
            model.m()
        )));
    }
    Ok(())
}

/// Cycles and boundaries of one group.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub cycles: Subspace,
    pub boundaries: Subspace,
}

impl Quotient {
    pub fn dim(&self) -> Result<usize> {
        quotient_dim(&self.cycles, &self.boundaries)
    }
}

fn dolbeault_quotient(tag: OperatorTag, model: &FoliationModel, p: usize, q: usize, d: i64) -> Result<Quotient> {
    check_bidegree(model, p, q)?;
    let (p, q) = (p as i64, q as i64);
    let cycles = jet_matrix(tag, model, p, q, d)?.expect("nonnegative bidegree").kernel_basis();
    let boundaries = image_or_zero(jet_matrix(tag, model, p, q - 1, d + 1)?, cycles.ambient());
    Ok(Quotient { cycles, boundaries })
}

fn bott_chern_quotient(model: &FoliationModel, p: usize, q: usize, d: i64) -> Result<Quotient> {
    check_bidegree(model, p, q)?;
    let (pi, qi) = (p as i64, q as i64);
    let a = jet_matrix(OperatorTag::PartialF, model, pi, qi, d)?.expect("nonnegative");
    let b = jet_matrix(OperatorTag::DbarF, model, pi, qi, d)?.expect("nonnegative");
    let cycles = a.vstack(&b)?.kernel_basis();
    let composite = jet_matrix(OperatorTag::DdbarF, model, pi - 1, qi - 1, d + 2)?;
    if let Some(c) = &composite {
        // the composite must factor through the single operators
        let inner = jet_matrix(OperatorTag::DbarF, model, pi - 1, qi - 1, d + 2)?.expect("nonnegative");
        let outer = jet_matrix(OperatorTag::PartialF, model, pi - 1, qi, d + 1)?.expect("nonnegative");
        if outer.mul(&inner)? != *c {
            return Err(Error::BudgetContract(format!(
                "composite operator at ({p},{q}) does not factor"
            )));
        }
    }
    let boundaries = image_or_zero(composite, cycles.ambient());
    Ok(Quotient { cycles, boundaries })
}

fn aeppli_quotient(model: &FoliationModel, p: usize, q: usize, d: i64) -> Result<Quotient> {
    check_bidegree(model, p, q)?;
    let (pi, qi) = (p as i64, q as i64);
    let cycles = jet_matrix(OperatorTag::DdbarF, model, pi, qi, d)?
        .expect("nonnegative")
        .kernel_basis();
    let n = cycles.ambient();
    let from_p = image_or_zero(jet_matrix(OperatorTag::PartialF, model, pi - 1, qi, d + 1)?, n);
    let from_q = image_or_zero(jet_matrix(OperatorTag::DbarF, model, pi, qi - 1, d + 1)?, n);
    let boundaries = from_p.sum(&from_q)?;
    Ok(Quotient { cycles, boundaries })
}

/// One row of a cohomology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyRow {
    pub variant: String,
    pub p: usize,
    pub q: usize,
    #[serde(rename = "D")]
    pub d: u32,
    pub ker: usize,
    pub im: usize,
    pub dim: usize,
    /// Whether `dim` is unchanged at budget `D + 1`; absent if not computed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable: Option<bool>,
}

fn row(variant: &str, p: usize, q: usize, d: u32, quo: &Quotient) -> Result<CohomologyRow> {
    Ok(CohomologyRow {
        variant: variant.into(),
        p,
        q,
        d,
        ker: quo.cycles.dim(),
        im: quo.boundaries.dim(),
        dim: quo.dim()?,
        stable: None,
    })
}

/// `H^{p,q}_f` at budget `D`.
pub fn cohomology_dim(model: &FoliationModel, p: usize, q: usize, d: u32) -> Result<CohomologyRow> {
    row("dolbeault", p, q, d, &dolbeault_quotient(OperatorTag::DbarF, model, p, q, d as i64)?)
}

/// `H^{p,q}_{f,k}` at budget `D`.
pub fn cohomology_dim_k(model: &FoliationModel, p: usize, q: usize, d: u32, k: i64) -> Result<CohomologyRow> {
    row(&format!("k{k}"), p, q, d, &dolbeault_quotient(OperatorTag::DbarFK(k), model, p, q, d as i64)?)
}

/// Cohomology of the untwisted `∂̄_F` complex at budget `D`.
pub fn untwisted_dim(model: &FoliationModel, p: usize, q: usize, d: u32) -> Result<CohomologyRow> {
    row("untwisted", p, q, d, &dolbeault_quotient(OperatorTag::Dbar, model, p, q, d as i64)?)
}

/// `H^{p,q}_{f,BC}` at budget `D`.
pub fn bott_chern_dim(model: &FoliationModel, p: usize, q: usize, d: u32) -> Result<CohomologyRow> {
    row("bc", p, q, d, &bott_chern_quotient(model, p, q, d as i64)?)
}

/// `H^{p,q}_{f,A}` at budget `D`.
pub fn aeppli_dim(model: &FoliationModel, p: usize, q: usize, d: u32) -> Result<CohomologyRow> {
    row("aeppli", p, q, d, &aeppli_quotient(model, p, q, d as i64)?)
}

/// Rank of `H_BC → H_f` with domain and codomain dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalRank {
    pub rank: usize,
    pub domain: usize,
    pub codomain: usize,
}

/// The canonical map `H^{p,q}_{f,BC} → H^{p,q}_f` at budget `D`. Both groups
/// live in the same jet space, so the map is induced by the identity;
/// well-definedness (BC boundaries are `∂̄_f`-boundaries) is checked.
pub fn canonical_map_rank(model: &FoliationModel, p: usize, q: usize, d: u32) -> Result<CanonicalRank> {
    let bc = bott_chern_quotient(model, p, q, d as i64)?;
    let dol = dolbeault_quotient(OperatorTag::DbarF, model, p, q, d as i64)?;
    let id = Matrix::identity(bc.cycles.ambient());
    let rank = induced_rank(&id, &bc.cycles, &bc.boundaries, &dol.cycles, &dol.boundaries)?;
    Ok(CanonicalRank {
        rank,
        domain: bc.dim()?,
        codomain: dol.dim()?,
    })
}

/// Which group a table computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Dolbeault,
    K(i64),
    BottChern,
    Aeppli,
    Canonical,
    Untwisted,
}

impl Variant {
    pub fn parse(name: &str, k: Option<i64>) -> Option<Variant> {
        Some(match name {
            "dolbeault" => Variant::Dolbeault,
            "k" => Variant::K(k?),
            "bc" => Variant::BottChern,
            "aeppli" => Variant::Aeppli,
            "canonical" => Variant::Canonical,
            "untwisted" => Variant::Untwisted,
            _ => return None,
        })
    }
}

/// One cell of a table. For the canonical map, `ker` is the domain
/// dimension, `im` the codomain dimension and `dim` the rank.
pub fn compute_row(model: &FoliationModel, variant: Variant, p: usize, q: usize, d: u32) -> Result<CohomologyRow> {
    match variant {
        Variant::Dolbeault => cohomology_dim(model, p, q, d),
        Variant::K(k) => cohomology_dim_k(model, p, q, d, k),
        Variant::BottChern => bott_chern_dim(model, p, q, d),
        Variant::Aeppli => aeppli_dim(model, p, q, d),
        Variant::Untwisted => untwisted_dim(model, p, q, d),
        Variant::Canonical => {
            let c = canonical_map_rank(model, p, q, d)?;
            Ok(CohomologyRow {
                variant: "canonical".into(),
                p,
                q,
                d,
                ker: c.domain,
                im: c.codomain,
                dim: c.rank,
                stable: None,
            })
        }
    }
}

/// Grid evaluation in `(D, p, q)` order with stabilization flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CohomologyReport {
    pub rows: Vec<CohomologyRow>,
}

impl CohomologyReport {
    pub fn grid(model: &FoliationModel, variant: Variant, ps: &[usize], qs: &[usize], ds: &[u32]) -> Result<Self> {
        let mut rows = Vec::new();
        for &d in ds {
            for &p in ps {
                for &q in qs {
                    let mut r = compute_row(model, variant, p, q, d)?;
                    let next = compute_row(model, variant, p, q, d + 1)?;
                    r.stable = Some(next.dim == r.dim);
                    rows.push(r);
                }
            }
        }
        Ok(CohomologyReport { rows })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("variant,p,q,D,ker,im,dim,stable\n");
        for r in &self.rows {
            let stable = r.stable.map_or(String::new(), |s| s.to_string());
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                r.variant, r.p, r.q, r.d, r.ker, r.im, r.dim, stable
            ));
        }
        out
    }

    /// `dim` values as a `(p, q)` table for one budget and square grid.
    pub fn table(&self, d: u32, size: usize) -> Vec<Vec<usize>> {
        let mut t = vec![vec![0; size]; size];
        for r in self.rows.iter().filter(|r| r.d == d) {
            t[r.p][r.q] = r.dim;
        }
        t
    }
}

/// Matrix of `φ ↦ φ / h^{p+q}` on `Ω^{p,q}` at `budget`.
pub fn rescale_matrix(model: &FoliationModel, h: &Series, p: usize, q: usize, budget: i64) -> Result<Matrix> {
    let basis = FormBasis::new(model.vars(), p, q, budget);
    let mut m = Matrix::zeros(basis.len(), basis.len());
    for j in 0..basis.len() {
        for (i, c) in basis.coords(&rescale_power(&basis.form(j), h)?)? {
            m.set(i, j, c);
        }
    }
    Ok(m)
}

/// Checks `φ^{p,q+1} ∘ ∂̄_{fh} = ∂̄_f ∘ φ^{p,q}` as an identity of jet
/// matrices on `Ω^{p,q}_D`.
pub fn rescale_conjugates(model: &FoliationModel, h: &Series, p: usize, q: usize, d: u32) -> Result<bool> {
    let d = d as i64;
    let fh = model.f().mul_exact(h)?;
    let twisted = model.with_twist(fh)?;
    let lhs = rescale_matrix(model, h, p, q + 1, d - 1)?.mul(&jet_matrix(OperatorTag::DbarF, &twisted, p as i64, q as i64, d)?.expect("nonnegative"))?;
    let rhs = jet_matrix(OperatorTag::DbarF, model, p as i64, q as i64, d)?
        .expect("nonnegative")
        .mul(&rescale_matrix(model, h, p, q, d)?)?;
    Ok(lhs == rhs)
}

/// The `∂̄`-type complex `Ω^{p,0} → … → Ω^{p,m}` on jets anchored at the top:
/// grade `q` has budget `top − q`.
pub fn dolbeault_complex(tag: OperatorTag, model: &FoliationModel, p: usize, top: i64) -> Result<CochainComplex> {
    let m = model.m();
    let mut labels = Vec::new();
    let mut dims = Vec::new();
    let mut diffs = Vec::new();
    for q in 0..=m {
        labels.push(format!("Omega^{{{p},{q}}}"));
        dims.push(space_dim(model, p, q, top - q as i64));
        if q < m {
            diffs.push(operator_matrix(tag, model, p, q, top - q as i64, top - q as i64 - 1)?);
        }
    }
    CochainComplex::new(labels, dims, diffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_series;

    fn model(f: &str) -> FoliationModel {
        FoliationModel::parse(1, 0, 3, f).unwrap()
    }

    #[test]
    fn budget_contract() {
        let m = model("1 + z1*zb1^2");
        assert!(operator_matrix(OperatorTag::DbarF, &m, 0, 0, 2, 3).is_err());
        assert!(operator_matrix(OperatorTag::DbarF, &m, 0, 0, 2, 4).is_ok());
        assert!(operator_matrix(OperatorTag::DbarF, &m, 0, 0, 2, 1).is_ok());
        assert!(operator_matrix(OperatorTag::Dbar, &m, 0, 0, 2, 2).is_ok());
    }

    #[test]
    fn trivial_matrices() {
        let m = model("1");
        let top = operator_matrix(OperatorTag::Dbar, &m, 0, 1, 2, 2).unwrap();
        assert_eq!(top.rows(), 0);
        let zero = model("0");
        assert!(operator_matrix(OperatorTag::DbarF, &zero, 0, 0, 2, 2).unwrap().is_zero());
        assert!(operator_matrix(OperatorTag::PartialF, &zero, 0, 1, 2, 2).unwrap().is_zero());
    }

    #[test]
    fn matrix_matches_operator() {
        let m = FoliationModel::parse(2, 1, 2, "1 + z1*zb2 - x1").unwrap();
        let mat = operator_matrix(OperatorTag::DbarF, &m, 1, 0, 2, 4).unwrap();
        let src = FormBasis::new(m.vars(), 1, 0, 2);
        let dst = FormBasis::new(m.vars(), 1, 1, 4);
        let phi = FoliatedForm::term(m.vars(), &[2], &[], parse_series("zb1*x1 + z2^2 - 3", m.vars(), 2).unwrap()).unwrap();
        let lhs = mat.mul_vec(&src.coords(&phi).unwrap().into_iter().collect());
        let rhs: crate::linalg::SparseVec = dst.coords(&dbar_twisted(&phi, m.f()).unwrap()).unwrap().into_iter().collect();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn untwisted_dims() {
        let m = model("1");
        assert_eq!(cohomology_dim(&m, 0, 0, 3).unwrap().dim, 4);
        assert_eq!(cohomology_dim(&m, 0, 1, 3).unwrap().dim, 0);
        assert_eq!(bott_chern_dim(&m, 0, 0, 2).unwrap().dim, 1);
        let full = space_dim(&m, 1, 1, 2);
        assert_eq!(bott_chern_dim(&model("0"), 1, 1, 2).unwrap().dim, full);
        assert_eq!(aeppli_dim(&model("0"), 1, 0, 2).unwrap().dim, space_dim(&m, 1, 0, 2));
    }

    #[test]
    fn k_zero_matches_dolbeault() {
        let m = model("zb1 + z1^2");
        for q in 0..=1 {
            assert_eq!(cohomology_dim_k(&m, 0, q, 2, 0).unwrap().dim, cohomology_dim(&m, 0, q, 2).unwrap().dim);
        }
    }

    #[test]
    fn canonical_zero_twist_is_identity() {
        let m = model("0");
        let c = canonical_map_rank(&m, 1, 1, 2).unwrap();
        assert_eq!(c.rank, space_dim(&m, 1, 1, 2));
        assert_eq!(c.domain, c.codomain);
    }

    #[test]
    fn rescaling_conjugates_matrices() {
        let m = FoliationModel::parse(1, 0, 3, "z1 + zb1").unwrap();
        let h = parse_series("2 - z1*zb1", m.vars(), 3).unwrap();
        for q in 0..=1 {
            assert!(rescale_conjugates(&m, &h, 0, q, 3).unwrap());
        }
    }

    #[test]
    fn jet_complex_is_a_complex() {
        let m = FoliationModel::parse(2, 0, 2, "1 + z1*zb2").unwrap();
        let c = dolbeault_complex(OperatorTag::DbarF, &m, 1, 4).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn report_formats() {
        let m = model("1");
        let r = CohomologyReport::grid(&m, Variant::Dolbeault, &[0, 1], &[0, 1], &[2]).unwrap();
        assert_eq!(r.rows.len(), 4);
        assert!(r.to_csv().starts_with("variant,p,q,D,ker,im,dim,stable\ndolbeault,0,0,2,"));
        assert!(r.to_json().contains("\"D\": 2"));
        assert!(compute_row(&m, Variant::Dolbeault, 2, 0, 2).is_err());
    }
}
