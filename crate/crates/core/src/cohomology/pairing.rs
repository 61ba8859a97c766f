//! Randomized verification of the product `H_BC × H_A → H_A`.
//!
//! Closed forms are drawn from exact kernels (output budgets large enough to
//! hold the full image), so every identity below is a polynomial identity
//! checked without truncation. Write `∂`, `∂̄` for the twisted operators.
//!
//! * (a) `φ` BC-closed, `ψ` `∂∂̄`-closed ⇒ `∂∂̄(φ∧ψ) = 0`.
//! * (b) `φ` BC-closed, `ψ = ∂α + ∂̄β` ⇒ `φ∧ψ = ∂u + ∂̄v` with
//!   `u = (−1)^{|φ|} φ∧α`, `v = (−1)^{|φ|} φ∧β`.
//! * (c) `φ = ∂∂̄θ`, `ψ` `∂∂̄`-closed ⇒ `φ∧ψ = ∂u + ∂̄v` with
//!   `u = ∂̄θ∧ψ`, `v = (−1)^{|θ|} θ∧∂ψ`.
//!
//! For (c) the symmetric primitive `½[(∂̄−∂)θ∧ψ + (−1)^{|θ|+2} θ∧(∂−∂̄)ψ]`
//! is also tested. Applying `∂ + ∂̄` to it reproduces `φ∧ψ` only in the
//! bidegree of `φ∧ψ`; the components `∂̄u′` and `∂v′` that land in the two
//! neighbouring bidegrees equal `∓(−1)^{|θ|}(∂̄θ∧∂̄ψ, ∂θ∧∂ψ)` and are
//! counted separately as `off_bidegree_nonzero`.

use serde::Serialize;

use super::{operator_matrix, OperatorTag};
use crate::algebra::Scalar;
use crate::checks::gen::Gen;
use crate::error::Result;
use crate::forms::{wedge_exact, FoliatedForm, FoliationModel, FormBasis};
use crate::linalg::Subspace;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PairingReport {
    pub bidegrees: [usize; 4],
    pub trials: usize,
    pub closed_times_closed: usize,
    pub closed_times_exact: usize,
    pub exact_times_closed: usize,
    pub symmetric_primitive: usize,
    /// Cases where the symmetric primitive leaves a nonzero component
    /// outside the target bidegree (a finding, not a failure).
    pub off_bidegree_nonzero: usize,
    pub first_failure: Option<String>,
}

impl PairingReport {
    pub fn failures(&self) -> usize {
        self.closed_times_closed + self.closed_times_exact + self.exact_times_closed + self.symmetric_primitive
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    fn fail(&mut self, what: &str, trial: usize) {
        if self.first_failure.is_none() {
            self.first_failure = Some(format!("{what} at trial {trial}"));
        }
    }
}

fn sign(deg: usize) -> Scalar {
    Scalar::from_int(if deg.is_multiple_of(2) { 1 } else { -1 })
}

/// Exact kernel of the named operators on `Ω^{p,q}` at `budget`, as forms.
fn exact_kernel(model: &FoliationModel, tags: &[OperatorTag], p: usize, q: usize, budget: u32) -> Result<(FormBasis, Subspace)> {
    let basis = FormBasis::new(model.vars(), p, q, budget as i64);
    let mut stacked: Option<crate::linalg::Matrix> = None;
    for &tag in tags {
        let out = budget as i64 + tag.growth(model.f()) as i64;
        let m = operator_matrix(tag, model, p, q, budget as i64, out)?;
        stacked = Some(match stacked {
            None => m,
            Some(s) => s.vstack(&m)?,
        });
    }
    let kernel = stacked.expect("at least one operator").kernel_basis();
    Ok((basis, kernel))
}

fn sample(gen: &mut Gen, basis: &FormBasis, kernel: &Subspace) -> FoliatedForm {
    let v = gen.combination(kernel.basis());
    let coords: Vec<_> = v.into_iter().collect();
    basis.form_from_coords(&coords)
}

fn apply(tag: OperatorTag, phi: &FoliatedForm, model: &FoliationModel) -> Result<FoliatedForm> {
    tag.apply(phi, model.f())
}

/// Runs `trials` seeded cases for `φ ∈ Ω^{p,q}`, `ψ ∈ Ω^{r,s}` at the
/// model's budget.
pub fn pairing_check(model: &FoliationModel, pqrs: [usize; 4], trials: usize, seed: u64) -> Result<PairingReport> {
    let [p, q, r, s] = pqrs;
    let vars = model.vars();
    let budget = model.budget();
    let mut gen = Gen::new(seed);
    let mut report = PairingReport {
        bidegrees: pqrs,
        trials,
        ..Default::default()
    };
    use OperatorTag::{DbarF, DdbarF, PartialF};
    let (bc_basis, bc_kernel) = exact_kernel(model, &[PartialF, DbarF], p, q, budget)?;
    let (a_basis, a_kernel) = exact_kernel(model, &[DdbarF], r, s, budget)?;
    let deg_phi = p + q;
    for trial in 0..trials {
        let phi = sample(&mut gen, &bc_basis, &bc_kernel);
        let psi = sample(&mut gen, &a_basis, &a_kernel);

        // (a)
        let prod = wedge_exact(&phi, &psi)?;
        if !apply(DdbarF, &prod, model)?.is_zero() {
            report.closed_times_closed += 1;
            report.fail("closed ^ ddbar-closed is not ddbar-closed", trial);
        }

        // (b)
        let alpha = (r >= 1).then(|| gen.form(vars, r - 1, s, budget, 3));
        let beta = (s >= 1).then(|| gen.form(vars, r, s - 1, budget, 3));
        let mut exact = FoliatedForm::zero(vars, r, s, 0);
        let mut primitive = FoliatedForm::zero(vars, p + r, q + s, 0);
        if let Some(a) = &alpha {
            exact = exact.try_add(&apply(PartialF, a, model)?)?;
            let u = wedge_exact(&phi, a)?.scale(&sign(deg_phi));
            primitive = primitive.try_add(&apply(PartialF, &u, model)?)?;
        }
        if let Some(b) = &beta {
            exact = exact.try_add(&apply(DbarF, b, model)?)?;
            let v = wedge_exact(&phi, b)?.scale(&sign(deg_phi));
            primitive = primitive.try_add(&apply(DbarF, &v, model)?)?;
        }
        if !wedge_exact(&phi, &exact)?.same_terms(&primitive) {
            report.closed_times_exact += 1;
            report.fail("closed ^ exact primitive mismatch", trial);
        }

        // (c)
        if p >= 1 && q >= 1 {
            let theta = gen.form(vars, p - 1, q - 1, budget, 3);
            let t = p + q - 2;
            let phi_c = apply(DdbarF, &theta, model)?;
            let lhs = wedge_exact(&phi_c, &psi)?;
            let dtheta = apply(PartialF, &theta, model)?;
            let dbtheta = apply(DbarF, &theta, model)?;
            let dpsi = apply(PartialF, &psi, model)?;
            let dbpsi = apply(DbarF, &psi, model)?;

            let u = wedge_exact(&dbtheta, &psi)?;
            let v = wedge_exact(&theta, &dpsi)?.scale(&sign(t));
            let rhs = apply(PartialF, &u, model)?.try_add(&apply(DbarF, &v, model)?)?;
            if !lhs.same_terms(&rhs) {
                report.exact_times_closed += 1;
                report.fail("ddbar-exact ^ ddbar-closed primitive mismatch", trial);
            }

            let half = Scalar::from_ratio(1, 2);
            let u_sym = wedge_exact(&dbtheta, &psi)?
                .try_add(&wedge_exact(&theta, &dbpsi)?.scale(&-sign(t)))?
                .scale(&half);
            let v_sym = wedge_exact(&dtheta, &psi)?
                .scale(&Scalar::from_int(-1))
                .try_add(&wedge_exact(&theta, &dpsi)?.scale(&sign(t)))?
                .scale(&half);
            let projected = apply(PartialF, &u_sym, model)?.try_add(&apply(DbarF, &v_sym, model)?)?;
            if !lhs.same_terms(&projected) {
                report.symmetric_primitive += 1;
                report.fail("symmetric primitive mismatch in the target bidegree", trial);
            }
            if !apply(DbarF, &u_sym, model)?.is_zero() || !apply(PartialF, &v_sym, model)?.is_zero() {
                report.off_bidegree_nonzero += 1;
            }
        }
    }
    Ok(report)
}
