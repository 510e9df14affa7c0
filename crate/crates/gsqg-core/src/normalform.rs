//! Normal-form quantities: `ψ = ∂x^{−1}F(φ_x)`, the weights `J` and `J̃`,
//! quadratic corrections of the linearized and nonlinear unknowns, the
//! modified energy and the conjugated high-regularity variable.

use crate::error::{GsqgError, Result};
use crate::nonlinearity::profile;
use crate::paraproduct::{balanced_remainder, paraproduct, ParaproductSpec};
use crate::spectral::FourierField;
use crate::symbols::{AlphaModel, Branch};

/// Small-data threshold: `‖φ_x‖∞ < 1/2` and `min(1 − ψ_x) > 1/2`.
pub const COERCIVITY_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone)]
pub struct NormalFormData {
    /// Mean-zero antiderivative of `ψ_x`.
    pub psi: FourierField,
    /// `F(φ_x)` pointwise.
    pub psi_x: FourierField,
    /// `1/(1 − ψ_x)`.
    pub j: FourierField,
    /// `J^{−1/α}` on the generic branch, `1` otherwise.
    pub j_tilde: FourierField,
    /// Mean of `ψ_x`, which the periodic antiderivative cannot carry.
    pub dropped_mean: f64,
    branch: Branch,
    alpha: f64,
}

pub fn build_normalform(phi: &FourierField, model: &AlphaModel) -> Result<NormalFormData> {
    let fx = phi.two_thirds_filtered().derivative();
    let sup_slope = fx.max_abs();
    if sup_slope >= COERCIVITY_THRESHOLD {
        return Err(GsqgError::DataTooLarge { sup_slope });
    }
    let psi_x = fx.map(|s| profile(model, s));
    let one_minus = psi_x.values().iter().fold(f64::INFINITY, |m, v| m.min(1.0 - v));
    if one_minus <= COERCIVITY_THRESHOLD {
        return Err(GsqgError::DataTooLarge { sup_slope });
    }
    let psi = psi_x.antiderivative();
    let j = psi_x.map(|p| 1.0 / (1.0 - p));
    let j_tilde = match model.branch() {
        Branch::Generic => psi_x.map(|p| (1.0 - p).powf(1.0 / model.alpha())),
        _ => psi_x.map(|_| 1.0),
    };
    Ok(NormalFormData {
        dropped_mean: psi_x.mean(),
        psi,
        psi_x,
        j,
        j_tilde,
        branch: model.branch(),
        alpha: model.alpha(),
    })
}

impl NormalFormData {
    fn require_generic(&self, what: &str) -> Result<()> {
        if self.branch == Branch::Generic {
            Ok(())
        } else {
            Err(GsqgError::UnsupportedBranch(format!(
                "{what} is defined for α in (0,1)∪(1,2), got {:?}",
                self.branch
            )))
        }
    }

    /// `ṽ = v − (1/α)∂x T_{T_J v}ψ − (1/α)∂x Π(T_J v, ψ)`.
    pub fn linearized_correction(&self, v: &FourierField, spec: &ParaproductSpec) -> Result<FourierField> {
        self.require_generic("the linearized normal form")?;
        let tjv = paraproduct(&self.j, v, spec)?;
        let a = paraproduct(&tjv, &self.psi, spec)?;
        let b = balanced_remainder(&tjv, &self.psi, spec)?;
        Ok(v.sub(&a.add(&b).derivative().scale(1.0 / self.alpha)))
    }

    /// `φ̃ = φ − (1/α) Π(ψ, T_J ∂xφ)`.
    pub fn nonlinear_correction(&self, phi: &FourierField, spec: &ParaproductSpec) -> Result<FourierField> {
        self.require_generic("the nonlinear normal form")?;
        let tj = paraproduct(&self.j, &phi.derivative(), spec)?;
        let pi = balanced_remainder(&self.psi, &tj, spec)?;
        Ok(phi.sub(&pi.scale(1.0 / self.alpha)))
    }

    /// `E(v) = ∫ v T_{J̃} v`; the plain `‖v‖²` off the generic branch.
    pub fn modified_energy(&self, v: &FourierField, spec: &ParaproductSpec) -> Result<f64> {
        if self.branch != Branch::Generic {
            return Ok(v.l2_norm_sq());
        }
        Ok(v.inner(&paraproduct(&self.j_tilde, v, spec)?))
    }

    /// `T_{J^{−s/α}} |D|^s v`, optionally minus the first normal-form correction
    /// `(1/(cα)) T_J L_0(∂x²ψ, ∂x^{−1}ṽ^s)`.
    pub fn conjugated_variable(
        &self,
        v: &FourierField,
        s: f64,
        model: &AlphaModel,
        spec: &ParaproductSpec,
        corrected: bool,
    ) -> Result<FourierField> {
        self.require_generic("the conjugated variable")?;
        let weight = self.j.map(|j| j.powf(-s / self.alpha));
        let vs = paraproduct(&weight, &v.abs_d_pow(s), spec)?;
        if !corrected || s == 0.0 {
            return Ok(vs);
        }
        Ok(vs.sub(&self.conjugation_correction(&vs, s, model, spec)?))
    }

    /// `(1/(cα)) T_J [L(∂xψ, u) + (sc/α) T_{ψ_x} u]` with `u = |D|^{1−α} ṽ^s`
    /// and `L(∂xψ, u) = −(c/α) ∂x [|D|^s, T_ψ] |D|^{−s} u`.
    fn conjugation_correction(
        &self,
        vs: &FourierField,
        s: f64,
        model: &AlphaModel,
        spec: &ParaproductSpec,
    ) -> Result<FourierField> {
        let c = model.c();
        let a = self.alpha;
        let u = vs.abs_d_pow(1.0 - a);
        let inner = u.abs_d_pow(-s);
        let commutator = paraproduct(&self.psi, &inner, spec)?
            .abs_d_pow(s)
            .sub(&paraproduct(&self.psi, &inner.abs_d_pow(s), spec)?);
        let l = commutator.derivative().scale(-c / a);
        let l0 = l.add(&paraproduct(&self.psi_x, &u, spec)?.scale(s * c / a));
        Ok(paraproduct(&self.j, &l0, spec)?.scale(1.0 / (c * a)))
    }

    /// `E^{(s)}(v) = E(ṽ^s)` with the corrected conjugated variable.
    pub fn higher_energy(
        &self,
        v: &FourierField,
        s: f64,
        model: &AlphaModel,
        spec: &ParaproductSpec,
    ) -> Result<f64> {
        let vs = self.conjugated_variable(v, s, model, spec, true)?;
        self.modified_energy(&vs, spec)
    }
}
