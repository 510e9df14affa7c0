//! Integrating-factor RK4 for the front equation, its linearization and the
//! paradifferential flow. The dispersive part `e^{−i a(ξ) t}` is applied
//! exactly; RK4 handles the nonlinearity in the rotating frame.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{GsqgError, Result};
use crate::nonlinearity::{q_apply, q_low_high, QuadratureSpec};
use crate::normalform::COERCIVITY_THRESHOLD;
use crate::paraproduct::ParaproductSpec;
use crate::spectral::{FourierField, Grid};
use crate::symbols::AlphaModel;

/// Step halvings tried on non-finite output before giving up.
pub const MAX_HALVINGS: u32 = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    #[default]
    IfRk4,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Upper bound on `dt · max|a(ξ)|`.
    pub cfl_guard: f64,
    /// Reject steps that leave the small-slope regime.
    pub monitor_coercivity: bool,
}

impl StepperConfig {
    pub fn new(dt: f64) -> Self {
        Self {
            dt,
            scheme: Scheme::IfRk4,
            cfl_guard: 50.0,
            monitor_coercivity: false,
        }
    }

    pub fn validate(&self, grid: &Grid, model: &AlphaModel) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(GsqgError::InvalidStepper(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.cfl_guard > 0.0) {
            return Err(GsqgError::InvalidStepper(format!(
                "cfl_guard must be positive, got {}",
                self.cfl_guard
            )));
        }
        let stiff = self.dt * max_symbol(grid, model);
        if stiff > self.cfl_guard {
            return Err(GsqgError::InvalidStepper(format!(
                "dt·max|a| = {stiff} exceeds cfl_guard = {}",
                self.cfl_guard
            )));
        }
        Ok(())
    }
}

fn max_symbol(grid: &Grid, model: &AlphaModel) -> f64 {
    grid.wavenumbers().iter().fold(0.0, |m, &xi| m.max(model.a(xi).abs()))
}

#[derive(Debug, Clone)]
pub struct FrontState {
    pub t: f64,
    pub phi: FourierField,
}

/// Front together with a solution of its linearized or paradifferential equation.
#[derive(Debug, Clone)]
pub struct PairState {
    pub t: f64,
    pub phi: FourierField,
    pub v: FourierField,
}

/// Exact linear flow `e^{−i a(D) t}`. The Nyquist mode, where the odd
/// symbol is ambiguous, is left in place.
pub fn linear_propagate(f: &FourierField, model: &AlphaModel, t: f64) -> FourierField {
    let grid = f.grid();
    let factor = propagator(grid, model, t);
    let out = f.spectrum().iter().zip(&factor).map(|(z, e)| z * e).collect();
    FourierField::from_spectrum(grid, out)
}

fn propagator(grid: &Grid, model: &AlphaModel, h: f64) -> Vec<Complex64> {
    let ny = grid.nyquist_index();
    grid.wavenumbers()
        .iter()
        .enumerate()
        .map(|(j, &xi)| {
            if j == ny {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::from_polar(1.0, -model.a(xi) * h)
            }
        })
        .collect()
}

/// Nonlinear part of the front equation, `Q(φ, ∂xφ)`, with the mean removed.
/// In the continuum the mean vanishes: for each `y` the integrand is
/// `sgn(y) ∂x G(δ^y φ)` with `G′ = F`.
pub fn rhs_full(phi: &FourierField, model: &AlphaModel, quad: &QuadratureSpec) -> Result<FourierField> {
    let q = q_apply(phi, &phi.derivative(), model, quad)?;
    Ok(q.sub(&q.zero_mode()))
}

/// `∂x Q(φ, v)`.
pub fn rhs_linearized(
    phi: &FourierField,
    v: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
) -> Result<FourierField> {
    Ok(q_apply(phi, v, model, quad)?.derivative())
}

/// `∂x Q_lh(φ, v) + f`.
pub fn rhs_paradifferential(
    phi: &FourierField,
    v: &FourierField,
    source: Option<&FourierField>,
    model: &AlphaModel,
    quad: &QuadratureSpec,
    spec: &ParaproductSpec,
) -> Result<FourierField> {
    let lh = q_low_high(phi, v, model, quad, spec)?.derivative();
    match source {
        Some(f) => {
            lh.check_grid(f)?;
            Ok(lh.add(f))
        }
        None => Ok(lh),
    }
}

/// Which equation the second field of a [`PairState`] solves.
#[derive(Debug, Clone)]
pub enum PairFlow {
    Linearized,
    Paradifferential {
        spec: ParaproductSpec,
        source: Option<FourierField>,
    },
}

#[derive(Debug, Clone)]
pub struct Stepper {
    model: AlphaModel,
    quad: QuadratureSpec,
    config: StepperConfig,
    nonlinear: bool,
}

impl Stepper {
    pub fn new(model: AlphaModel, quad: QuadratureSpec, config: StepperConfig, grid: &Grid) -> Result<Self> {
        config.validate(grid, &model)?;
        quad.validate(grid)?;
        Ok(Self {
            model,
            quad,
            config,
            nonlinear: true,
        })
    }

    /// Same scheme with the nonlinearity switched off.
    pub fn linear_only(mut self) -> Self {
        self.nonlinear = false;
        self
    }

    pub fn config(&self) -> &StepperConfig {
        &self.config
    }

    pub fn model(&self) -> &AlphaModel {
        &self.model
    }

    fn front_rhs(&self, phi: &FourierField) -> Result<FourierField> {
        if self.nonlinear {
            rhs_full(phi, &self.model, &self.quad)
        } else {
            Ok(FourierField::zeros(phi.grid()))
        }
    }

    fn pair_rhs(&self, fields: &[FourierField], flow: &PairFlow) -> Result<Vec<FourierField>> {
        let (phi, v) = (&fields[0], &fields[1]);
        let dphi = self.front_rhs(phi)?;
        let dv = if !self.nonlinear {
            match flow {
                PairFlow::Paradifferential { source: Some(f), .. } => f.clone(),
                _ => FourierField::zeros(v.grid()),
            }
        } else {
            match flow {
                PairFlow::Linearized => rhs_linearized(phi, v, &self.model, &self.quad)?,
                PairFlow::Paradifferential { spec, source } => {
                    rhs_paradifferential(phi, v, source.as_ref(), &self.model, &self.quad, spec)?
                }
            }
        };
        Ok(vec![dphi, dv])
    }

    /// One step of signed size `h`; negative `h` runs the flow backwards.
    pub fn step_by(&self, state: &FrontState, h: f64) -> Result<FrontState> {
        let out = self.guarded(state.t, &[state.phi.clone()], h, &|f| Ok(vec![self.front_rhs(&f[0])?]))?;
        let phi = out.into_iter().next().expect("one field");
        self.check_slope(&phi)?;
        Ok(FrontState { t: state.t + h, phi })
    }

    pub fn step(&self, state: &FrontState) -> Result<FrontState> {
        self.step_by(state, self.config.dt)
    }

    pub fn step_pair_by(&self, state: &PairState, flow: &PairFlow, h: f64) -> Result<PairState> {
        let fields = [state.phi.clone(), state.v.clone()];
        let mut out = self.guarded(state.t, &fields, h, &|f| self.pair_rhs(f, flow))?.into_iter();
        let phi = out.next().expect("front");
        let v = out.next().expect("second field");
        self.check_slope(&phi)?;
        Ok(PairState { t: state.t + h, phi, v })
    }

    /// Evolves to `t_final` in equal steps no longer than `dt`, calling
    /// `observe` on the initial state, every `every` steps and at the end.
    pub fn evolve(
        &self,
        state: &FrontState,
        t_final: f64,
        every: usize,
        mut observe: impl FnMut(&FrontState) -> Result<()>,
    ) -> Result<FrontState> {
        let (steps, h) = self.partition(state.t, t_final);
        let mut cur = state.clone();
        observe(&cur)?;
        for k in 1..=steps {
            cur = self.step_by(&cur, h)?;
            if k == steps {
                cur.t = t_final;
            }
            if k == steps || (every > 0 && k % every == 0) {
                observe(&cur)?;
            }
        }
        Ok(cur)
    }

    pub fn evolve_pair(
        &self,
        state: &PairState,
        flow: &PairFlow,
        t_final: f64,
        every: usize,
        mut observe: impl FnMut(&PairState) -> Result<()>,
    ) -> Result<PairState> {
        let (steps, h) = self.partition(state.t, t_final);
        let mut cur = state.clone();
        observe(&cur)?;
        for k in 1..=steps {
            cur = self.step_pair_by(&cur, flow, h)?;
            if k == steps {
                cur.t = t_final;
            }
            if k == steps || (every > 0 && k % every == 0) {
                observe(&cur)?;
            }
        }
        Ok(cur)
    }

    fn partition(&self, t0: f64, t1: f64) -> (usize, f64) {
        let span = t1 - t0;
        if span == 0.0 {
            return (0, 0.0);
        }
        let steps = (span.abs() / self.config.dt - 1e-9).ceil().max(1.0) as usize;
        (steps, span / steps as f64)
    }

    fn check_slope(&self, phi: &FourierField) -> Result<()> {
        if !self.config.monitor_coercivity {
            return Ok(());
        }
        let sup_slope = phi.derivative().max_abs();
        if sup_slope >= COERCIVITY_THRESHOLD {
            return Err(GsqgError::DataTooLarge { sup_slope });
        }
        Ok(())
    }

    /// Tries the step whole, then in `2^k` substeps for `k ≤ MAX_HALVINGS`.
    fn guarded(
        &self,
        t: f64,
        fields: &[FourierField],
        h: f64,
        rhs: &dyn Fn(&[FourierField]) -> Result<Vec<FourierField>>,
    ) -> Result<Vec<FourierField>> {
        let grid = fields[0].grid().clone();
        for k in 0..=MAX_HALVINGS {
            let pieces = 1usize << k;
            let sub = h / pieces as f64;
            let mut cur = fields.to_vec();
            let mut ok = true;
            for _ in 0..pieces {
                cur = if_rk4(&grid, &self.model, &cur, sub, rhs)?;
                if !cur.iter().all(|f| f.values().iter().all(|v| v.is_finite())) {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(cur);
            }
        }
        Err(GsqgError::BlowupDetected { t })
    }
}

type Spectra = Vec<Vec<Complex64>>;

fn spectra(fields: &[FourierField]) -> Spectra {
    fields.iter().map(|f| f.spectrum().to_vec()).collect()
}

fn fields_of(grid: &Arc<Grid>, s: Spectra) -> Vec<FourierField> {
    s.into_iter().map(|z| FourierField::from_spectrum(grid, z)).collect()
}

/// `Σ c_i·E_i·x_i`, with `E_i` an optional diagonal factor.
fn combine(terms: &[(f64, Option<&[Complex64]>, &Spectra)]) -> Spectra {
    let nf = terms[0].2.len();
    let n = terms[0].2[0].len();
    (0..nf)
        .map(|f| {
            (0..n)
                .map(|k| {
                    terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (c, e, x)| {
                        let z = x[f][k] * *c;
                        acc + e.map_or(z, |e| z * e[k])
                    })
                })
                .collect()
        })
        .collect()
}

/// Lawson's integrating-factor RK4 with `E(τ) = e^{−i a τ}`.
fn if_rk4(
    grid: &Arc<Grid>,
    model: &AlphaModel,
    fields: &[FourierField],
    h: f64,
    rhs: &dyn Fn(&[FourierField]) -> Result<Vec<FourierField>>,
) -> Result<Vec<FourierField>> {
    let half = propagator(grid, model, h / 2.0);
    let full = propagator(grid, model, h);
    let x = spectra(fields);
    let eval = |s: Spectra| -> Result<Spectra> { Ok(spectra(&rhs(&fields_of(grid, s))?)) };

    let k1 = spectra(&rhs(fields)?);
    let k2 = eval(combine(&[(1.0, Some(&half), &x), (h / 2.0, Some(&half), &k1)]))?;
    let k3 = eval(combine(&[(1.0, Some(&half), &x), (h / 2.0, None, &k2)]))?;
    let k4 = eval(combine(&[(1.0, Some(&full), &x), (h, Some(&half), &k3)]))?;
    let k23 = combine(&[(1.0, None, &k2), (1.0, None, &k3)]);
    let out = combine(&[
        (1.0, Some(&full), &x),
        (h / 6.0, Some(&full), &k1),
        (h / 3.0, Some(&half), &k23),
        (h / 6.0, None, &k4),
    ]);
    Ok(fields_of(grid, out))
}
