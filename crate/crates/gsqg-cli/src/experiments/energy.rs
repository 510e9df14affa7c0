use gsqg_core::diagnostics::control_norms;
use gsqg_core::evolution::{PairFlow, PairState, Stepper, StepperConfig};
use gsqg_core::nonlinearity::QuadratureSpec;
use gsqg_core::normalform::build_normalform;
use gsqg_core::{AlphaModel, ParaproductSpec, Projection};

use crate::config::ExperimentConfig;
use crate::datum;
use crate::error::{CliError, Context};
use crate::experiments::log_slope;
use crate::output::{Outputs, Table};
use crate::report::{Bound, Check, CriterionReport};

/// Half-width of the centered time difference.
const H: f64 = 1e-3;
/// `E(t) − E(0)` may not exceed this multiple of `sup B² · sup ‖v‖² · t`.
const DRIFT_CONSTANT: f64 = 10.0;

pub fn run(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Vec<CriterionReport>, CliError> {
    let model = cfg.model()?;
    let spec = ParaproductSpec::new(1.0).during("EnergyDrift")?;
    Ok(vec![gain(cfg, &model, &spec, out)?, drift(cfg, &model, &spec, out)?])
}

/// Growth rates at `t = 0` of `E(ṽ)` and of `‖v‖²` along the linearized flow,
/// each scanned over the amplitude of the front. The normal form should raise
/// the order in the amplitude by one.
fn gain(
    cfg: &ExperimentConfig,
    model: &AlphaModel,
    spec: &ParaproductSpec,
    out: &mut Outputs,
) -> Result<CriterionReport, CliError> {
    let grid = cfg.grid()?;
    let stepper =
        Stepper::new(*model, QuadratureSpec::for_grid(&grid), StepperConfig::new(cfg.dt), &grid).during("EnergyDrift")?;
    let shape = datum::shape(cfg, &grid);
    let v = datum::probe_direction(cfg, &grid);
    let amplitudes = [cfg.epsilon, cfg.epsilon / 2.0, cfg.epsilon / 4.0];
    let mut table = Table::new(&["kappa", "modified_rate", "plain_rate"]);
    let (mut modified, mut plain) = (Vec::new(), Vec::new());
    for &k in &amplitudes {
        let start = PairState {
            t: 0.0,
            phi: shape.scale(k),
            v: v.clone(),
        };
        let mut ends = Vec::with_capacity(2);
        for h in [H, -H] {
            let s = stepper.step_pair_by(&start, &PairFlow::Linearized, h).during("EnergyDrift")?;
            let nf = build_normalform(&s.phi, model).during("EnergyDrift")?;
            let corrected = nf.linearized_correction(&s.v, spec).during("EnergyDrift")?;
            let e = nf.modified_energy(&corrected, spec).during("EnergyDrift")?;
            ends.push((e, s.v.l2_norm_sq()));
        }
        let m = (ends[0].0 - ends[1].0) / (2.0 * H);
        let p = (ends[0].1 - ends[1].1) / (2.0 * H);
        table.push(&[k, m, p]);
        modified.push(m);
        plain.push(p);
    }
    out.write_table("energy_gain.csv", &table)?;
    let gain = log_slope(&amplitudes, &modified) - log_slope(&amplitudes, &plain);
    Ok(CriterionReport::new(
        4,
        "normal-form gain",
        vec![Check::new("exponent gain", gain, Bound::AtLeast(0.8))],
    ))
}

/// `|E(t) − E(0)|` along the paradifferential flow against `sup B² · sup ‖v‖² · t`.
fn drift(
    cfg: &ExperimentConfig,
    model: &AlphaModel,
    spec: &ParaproductSpec,
    out: &mut Outputs,
) -> Result<CriterionReport, CliError> {
    let grid = cfg.grid()?;
    let stepper =
        Stepper::new(*model, QuadratureSpec::for_grid(&grid), StepperConfig::new(cfg.dt), &grid).during("EnergyDrift")?;
    let flow = PairFlow::Paradifferential {
        spec: *spec,
        source: None,
    };
    let start = PairState {
        t: 0.0,
        phi: datum::build(cfg, &grid),
        v: datum::probe_direction(cfg, &grid),
    };
    let mut samples = Vec::new();
    stepper
        .evolve_pair(&start, &flow, cfg.t_final, 1, |s| {
            let nf = build_normalform(&s.phi, model)?;
            let e = nf.modified_energy(&s.v, spec)?;
            let (_, b) = control_norms(&s.phi, model, Projection::Smooth);
            samples.push((s.t, e, b, s.v.l2_norm_sq()));
            Ok(())
        })
        .during("EnergyDrift")?;
    let e0 = samples[0].1;
    let (mut sup_b, mut sup_v) = (0.0f64, 0.0f64);
    let mut worst = 0.0f64;
    let mut table = Table::new(&["t", "energy", "b", "v_norm_sq", "normalized_drift"]);
    for &(t, e, b, vv) in &samples {
        sup_b = sup_b.max(b);
        sup_v = sup_v.max(vv);
        let ratio = if t > 0.0 {
            (e - e0).abs() / (sup_b * sup_b * sup_v * t)
        } else {
            0.0
        };
        worst = worst.max(ratio);
        table.push(&[t, e, b, vv, ratio]);
    }
    out.write_table("energy_drift.csv", &table)?;
    Ok(CriterionReport::new(
        5,
        "modified-energy drift",
        vec![Check::new("normalized energy drift", worst, Bound::AtMost(DRIFT_CONSTANT))],
    ))
}
