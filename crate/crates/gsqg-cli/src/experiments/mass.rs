use gsqg_core::evolution::{FrontState, Stepper, StepperConfig};
use gsqg_core::nonlinearity::QuadratureSpec;

use crate::config::ExperimentConfig;
use crate::datum;
use crate::error::{CliError, Context};
use crate::output::{Outputs, Table};
use crate::report::{Bound, Check, CriterionReport};

/// Relative drift of `‖φ‖²` along the full flow up to `t_final`.
pub fn run(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<CriterionReport, CliError> {
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let phi = datum::build(cfg, &grid);
    let stepper =
        Stepper::new(model, QuadratureSpec::for_grid(&grid), StepperConfig::new(cfg.dt), &grid).during("Conservation")?;
    let m0 = phi.l2_norm_sq();
    let mut table = Table::new(&["t", "mass", "relative_drift", "mean"]);
    let mut worst: f64 = 0.0;
    let end = stepper
        .evolve(&FrontState { t: 0.0, phi }, cfg.t_final, 1, |s| {
            let m = s.phi.l2_norm_sq();
            let drift = (m / m0 - 1.0).abs();
            worst = worst.max(drift);
            table.push(&[s.t, m, drift, s.phi.mean()]);
            Ok(())
        })
        .during("Conservation")?;
    out.write_table("mass.csv", &table)?;
    out.write_snapshot("final.gsqgfield", end.t, &end.phi)?;
    Ok(CriterionReport::new(
        2,
        "conservation of mass",
        vec![Check::new("max relative mass drift", worst, Bound::Below(1e-6))],
    ))
}
