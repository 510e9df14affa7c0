use gsqg_core::evolution::{linear_propagate, FrontState, Stepper, StepperConfig};
use gsqg_core::nonlinearity::QuadratureSpec;
use gsqg_core::FourierField;

use crate::config::ExperimentConfig;
use crate::datum;
use crate::error::{CliError, Context};
use crate::output::{Outputs, Table};
use crate::report::{Bound, Check, CriterionReport};

/// Self-convergence `e(dt)/e(dt/2)` against a `dt/8` reference, and the
/// linear-only stepper against the exact propagator.
pub fn run(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<CriterionReport, CliError> {
    let model = cfg.model()?;
    let grid = cfg.grid()?;
    let quad = QuadratureSpec::for_grid(&grid);
    let phi = datum::build(cfg, &grid);
    let start = FrontState { t: 0.0, phi: phi.clone() };
    let solve = |dt: f64| -> Result<FourierField, CliError> {
        let st = Stepper::new(model, quad, StepperConfig::new(dt), &grid).during("ConvergenceStudy")?;
        Ok(st.evolve(&start, cfg.t_final, 0, |_| Ok(())).during("ConvergenceStudy")?.phi)
    };
    let reference = solve(cfg.dt / 8.0)?;
    let coarse = solve(cfg.dt)?.sub(&reference).l2_norm();
    let fine = solve(cfg.dt / 2.0)?.sub(&reference).l2_norm();
    let ratio = coarse / fine;

    let linear = Stepper::new(model, quad, StepperConfig::new(cfg.dt), &grid)
        .during("ConvergenceStudy")?
        .linear_only()
        .evolve(&start, cfg.t_final, 0, |_| Ok(()))
        .during("ConvergenceStudy")?;
    let exact = linear_propagate(&phi, &model, cfg.t_final);
    let linear_error = linear.phi.sub(&exact).max_abs() / phi.max_abs();

    let mut table = Table::new(&["dt", "error"]);
    table.push(&[cfg.dt, coarse]);
    table.push(&[cfg.dt / 2.0, fine]);
    out.write_table("convergence.csv", &table)?;
    Ok(CriterionReport::new(
        6,
        "stepper order",
        vec![
            Check::new("self-convergence ratio", ratio, Bound::Within(12.0, 20.0)),
            Check::new("relative linear propagation error", linear_error, Bound::Below(1e-12)),
        ],
    ))
}
