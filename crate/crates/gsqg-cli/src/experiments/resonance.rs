use gsqg_core::kernel_quad::{resonance_kernel, KernelRule};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Context};
use crate::output::{Outputs, Table};
use crate::report::{Bound, Check, CriterionReport};

const SIDE: usize = 20;
const RANGE: f64 = 8.0;

/// `max |α·Ω_kernel(ξ1, ξ2) − (ω(ξ1) + ω(ξ2) − ω(ξ1+ξ2))|` over a 20×20 grid of `[−8, 8]²`.
pub fn run(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<CriterionReport, CliError> {
    let model = cfg.model()?;
    let rule = KernelRule::default();
    let nodes: Vec<f64> = (0..SIDE)
        .map(|i| -RANGE + 2.0 * RANGE * i as f64 / (SIDE - 1) as f64)
        .collect();
    let mut table = Table::new(&["xi1", "xi2", "residual"]);
    let mut worst: f64 = 0.0;
    for &x1 in &nodes {
        for &x2 in &nodes {
            let k = resonance_kernel(x1, x2, &model, &rule).during("Resonance")?;
            let rhs = model.omega(x1) + model.omega(x2) - model.omega(x1 + x2);
            let r = (k * model.alpha() - rhs).norm();
            worst = worst.max(r);
            table.push(&[x1, x2, r]);
        }
    }
    out.write_table("resonance.csv", &table)?;
    Ok(CriterionReport::new(
        1,
        "resonance identity",
        vec![Check::new("max identity residual", worst, Bound::Below(1e-6))],
    ))
}
