//! Named experiments. Each returns the verdicts of the criteria it covers.

pub mod convergence;
pub mod dispersive;
pub mod energy;
pub mod mass;
pub mod null_scaling;
pub mod resonance;

use crate::config::{Experiment, ExperimentConfig};
use crate::error::CliError;
use crate::output::Outputs;
use crate::report::{CriterionReport, Summary};

/// Validates, runs, and writes `summary.json` next to the other artifacts.
pub fn run(cfg: &ExperimentConfig) -> Result<Summary, CliError> {
    cfg.validate()?;
    let mut out = Outputs::create(&cfg.output_dir)?;
    let criteria = run_into(cfg, &mut out)?;
    let passed = criteria.iter().all(|c| c.passed);
    let mut artifacts = out.files().to_vec();
    artifacts.push("summary.json".into());
    let summary = Summary {
        experiment: cfg.experiment.name().to_string(),
        config: cfg.clone(),
        criteria,
        artifacts,
        passed,
    };
    let json = serde_json::to_string_pretty(&summary)?;
    out.write_text("summary.json", &json)?;
    Ok(summary)
}

fn run_into(cfg: &ExperimentConfig, out: &mut Outputs) -> Result<Vec<CriterionReport>, CliError> {
    Ok(match cfg.experiment {
        Experiment::Resonance => vec![resonance::run(cfg, out)?],
        Experiment::Conservation => vec![mass::run(cfg, out)?],
        Experiment::NullScaling => null_scaling::run(cfg, out)?,
        Experiment::EnergyDrift => energy::run(cfg, out)?,
        Experiment::ConvergenceStudy => vec![convergence::run(cfg, out)?],
        Experiment::Decay => {
            let traj = dispersive::simulate(cfg, false)?;
            traj.write(out)?;
            vec![traj.decay_report()?]
        }
        Experiment::Scattering => {
            let traj = dispersive::simulate(cfg, true)?;
            traj.write(out)?;
            vec![traj.scattering_report()?]
        }
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub(crate) fn log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
