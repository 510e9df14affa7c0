//! Run configuration, read from flat JSON.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use gsqg_core::evolution::StepperConfig;
use gsqg_core::normalform::COERCIVITY_THRESHOLD;
use gsqg_core::{AlphaModel, Branch, Grid};
use serde::{Deserialize, Serialize};

use crate::datum;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Experiment {
    Resonance,
    Conservation,
    NullScaling,
    EnergyDrift,
    Decay,
    Scattering,
    ConvergenceStudy,
}

impl Experiment {
    pub const ALL: [Experiment; 7] = [
        Experiment::Resonance,
        Experiment::Conservation,
        Experiment::NullScaling,
        Experiment::EnergyDrift,
        Experiment::Decay,
        Experiment::Scattering,
        Experiment::ConvergenceStudy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Resonance => "Resonance",
            Experiment::Conservation => "Conservation",
            Experiment::NullScaling => "NullScaling",
            Experiment::EnergyDrift => "EnergyDrift",
            Experiment::Decay => "Decay",
            Experiment::Scattering => "Scattering",
            Experiment::ConvergenceStudy => "ConvergenceStudy",
        }
    }

    /// Acceptance criteria evaluated by this experiment.
    pub fn criteria(self) -> &'static [u8] {
        match self {
            Experiment::Resonance => &[1],
            Experiment::Conservation => &[2],
            Experiment::NullScaling => &[3, 9],
            Experiment::EnergyDrift => &[4, 5],
            Experiment::ConvergenceStudy => &[6],
            Experiment::Decay => &[7],
            Experiment::Scattering => &[8],
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Experiment::Resonance => "resonance identity of the bilinear symbol on a 20x20 frequency grid",
            Experiment::Conservation => "L2 mass drift along the full flow",
            Experiment::NullScaling => "amplitude scan of the null-form remainder; paraproduct identities",
            Experiment::EnergyDrift => "normal-form gain and modified-energy drift along pair flows",
            Experiment::Decay => "Y-norm decay and X-norm growth exponents",
            Experiment::Scattering => "wave-packet profile plateau and logarithmic phase law",
            Experiment::ConvergenceStudy => "time-stepper self-convergence and exact linear propagation",
        }
    }

    fn needs_generic(self) -> bool {
        matches!(
            self,
            Experiment::Resonance | Experiment::EnergyDrift | Experiment::Scattering
        )
    }

    fn uses_normal_form(self) -> bool {
        matches!(
            self,
            Experiment::EnergyDrift | Experiment::NullScaling | Experiment::Decay | Experiment::Scattering
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Datum {
    /// `ε e^{−x²/2w²}`.
    GaussianBump,
    /// `ε e^{−x²/2w²} cos(ξ0 x)`.
    ModulatedPacket,
    /// `ε (cos ξ1 x + cos ξ2 x)`; both wavenumbers must be grid modes.
    TwoMode { xi1: f64, xi2: f64 },
}

fn default_n() -> usize {
    1024
}
fn default_half_length() -> f64 {
    32.0 * PI
}
fn default_dt() -> f64 {
    0.05
}
fn default_t_final() -> f64 {
    1.0
}
fn default_epsilon() -> f64 {
    0.05
}
fn default_datum() -> Datum {
    Datum::GaussianBump
}
fn default_width() -> f64 {
    1.0
}
fn default_carrier() -> f64 {
    6.0
}
fn default_output() -> PathBuf {
    PathBuf::from("gsqg-out")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub experiment: Experiment,
    #[serde(default = "default_n")]
    pub n_points: usize,
    #[serde(default = "default_half_length")]
    pub half_length: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_t_final")]
    pub t_final: f64,
    /// Data amplitude.
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_datum")]
    pub datum: Datum,
    /// Gaussian envelope width `w`.
    #[serde(default = "default_width")]
    pub width: f64,
    /// Carrier `ξ0` of the modulated packet.
    #[serde(default = "default_carrier")]
    pub carrier: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Defaults for everything except `alpha` and `experiment`.
    pub fn new(alpha: f64, experiment: Experiment) -> Self {
        Self {
            alpha,
            experiment,
            n_points: default_n(),
            half_length: default_half_length(),
            dt: default_dt(),
            t_final: default_t_final(),
            epsilon: default_epsilon(),
            datum: default_datum(),
            width: default_width(),
            carrier: default_carrier(),
            seed: 0,
            output_dir: default_output(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn model(&self) -> Result<AlphaModel, CliError> {
        AlphaModel::new(self.alpha).map_err(|e| CliError::config("alpha", e.to_string()))
    }

    pub fn grid(&self) -> Result<Arc<Grid>, CliError> {
        if !(self.n_points.is_power_of_two() && self.n_points >= 16) {
            return Err(CliError::config(
                "n_points",
                format!("must be a power of two, at least 16; got {}", self.n_points),
            ));
        }
        if !(self.half_length.is_finite() && self.half_length > 0.0) {
            return Err(CliError::config(
                "half_length",
                format!("must be positive and finite; got {}", self.half_length),
            ));
        }
        Grid::new(self.n_points, self.half_length).map_err(|e| CliError::config("n_points", e.to_string()))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let model = self.model()?;
        let grid = self.grid()?;
        let positive = |field: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(CliError::config(field, format!("must be positive and finite; got {v}")))
            }
        };
        positive("dt", self.dt)?;
        positive("t_final", self.t_final)?;
        positive("epsilon", self.epsilon)?;
        positive("width", self.width)?;
        StepperConfig::new(self.dt)
            .validate(&grid, &model)
            .map_err(|e| CliError::config("dt", e.to_string()))?;
        if self.experiment.needs_generic() && model.branch() != Branch::Generic {
            return Err(CliError::config(
                "alpha",
                format!(
                    "{} needs alpha in (0,1) or (1,2); got {}",
                    self.experiment.name(),
                    self.alpha
                ),
            ));
        }
        if self.experiment == Experiment::Decay && model.branch() == Branch::LogSqg {
            return Err(CliError::config("alpha", "Decay needs the vector field L, which is not available at alpha = 1"));
        }
        match self.datum {
            Datum::GaussianBump | Datum::ModulatedPacket => {
                if 8.0 * self.width >= self.half_length {
                    return Err(CliError::config(
                        "width",
                        format!(
                            "the envelope does not fit in the box: 8·width = {} ≥ half_length = {}",
                            8.0 * self.width,
                            self.half_length
                        ),
                    ));
                }
                let carrier = if self.datum == Datum::ModulatedPacket {
                    positive("carrier", self.carrier)?;
                    self.carrier
                } else {
                    0.0
                };
                // Envelope spectrum e^{−(ξ−ξ0)²w²/2} must fall below 1e-4 of its peak by Nyquist.
                let reach = carrier + (2.0 * 1e4f64.ln()).sqrt() / self.width;
                if reach > grid.nyquist() {
                    return Err(CliError::config(
                        "width",
                        format!(
                            "the datum is not resolved: its spectrum reaches {reach} beyond the Nyquist wavenumber {}",
                            grid.nyquist()
                        ),
                    ));
                }
            }
            Datum::TwoMode { xi1, xi2 } => {
                for xi in [xi1, xi2] {
                    let k = xi / grid.fundamental();
                    if !(xi.is_finite() && xi > 0.0 && (k - k.round()).abs() < 1e-9 && xi < 2.0 * grid.nyquist() / 3.0) {
                        return Err(CliError::config(
                            "datum",
                            format!(
                                "two-mode wavenumbers must be positive multiples of {} below 2/3 of Nyquist; got {xi}",
                                grid.fundamental()
                            ),
                        ));
                    }
                }
            }
        }
        if self.experiment.uses_normal_form() {
            let slope = datum::build(self, &grid).derivative().max_abs();
            if slope >= COERCIVITY_THRESHOLD {
                return Err(CliError::config(
                    "epsilon",
                    format!("datum slope {slope} is not below the coercivity threshold {COERCIVITY_THRESHOLD}"),
                ));
            }
        }
        Ok(())
    }
}
