//! Initial data built from a configuration.

use std::sync::Arc;

use gsqg_core::{FourierField, Grid};

use crate::config::{Datum, ExperimentConfig};

/// The datum with unit amplitude.
pub fn shape(cfg: &ExperimentConfig, grid: &Arc<Grid>) -> FourierField {
    let w = cfg.width;
    let envelope = move |x: f64| (-x * x / (2.0 * w * w)).exp();
    match cfg.datum {
        Datum::GaussianBump => FourierField::from_fn(grid, envelope),
        Datum::ModulatedPacket => {
            let xi0 = cfg.carrier;
            FourierField::from_fn(grid, move |x| envelope(x) * (xi0 * x).cos())
        }
        Datum::TwoMode { xi1, xi2 } => FourierField::from_fn(grid, move |x| (xi1 * x).cos() + (xi2 * x).cos()),
    }
}

/// `ε` times [`shape`].
pub fn build(cfg: &ExperimentConfig, grid: &Arc<Grid>) -> FourierField {
    shape(cfg, grid).scale(cfg.epsilon)
}

/// Fixed smooth test direction for pair flows and bilinear scans:
/// `e^{−(x−w/2)²/2w²} cos(2x/w)`.
pub fn probe_direction(cfg: &ExperimentConfig, grid: &Arc<Grid>) -> FourierField {
    let w = cfg.width;
    FourierField::from_fn(grid, move |x| {
        let y = x - 0.5 * w;
        (-y * y / (2.0 * w * w)).exp() * (2.0 * x / w).cos()
    })
}
