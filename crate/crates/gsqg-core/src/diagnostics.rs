//! Norms and monitored quantities along a trajectory.
//!
//! The `BMO^{α/2}` part of the control norm `B` is proxied by the dyadic
//! `B^{α/2}_{∞,2}` sum; on band-limited data the two are comparable.

use std::fmt::Write as _;

use crate::error::{GsqgError, Result};
use crate::normalform::build_normalform;
use crate::paraproduct::ParaproductSpec;
use crate::spectral::{block_symbol, dyadic_blocks, FourierField, Projection};
use crate::symbols::{AlphaModel, Branch};

/// Label written next to `B` in output metadata.
pub const BMO_PROXY: &str = "dyadic B^{alpha/2}_{inf,2} sum";

/// `A = ‖∂xφ‖∞` and `B = (Σ_λ (λ^{α/2}‖P_λ∂xφ‖∞)²)^{1/2}`.
pub fn control_norms(phi: &FourierField, model: &AlphaModel, projection: Projection) -> (f64, f64) {
    let fx = phi.derivative();
    let a = fx.max_abs();
    let b = dyadic_blocks(phi.grid(), projection)
        .into_iter()
        .map(|lambda| {
            let piece = fx.apply_real_multiplier(|xi| block_symbol(xi, lambda, projection));
            (lambda.powf(model.alpha() / 2.0) * piece.max_abs()).powi(2)
        })
        .sum::<f64>()
        .sqrt();
    (a, b)
}

/// `L = x + tαc|D|^{α−1}`, with `x` the centered sawtooth coordinate of the box.
pub fn vector_field_l(phi: &FourierField, t: f64, model: &AlphaModel) -> Result<FourierField> {
    if model.branch() == Branch::LogSqg {
        return Err(GsqgError::UnsupportedBranch(
            "the vector field L is not available at α = 1".into(),
        ));
    }
    let grid = phi.grid();
    let xs = grid.xs();
    let x_phi = FourierField::from_values(grid, phi.values().iter().zip(&xs).map(|(v, x)| v * x).collect());
    let alpha = model.alpha();
    if alpha == 0.0 || t == 0.0 {
        return Ok(x_phi);
    }
    Ok(x_phi.add(&phi.abs_d_pow(alpha - 1.0).scale(t * alpha * model.c())))
}

/// `‖|D|^s φ‖_{L²}`.
pub fn hs_norm(phi: &FourierField, s: f64) -> f64 {
    phi.abs_d_pow(s).l2_norm()
}

/// `‖φ‖_X = ‖φ‖_{Ḣ^{s0}} + ‖φ‖_{Ḣ^s} + ‖L∂xφ‖_{L²}`.
pub fn norm_x(phi: &FourierField, t: f64, model: &AlphaModel, s0: f64, s: f64) -> Result<f64> {
    let l = vector_field_l(&phi.derivative(), t, model)?;
    Ok(hs_norm(phi, s0) + hs_norm(phi, s) + l.l2_norm())
}

/// `‖|D|^{1−δ}⟨D⟩^{α/2+2δ}φ‖∞`.
pub fn norm_y(phi: &FourierField, model: &AlphaModel, delta: f64) -> f64 {
    let p = model.alpha() / 2.0 + 2.0 * delta;
    phi.apply_real_multiplier(|xi| xi.abs().powf(1.0 - delta) * (1.0 + xi * xi).powf(p / 2.0))
        .max_abs()
}

/// Two-term variant `‖|D|^{1−δ}φ‖∞ + ‖|D|^{α/2+δ}∂xφ‖∞`.
pub fn norm_y_split(phi: &FourierField, model: &AlphaModel, delta: f64) -> f64 {
    phi.abs_d_pow(1.0 - delta).max_abs() + phi.derivative().abs_d_pow(model.alpha() / 2.0 + delta).max_abs()
}

/// Slowly varying majorant `c_λ = max_μ 2^{−δ|log₂(λ/μ)|}‖P_μφ‖_{Ḣ^{s0}∩Ḣ^s}`.
pub fn frequency_envelope(
    phi: &FourierField,
    s0: f64,
    s: f64,
    delta: f64,
    projection: Projection,
) -> Vec<(f64, f64)> {
    let blocks = dyadic_blocks(phi.grid(), projection);
    let norms: Vec<f64> = blocks
        .iter()
        .map(|&mu| {
            let piece = phi.apply_real_multiplier(|xi| block_symbol(xi, mu, projection));
            hs_norm(&piece, s0) + hs_norm(&piece, s)
        })
        .collect();
    blocks
        .iter()
        .map(|&lambda| {
            let c = blocks.iter().zip(&norms).fold(0.0f64, |m, (&mu, &nm)| {
                m.max(2f64.powf(-delta * (lambda / mu).log2().abs()) * nm)
            });
            (lambda, c)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    /// Largest deviation of `log value` from the fitted line.
    pub residual: f64,
}

/// Least-squares slope of `log value` against `log t`.
pub fn decay_fit(series: &[(f64, f64)]) -> Result<DecayFit> {
    if series.len() < 4 {
        return Err(GsqgError::InsufficientSeries {
            got: series.len(),
            need: 4,
        });
    }
    let pts: Vec<(f64, f64)> = series.iter().map(|&(t, v)| (t.ln(), v.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let exponent = sxy / sxx;
    let residual = pts
        .iter()
        .map(|(x, y)| (y - my - exponent * (x - mx)).abs())
        .fold(0.0, f64::max);
    Ok(DecayFit { exponent, residual })
}

/// Samples with `t0 ≤ t ≤ t1`.
pub fn window(series: &[(f64, f64)], t0: f64, t1: f64) -> Vec<(f64, f64)> {
    series.iter().copied().filter(|&(t, _)| t >= t0 && t <= t1).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsConfig {
    pub delta: f64,
    pub s0: f64,
    pub s: f64,
    pub projection: Projection,
    pub spec: ParaproductSpec,
}

impl DiagnosticsConfig {
    /// `δ = 0.05`, `s0 = 0.5`, `s = α + 2.5`, smooth blocks, `M = 1`.
    pub fn for_model(model: &AlphaModel) -> Self {
        Self {
            delta: 0.05,
            s0: 0.5,
            s: model.alpha() + 2.5,
            projection: Projection::Smooth,
            spec: ParaproductSpec::new(1.0).expect("M = 1 is valid"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub mass: f64,
    /// `(s, ‖φ‖_{Ḣ^s})` for `s0` and `s`.
    pub hs_norms: Vec<(f64, f64)>,
    /// Absent at `α = 1`, where `L` is not available.
    pub x: Option<f64>,
    pub y: f64,
    pub y_split: f64,
    /// Modified energy `E(φ)`.
    pub energy: f64,
    /// Higher energy `E^{(s)}(φ)`.
    pub energy_s: f64,
    pub envelope: Vec<(f64, f64)>,
}

impl DiagnosticsRecord {
    pub fn measure(phi: &FourierField, t: f64, model: &AlphaModel, cfg: &DiagnosticsConfig) -> Result<Self> {
        let (a, b) = control_norms(phi, model, cfg.projection);
        let nf = build_normalform(phi, model)?;
        let energy = nf.modified_energy(phi, &cfg.spec)?;
        let energy_s = if model.branch() == Branch::Generic {
            nf.higher_energy(phi, cfg.s, model, &cfg.spec)?
        } else {
            hs_norm(phi, cfg.s).powi(2)
        };
        Ok(Self {
            t,
            a,
            b,
            mass: phi.l2_norm_sq(),
            hs_norms: vec![(cfg.s0, hs_norm(phi, cfg.s0)), (cfg.s, hs_norm(phi, cfg.s))],
            x: match model.branch() {
                Branch::LogSqg => None,
                _ => Some(norm_x(phi, t, model, cfg.s0, cfg.s)?),
            },
            y: norm_y(phi, model, cfg.delta),
            y_split: norm_y_split(phi, model, cfg.delta),
            energy,
            energy_s,
            envelope: frequency_envelope(phi, cfg.s0, cfg.s, cfg.delta, cfg.projection),
        })
    }

    /// `t,A,B,mass,hs:{s}…,X,Y,E,E_s,env:{λ}…`
    pub fn csv_header(&self) -> String {
        let mut h = String::from("t,A,B,mass");
        for (s, _) in &self.hs_norms {
            let _ = write!(h, ",hs:{s}");
        }
        h.push_str(",X,Y,E,E_s");
        for (lambda, _) in &self.envelope {
            let _ = write!(h, ",env:{lambda}");
        }
        h
    }

    /// Values with 17 significant digits; an absent `X` is an empty column.
    pub fn csv_row(&self) -> String {
        let num = |v: f64| format!("{v:.16e}");
        let mut cols: Vec<String> = [self.t, self.a, self.b, self.mass].into_iter().map(num).collect();
        cols.extend(self.hs_norms.iter().map(|p| num(p.1)));
        cols.push(self.x.map(num).unwrap_or_default());
        cols.extend([self.y, self.energy, self.energy_s].into_iter().map(num));
        cols.extend(self.envelope.iter().map(|p| num(p.1)));
        cols.join(",")
    }
}
