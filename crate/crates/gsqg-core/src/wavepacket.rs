//! Wave-packet testing: velocity partitions, linear packets `𝐮^v`, the
//! profile `γ^λ(t, v) = ⟨P_λφ, 𝐮^v⟩`, the residual of the asymptotic
//! equation `γ̇ = iκ(v) t^{−1} |γ|²γ`, and scattering-profile extraction.
//!
//! Packets sit at the negative frequency `ξ_v`, so `I_λ = [−λ, −λ/2]`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GsqgError, Result};
use crate::kernel_quad::{phase_rotation_rate, KernelRule};
use crate::profiles::{bump, BUMP_INTEGRAL};
use crate::spectral::{block_symbol, FourierField, Grid, Projection};
use crate::symbols::AlphaModel;

/// Packets are trusted for `t ≥ VALIDITY_CONSTANT · λ^{−α}`.
pub const VALIDITY_CONSTANT: f64 = 4.0;
/// Velocity samples per block.
pub const SAMPLES_PER_BLOCK: usize = 16;
/// Below this mean modulus the profile is reported as vanishing.
pub const AMPLITUDE_FLOOR: f64 = 1e-12;
/// Largest relative spread of `|γ|` accepted as a plateau.
pub const MAX_MODULUS_SPREAD: f64 = 0.2;
/// Exponent weight `δ` in the residual normalization `t^{1+δ/2}`.
pub const RESIDUAL_DELTA: f64 = 0.05;

/// Velocity cell of the dyadic block `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityPartition {
    pub lambda: f64,
    /// `I_λ = [−λ, −λ/2]`.
    pub frequencies: (f64, f64),
    /// `J_λ = a′(I_λ)`, ordered.
    pub velocities: (f64, f64),
    /// `a′(−0.7λ)`, the centre of the block plateau.
    pub reference: f64,
}

impl VelocityPartition {
    pub fn new(lambda: f64, model: &AlphaModel) -> Result<Self> {
        model.xi_of_velocity(model.group_velocity(-lambda))?;
        let a = model.group_velocity(-lambda);
        let b = model.group_velocity(-lambda / 2.0);
        Ok(Self {
            lambda,
            frequencies: (-lambda, -lambda / 2.0),
            velocities: (a.min(b), a.max(b)),
            reference: model.group_velocity(-0.7 * lambda),
        })
    }

    pub fn width(&self) -> f64 {
        self.velocities.1 - self.velocities.0
    }

    /// Midpoints of `SAMPLES_PER_BLOCK` equal cells of `J_λ`.
    pub fn samples(&self) -> Vec<f64> {
        let h = self.width() / SAMPLES_PER_BLOCK as f64;
        (0..SAMPLES_PER_BLOCK)
            .map(|k| self.velocities.0 + (k as f64 + 0.5) * h)
            .collect()
    }

    /// Partition-of-unity weight `χ_λ(v)`: the smooth block symbol at `ξ_v`,
    /// supported on a slight enlargement of `J_λ`.
    pub fn weight(&self, v: f64, model: &AlphaModel) -> f64 {
        match model.xi_of_velocity(v) {
            Ok(xi) => block_symbol(xi, self.lambda, Projection::Smooth),
            Err(_) => 0.0,
        }
    }

    /// `(t, v) ∈ 𝒟`.
    pub fn is_valid(&self, t: f64, model: &AlphaModel) -> bool {
        t >= VALIDITY_CONSTANT * self.lambda.powf(-model.alpha())
    }
}

/// Complex packet sampled on the grid.
#[derive(Debug, Clone)]
pub struct Packet {
    pub re: FourierField,
    pub im: FourierField,
    pub center: f64,
    /// Half-width `t^{1/2}|a″(ξ_v)|^{1/2}` of the support.
    pub half_width: f64,
    pub carrier: f64,
}

/// `𝐮^v = |a″(ξ_v)|^{−1/2} χ(y) e^{itΦ(x/t)}`, `y = (x − vt)/(t|a″(ξ_v)|)^{1/2}`, `∫χ = 1`.
pub fn build_packet(grid: &std::sync::Arc<Grid>, v: f64, t: f64, model: &AlphaModel) -> Result<Packet> {
    if !(t > 0.0) {
        return Err(GsqgError::PacketDoesNotFit(format!("packets need t > 0, got {t}")));
    }
    let xi = model.xi_of_velocity(v)?;
    let curv = model.curvature(xi).abs();
    let center = v * t;
    let half_width = (t * curv).sqrt();
    let l = grid.half_length();
    if center - half_width <= -l || center + half_width >= l {
        return Err(GsqgError::PacketDoesNotFit(format!(
            "support [{}, {}] leaves [−{l}, {l})",
            center - half_width,
            center + half_width
        )));
    }
    if xi.abs() >= grid.nyquist() {
        return Err(GsqgError::PacketDoesNotFit(format!(
            "carrier |ξ_v| = {} is not resolved (Nyquist {})",
            xi.abs(),
            grid.nyquist()
        )));
    }
    let amp = 1.0 / (curv.sqrt() * BUMP_INTEGRAL);
    let mut re = Vec::with_capacity(grid.n());
    let mut im = Vec::with_capacity(grid.n());
    for x in grid.xs() {
        let y = (x - center) / half_width;
        let chi = bump(y);
        if chi == 0.0 {
            re.push(0.0);
            im.push(0.0);
            continue;
        }
        let z = Complex64::from_polar(amp * chi, t * model.packet_phase(x / t)?);
        re.push(z.re);
        im.push(z.im);
    }
    Ok(Packet {
        re: FourierField::from_values(grid, re),
        im: FourierField::from_values(grid, im),
        center,
        half_width,
        carrier: xi,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSample {
    pub t: f64,
    pub v: f64,
    pub value: Complex64,
    /// `(t, v) ∈ 𝒟`; invalid samples are still computed.
    pub valid: bool,
}

/// `γ^λ(t, v) = ∫ P_λφ · conj(𝐮^v) dx`.
pub fn profile_gamma(phi: &FourierField, lambda: f64, v: f64, t: f64, model: &AlphaModel) -> Result<GammaSample> {
    Ok(profile_samples(phi, lambda, &[v], t, model)?[0])
}

fn pair_with(f: &FourierField, packet: &Packet) -> Complex64 {
    Complex64::new(f.inner(&packet.re), -f.inner(&packet.im))
}

/// `γ^λ(t, v)` at each velocity, in input order; `P_λφ` is formed once.
pub fn profile_samples(
    phi: &FourierField,
    lambda: f64,
    velocities: &[f64],
    t: f64,
    model: &AlphaModel,
) -> Result<Vec<GammaSample>> {
    let part = VelocityPartition::new(lambda, model)?;
    let piece = phi.littlewood_paley(lambda, Projection::Smooth)?;
    let valid = part.is_valid(t, model);
    velocities
        .par_iter()
        .map(|&v| {
            let packet = build_packet(phi.grid(), v, t, model)?;
            Ok(GammaSample {
                t,
                v,
                value: pair_with(&piece, &packet),
                valid,
            })
        })
        .collect()
}

/// `∫_{J_λ} |γ^λ(t, v)|² dv` by the midpoint rule on the block samples.
pub fn block_profile_mass(phi: &FourierField, lambda: f64, t: f64, model: &AlphaModel) -> Result<f64> {
    let part = VelocityPartition::new(lambda, model)?;
    let h = part.width() / SAMPLES_PER_BLOCK as f64;
    Ok(profile_samples(phi, lambda, &part.samples(), t, model)?
        .iter()
        .map(|g| g.value.norm_sqr() * h)
        .sum())
}

/// Derivative at the middle of five nodes from the Lagrange interpolant.
fn five_point_derivative(s: &[f64], f: &[Complex64]) -> Complex64 {
    let c = s[2];
    let mut out = Complex64::new(0.0, 0.0);
    for j in 0..5 {
        let mut w = 0.0;
        for m in 0..5 {
            if m == j {
                continue;
            }
            let mut p = 1.0 / (s[j] - s[m]);
            for k in 0..5 {
                if k != j && k != m {
                    p *= (c - s[k]) / (s[j] - s[k]);
                }
            }
            w += p;
        }
        out += f[j] * w;
    }
    out
}

fn sorted_series(series: &[(f64, Complex64)], need: usize) -> Result<Vec<(f64, Complex64)>> {
    if series.len() < need {
        return Err(GsqgError::InsufficientSeries {
            got: series.len(),
            need,
        });
    }
    let mut s = series.to_vec();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(s)
}

/// `max t^{1+δ/2} |γ̇ − iκ(v) t^{−1}|γ|²γ|` over interior samples; `γ̇` is the
/// fourth-order centered difference in `ln t`.
pub fn ode_residual(series: &[(f64, Complex64)], v: f64, model: &AlphaModel) -> Result<f64> {
    let s = sorted_series(series, 8)?;
    let kappa = phase_rotation_rate(v, model, &KernelRule::default())?;
    let logs: Vec<f64> = s.iter().map(|p| p.0.ln()).collect();
    let vals: Vec<Complex64> = s.iter().map(|p| p.1).collect();
    let mut worst: f64 = 0.0;
    for k in 2..s.len() - 2 {
        let t = s[k].0;
        let dgamma = five_point_derivative(&logs[k - 2..=k + 2], &vals[k - 2..=k + 2]) / t;
        let g = vals[k];
        let rhs = Complex64::new(0.0, kappa / t) * g * g.norm_sqr();
        worst = worst.max((dgamma - rhs).norm() * t.powf(1.0 + RESIDUAL_DELTA / 2.0));
    }
    Ok(worst)
}

/// Least-squares slope of `y` against `x`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// `arg γ` made continuous along the series.
pub fn unwrapped_phase(values: &[Complex64]) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(values.len());
    for z in values {
        let raw = z.arg();
        let next = match out.last() {
            None => raw,
            Some(&prev) => {
                let turns = ((prev - raw) / std::f64::consts::TAU).round();
                raw + turns * std::f64::consts::TAU
            }
        };
        out.push(next);
    }
    out
}

/// Regression slope of `arg γ` against `ln t`.
pub fn phase_slope(series: &[(f64, Complex64)]) -> Result<f64> {
    let s = sorted_series(series, 4)?;
    let logs: Vec<f64> = s.iter().map(|p| p.0.ln()).collect();
    let phase = unwrapped_phase(&s.iter().map(|p| p.1).collect::<Vec<_>>());
    Ok(slope(&logs, &phase))
}

/// Regression slope of `ln|γ|` against `ln t`.
pub fn modulus_slope(series: &[(f64, Complex64)]) -> Result<f64> {
    let s = sorted_series(series, 4)?;
    let logs: Vec<f64> = s.iter().map(|p| p.0.ln()).collect();
    let mods: Vec<f64> = s.iter().map(|p| p.1.norm().ln()).collect();
    Ok(slope(&logs, &mods))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringFit {
    pub w: Complex64,
    /// `max_k |γ(t_k) − W e^{iκ|W|² ln t_k}| / |W|`.
    pub phase_fit_residual: f64,
    /// Predicted `d arg γ / d ln t = κ(v)|W|²`.
    pub predicted_phase_slope: f64,
    /// `|W|` fell below [`AMPLITUDE_FLOOR`].
    pub vanishing: bool,
}

/// Inverts `γ̃(t) = W e^{iκ(v) ln t |W|²}` on a series spanning at least one e-fold.
pub fn extract_scattering_profile(series: &[(f64, Complex64)], v: f64, model: &AlphaModel) -> Result<ScatteringFit> {
    let s = sorted_series(series, 8)?;
    let (t0, t1) = (s[0].0, s[s.len() - 1].0);
    if t1 / t0 < std::f64::consts::E * (1.0 - 1e-9) {
        return Err(GsqgError::InsufficientSeries {
            got: s.len(),
            need: s.len() + 1,
        });
    }
    let kappa = phase_rotation_rate(v, model, &KernelRule::default())?;
    let mods: Vec<f64> = s.iter().map(|p| p.1.norm()).collect();
    let mean = mods.iter().sum::<f64>() / mods.len() as f64;
    if mean < AMPLITUDE_FLOOR {
        return Ok(ScatteringFit {
            w: Complex64::new(0.0, 0.0),
            phase_fit_residual: 0.0,
            predicted_phase_slope: 0.0,
            vanishing: true,
        });
    }
    let lo = mods.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = mods.iter().copied().fold(0.0, f64::max);
    let spread = (hi - lo) / mean;
    if spread > MAX_MODULUS_SPREAD {
        return Err(GsqgError::NotInScatteringRegime { spread });
    }
    let rate = kappa * mean * mean;
    // Circular mean of the de-rotated samples fixes arg W.
    let mut acc = Complex64::new(0.0, 0.0);
    for &(t, g) in &s {
        acc += g * Complex64::from_polar(1.0, -rate * t.ln());
    }
    let w = Complex64::from_polar(mean, acc.arg());
    let residual = s
        .iter()
        .map(|&(t, g)| (g - w * Complex64::from_polar(1.0, rate * t.ln())).norm() / mean)
        .fold(0.0, f64::max);
    Ok(ScatteringFit {
        w,
        phase_fit_residual: residual,
        predicted_phase_slope: rate,
        vanishing: false,
    })
}
