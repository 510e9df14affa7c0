//! Quadrature of the scalar symbol integrals: the resonance kernel
//! `Ω(ξ1, ξ2)` and the cubic coefficient `q(ξ)`.
//!
//! After pairing `±y` both become half-line integrals of the form
//! `∫_0^∞ y^{−p} g(y) dy` with `g` a finite trigonometric sum vanishing to
//! some order at 0. Three pieces: the Taylor series of `g` on `[0, y0]`,
//! Gauss–Legendre panels on `[y0, Y]`, and the asymptotic
//! integration-by-parts series on `[Y, ∞)`.

use num_complex::Complex64;

use crate::error::{GsqgError, Result};
use crate::gauss::GaussLegendre;
use crate::symbols::{AlphaModel, Branch};

/// Resolution knobs for the scalar symbol integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelRule {
    /// Gauss–Legendre order per panel.
    pub order: usize,
    /// Uniform panel width in units of `1/ω_max`.
    pub panel: f64,
    /// Start of the asymptotic tail in units of `1/ω_min`.
    pub tail: f64,
    /// Allowed difference between the rule and its refinement.
    pub tolerance: f64,
}

impl Default for KernelRule {
    fn default() -> Self {
        Self {
            order: 12,
            panel: 2.0,
            tail: 200.0,
            tolerance: 1e-9,
        }
    }
}

impl KernelRule {
    fn refined(&self) -> Self {
        Self {
            order: self.order + 4,
            panel: self.panel / 2.0,
            tail: self.tail * 2.0,
            tolerance: self.tolerance,
        }
    }
}

/// `const + Σ s_i sin(ω_i y) + Σ c_i cos(ω_i y)`.
#[derive(Debug, Clone, Default)]
struct TrigSum {
    constant: f64,
    sines: Vec<(f64, f64)>,
    cosines: Vec<(f64, f64)>,
}

impl TrigSum {
    fn frequencies(&self) -> impl Iterator<Item = f64> + '_ {
        self.sines
            .iter()
            .chain(&self.cosines)
            .map(|&(_, w)| w.abs())
            .filter(|w| *w > 0.0)
    }

    /// Taylor coefficient of `y^k`.
    fn taylor(&self, k: usize) -> f64 {
        let mut fact = 1.0;
        for i in 2..=k {
            fact *= i as f64;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        let terms = if k % 2 == 1 { &self.sines } else { &self.cosines };
        let mut s: f64 = terms.iter().map(|&(amp, w)| amp * w.powi(k as i32)).sum();
        if k == 0 {
            s += self.constant;
        }
        sign * s / fact
    }
}

/// `∫_0^∞ y^{−p} g(y) dy`, where `g` vanishes to order `lowest` at 0.
/// The Taylor series handles `[0, y0]`; beyond `y0` every term is integrated
/// on its own, in units of its own period.
fn half_line_integral(g: &TrigSum, p: f64, lowest: usize, rule: &KernelRule) -> f64 {
    let w_max = g.frequencies().fold(0.0, f64::max);
    if w_max == 0.0 {
        return 0.0;
    }
    let y0 = 0.5 / w_max;

    let mut near = 0.0;
    let mut k = lowest;
    loop {
        let term = g.taylor(k) * y0.powf(k as f64 - p + 1.0) / (k as f64 - p + 1.0);
        near += term;
        if (k > lowest + 6 && term.abs() < 1e-18 * near.abs().max(1e-300)) || k > 80 {
            break;
        }
        k += 1;
    }

    let mut far = g.constant * y0.powf(1.0 - p) / (p - 1.0);
    for &(amp, w) in &g.sines {
        far += amp * oscillatory_from(p, w, y0, rule).im;
    }
    for &(amp, w) in &g.cosines {
        far += amp * oscillatory_from(p, w, y0, rule).re;
    }
    near + far
}

/// `∫_{y0}^∞ y^{−p} e^{iωy} dy` (`p > 1`), evaluated in the scaled variable `u = |ω|y`.
pub(crate) fn oscillatory_from(p: f64, w: f64, y0: f64, rule: &KernelRule) -> Complex64 {
    if w == 0.0 {
        return Complex64::new(y0.powf(1.0 - p) / (p - 1.0), 0.0);
    }
    let aw = w.abs();
    let sign = w.signum();
    let u0 = aw * y0;
    let big_u = rule.tail.max(u0);
    let gl = GaussLegendre::new(rule.order);
    let mut re = 0.0;
    let mut im = 0.0;
    let mut a = u0;
    while a < big_u {
        let b = (a + a.min(rule.panel)).min(big_u);
        for (u, wt) in gl.mapped(a, b) {
            let c = wt * u.powf(-p);
            let (s, co) = u.sin_cos();
            re += c * co;
            im += c * s;
        }
        a = b;
    }
    let unit = Complex64::new(re, sign * im) + oscillatory_tail(p, sign, big_u);
    unit * aw.powf(p - 1.0)
}

/// `∫_Y^∞ y^{−p} e^{iωy} dy` by the asymptotic series
/// `−e^{iωY} Σ_j (p)_j Y^{−p−j} / (iω)^{j+1}`.
fn oscillatory_tail(p: f64, w: f64, big_y: f64) -> Complex64 {
    if w == 0.0 {
        return Complex64::new(big_y.powf(1.0 - p) / (p - 1.0), 0.0);
    }
    let iw = Complex64::new(0.0, w);
    let mut rising = 1.0;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut denom = iw;
    for j in 0..12 {
        sum += rising * big_y.powf(-p - j as f64) / denom;
        rising *= p + j as f64;
        denom *= iw;
    }
    -Complex64::from_polar(1.0, w * big_y) * sum
}

fn with_refinement(rule: &KernelRule, f: impl Fn(&KernelRule) -> f64) -> Result<f64> {
    let coarse = f(rule);
    let fine = f(&rule.refined());
    let difference = (coarse - fine).abs();
    let tolerance = rule.tolerance * (1.0 + fine.abs());
    if difference > tolerance || !fine.is_finite() {
        return Err(GsqgError::QuadratureDiverged {
            difference,
            tolerance,
        });
    }
    Ok(fine)
}

fn require_generic(model: &AlphaModel) -> Result<()> {
    if model.branch() == Branch::Generic {
        Ok(())
    } else {
        Err(GsqgError::UnsupportedBranch(format!(
            "symbol quadrature needs the generic branch, got {:?}",
            model.branch()
        )))
    }
}

/// `Ω(ξ1, ξ2) = ∫ sgn(y)|y|^{1−α} (e^{iξ1 y}−1)(e^{iξ2 y}−1) / y² dy`
/// `= 2i ∫_0^∞ y^{−1−α} [sin(ξ1+ξ2)y − sin ξ1 y − sin ξ2 y] dy`.
pub fn resonance_kernel(xi1: f64, xi2: f64, model: &AlphaModel, rule: &KernelRule) -> Result<Complex64> {
    require_generic(model)?;
    let g = TrigSum {
        constant: 0.0,
        sines: vec![(1.0, xi1 + xi2), (-1.0, xi1), (-1.0, xi2)],
        cosines: Vec::new(),
    };
    let p = 1.0 + model.alpha();
    let v = with_refinement(rule, |r| half_line_integral(&g, p, 3, r))?;
    Ok(Complex64::new(0.0, 2.0 * v))
}

/// `q(ξ) = ∫ sgn(y)|y|^{1−α} |b|² b dy` with `b = (e^{iξy} − 1)/y`, which
/// pairs to `−16 ∫_0^∞ sin⁴(ξy/2) y^{−2−α} dy` (real, even, degree `1+α`).
pub fn cubic_coefficient_q(xi: f64, model: &AlphaModel, rule: &KernelRule) -> Result<Complex64> {
    require_generic(model)?;
    if xi == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // sin⁴(u) = (3 − 4 cos 2u + cos 4u) / 8
    let g = TrigSum {
        constant: 3.0,
        sines: Vec::new(),
        cosines: vec![(-4.0, xi), (1.0, 2.0 * xi)],
    };
    let p = 2.0 + model.alpha();
    let v = with_refinement(rule, |r| half_line_integral(&g, p, 4, r))?;
    Ok(Complex64::new(-2.0 * v, 0.0))
}

/// Coefficient of the resonant cubic term in the profile equation,
/// `γ̇ = i κ(v) t^{−1} |γ|² γ`, with `κ(v) = (F″(0)/2) q(ξ_v) ξ_v`.
pub fn phase_rotation_rate(v: f64, model: &AlphaModel, rule: &KernelRule) -> Result<f64> {
    let xi = model.xi_of_velocity(v)?;
    let q = cubic_coefficient_q(xi, model, rule)?;
    Ok(0.5 * model.profile_curvature() * q.re * xi)
}
