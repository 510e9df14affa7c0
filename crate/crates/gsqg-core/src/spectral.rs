//! Periodic grid, spectral fields, Fourier multipliers, Littlewood–Paley
//! pieces and translations.
//!
//! Normalization: `spectrum[k] = dx Σ_j values[j] e^{−iξ_k x_j}` with
//! `x_j = −L + j dx`; the inverse divides by `2L`. Spectra are stored in
//! FFT order, index `j` carrying the wavenumber `πk/L` with `k = j` for
//! `j < n/2` and `k = j − n` otherwise (the Nyquist index is `k = −n/2`).

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{GsqgError, Result};
use crate::profiles::radial_step;

pub struct Grid {
    n: usize,
    half_length: f64,
    dx: f64,
    wavenumbers: Vec<f64>,
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Grid")
            .field("n", &self.n)
            .field("half_length", &self.half_length)
            .finish()
    }
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.half_length == other.half_length
    }
}

impl Grid {
    pub fn new(n: usize, half_length: f64) -> Result<Arc<Self>> {
        if n < 4 || !n.is_power_of_two() {
            return Err(GsqgError::InvalidGrid(format!(
                "n_points must be a power of two >= 4, got {n}"
            )));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(GsqgError::InvalidGrid(format!(
                "half_length must be positive, got {half_length}"
            )));
        }
        let dx = 2.0 * half_length / n as f64;
        let wavenumbers = (0..n)
            .map(|j| PI * signed_index(j, n) as f64 / half_length)
            .collect();
        let mut planner = FftPlanner::new();
        Ok(Arc::new(Self {
            n,
            half_length,
            dx,
            wavenumbers,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Wavenumbers in FFT order.
    pub fn wavenumbers(&self) -> &[f64] {
        &self.wavenumbers
    }

    pub fn nyquist(&self) -> f64 {
        PI * (self.n / 2) as f64 / self.half_length
    }

    /// Smallest nonzero wavenumber.
    pub fn fundamental(&self) -> f64 {
        PI / self.half_length
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.dx
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n).map(|j| self.x(j)).collect()
    }

    pub fn nyquist_index(&self) -> usize {
        self.n / 2
    }

    /// Physical samples to spectrum (in place).
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.fwd.process(buf);
        let dx = self.dx;
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= if j % 2 == 0 { dx } else { -dx };
        }
    }

    /// Spectrum to physical samples (in place).
    pub fn inverse(&self, buf: &mut [Complex64]) {
        let s = 1.0 / (2.0 * self.half_length);
        for (j, z) in buf.iter_mut().enumerate() {
            *z *= if j % 2 == 0 { s } else { -s };
        }
        self.inv.process(buf);
    }

    pub fn same_as(&self, other: &Grid) -> bool {
        self == other
    }
}

/// Signed frequency index of FFT slot `j`.
pub fn signed_index(j: usize, n: usize) -> i64 {
    if j < n / 2 {
        j as i64
    } else {
        j as i64 - n as i64
    }
}

/// FFT slot of signed frequency index `k` (`−n/2 ≤ k < n/2`).
pub fn slot(k: i64, n: usize) -> usize {
    if k >= 0 {
        k as usize
    } else {
        (k + n as i64) as usize
    }
}

/// Profile of frequency cutoffs (dyadic pieces and `P_{>M}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `β(|ξ|/λ) − β(2|ξ|/λ)` with the smooth radial step; plateau on `[0.6λ, 0.8λ]`.
    Smooth,
    /// Indicator of `λ/2 ≤ |ξ| < λ`.
    Sharp,
}

/// Symbol of the dyadic piece `P_λ`.
pub fn block_symbol(xi: f64, lambda: f64, projection: Projection) -> f64 {
    let r = xi.abs() / lambda;
    match projection {
        Projection::Smooth => radial_step(r) - radial_step(2.0 * r),
        Projection::Sharp => {
            if (0.5..1.0).contains(&r) {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Dyadic block frequencies `λ = 2^j` covering every nonzero grid mode.
pub fn dyadic_blocks(grid: &Grid, projection: Projection) -> Vec<f64> {
    let lo = grid.fundamental();
    let hi = grid.nyquist();
    let (j0, j1) = match projection {
        Projection::Smooth => (
            (lo / 0.6).log2().floor() as i32,
            (hi / 0.8).log2().ceil() as i32,
        ),
        Projection::Sharp => (
            lo.log2().floor() as i32 + 1,
            hi.log2().floor() as i32 + 1,
        ),
    };
    (j0..=j1).map(|j| 2f64.powi(j)).collect()
}

/// A real field on a periodic grid with its spectrum.
#[derive(Clone, Debug)]
pub struct FourierField {
    grid: Arc<Grid>,
    values: Vec<f64>,
    spectrum: Vec<Complex64>,
}

impl FourierField {
    pub fn from_values(grid: &Arc<Grid>, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), grid.n(), "sample count must match the grid");
        let mut buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        grid.forward(&mut buf);
        Self {
            grid: grid.clone(),
            values,
            spectrum: buf,
        }
    }

    /// Builds the real field whose spectrum is the Hermitian part of `spectrum`.
    pub fn from_spectrum(grid: &Arc<Grid>, spectrum: Vec<Complex64>) -> Self {
        let n = grid.n();
        assert_eq!(spectrum.len(), n);
        let mut sym = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            let jm = (n - j) % n;
            sym[j] = 0.5 * (spectrum[j] + spectrum[jm].conj());
        }
        let mut buf = sym.clone();
        grid.inverse(&mut buf);
        let values = buf.iter().map(|z| z.re).collect();
        Self {
            grid: grid.clone(),
            values,
            spectrum: sym,
        }
    }

    pub fn from_fn(grid: &Arc<Grid>, f: impl Fn(f64) -> f64) -> Self {
        let values = (0..grid.n()).map(|j| f(grid.x(j))).collect();
        Self::from_values(grid, values)
    }

    pub fn zeros(grid: &Arc<Grid>) -> Self {
        Self {
            grid: grid.clone(),
            values: vec![0.0; grid.n()],
            spectrum: vec![Complex64::new(0.0, 0.0); grid.n()],
        }
    }

    pub fn grid(&self) -> &Arc<Grid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn check_grid(&self, other: &FourierField) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(GsqgError::GridMismatch)
        }
    }

    /// `∫ f² dx` by the trapezoid rule (exact for resolved fields).
    pub fn l2_norm_sq(&self) -> f64 {
        self.grid.dx() * self.values.iter().map(|v| v * v).sum::<f64>()
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sq().sqrt()
    }

    /// `(2L)^{-1} Σ |spectrum|²`.
    pub fn spectral_norm_sq(&self) -> f64 {
        self.spectrum.iter().map(|z| z.norm_sqr()).sum::<f64>() / (2.0 * self.grid.half_length())
    }

    /// `∫ f g dx`.
    pub fn inner(&self, other: &FourierField) -> f64 {
        self.grid.dx()
            * self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a * b)
                .sum::<f64>()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_values(&self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &FourierField, f: impl Fn(f64, f64) -> f64) -> Self {
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_values(&self.grid, values)
    }

    /// Linear combination `a·self + b·other`, computed on both representations.
    pub fn lincomb(&self, a: f64, other: &FourierField, b: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(x, y)| a * x + b * y)
                .collect(),
            spectrum: self
                .spectrum
                .iter()
                .zip(&other.spectrum)
                .map(|(x, y)| a * x + b * y)
                .collect(),
        }
    }

    pub fn add(&self, other: &FourierField) -> Self {
        self.lincomb(1.0, other, 1.0)
    }

    pub fn sub(&self, other: &FourierField) -> Self {
        self.lincomb(1.0, other, -1.0)
    }

    pub fn scale(&self, a: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| a * v).collect(),
            spectrum: self.spectrum.iter().map(|z| a * z).collect(),
        }
    }

    /// Pointwise product on the grid (no dealiasing).
    pub fn pointwise_mul(&self, other: &FourierField) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    /// `spectrum_out[k] = m(ξ_k) spectrum_in[k]`. The Nyquist slot uses `Re m`.
    pub fn apply_multiplier(&self, m: impl Fn(f64) -> Complex64) -> Result<Self> {
        let grid = &self.grid;
        let ny = grid.nyquist_index();
        let mut out = Vec::with_capacity(grid.n());
        for (j, (&xi, z)) in grid.wavenumbers().iter().zip(&self.spectrum).enumerate() {
            let mut s = m(xi);
            if !(s.re.is_finite() && s.im.is_finite()) {
                return Err(GsqgError::SingularMultiplier { xi });
            }
            if j == ny {
                s = Complex64::new(s.re, 0.0);
            }
            out.push(s * z);
        }
        Ok(Self::from_spectrum(grid, out))
    }

    /// Real-symbol multiplier (infallible when `m` is finite by construction).
    pub fn apply_real_multiplier(&self, m: impl Fn(f64) -> f64) -> Self {
        let out = self
            .grid
            .wavenumbers()
            .iter()
            .zip(&self.spectrum)
            .map(|(&xi, z)| m(xi) * z)
            .collect();
        Self::from_spectrum(&self.grid, out)
    }

    pub fn derivative(&self) -> Self {
        let ny = self.grid.nyquist_index();
        let out = self
            .grid
            .wavenumbers()
            .iter()
            .zip(&self.spectrum)
            .enumerate()
            .map(|(j, (&xi, z))| {
                if j == ny {
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new(0.0, xi) * z
                }
            })
            .collect();
        Self::from_spectrum(&self.grid, out)
    }

    /// `∂x^{-1}` with the zero mode set to zero (mean-zero antiderivative).
    pub fn antiderivative(&self) -> Self {
        let ny = self.grid.nyquist_index();
        let out = self
            .grid
            .wavenumbers()
            .iter()
            .zip(&self.spectrum)
            .enumerate()
            .map(|(j, (&xi, z))| {
                if xi == 0.0 || j == ny {
                    Complex64::new(0.0, 0.0)
                } else {
                    z / Complex64::new(0.0, xi)
                }
            })
            .collect();
        Self::from_spectrum(&self.grid, out)
    }

    /// `|D|^s`; the zero mode is set to zero for `s ≠ 0`.
    pub fn abs_d_pow(&self, s: f64) -> Self {
        if s == 0.0 {
            return self.clone();
        }
        self.apply_real_multiplier(|xi| if xi == 0.0 { 0.0 } else { xi.abs().powf(s) })
    }

    /// Exact spectral shift `f(· + y)`.
    pub fn translate(&self, y: f64) -> Self {
        if y == 0.0 {
            return self.clone();
        }
        self.apply_multiplier(|xi| Complex64::from_polar(1.0, xi * y))
            .expect("unit-modulus multiplier is finite")
    }

    /// Littlewood–Paley piece `P_λ f`.
    pub fn littlewood_paley(&self, lambda: f64, projection: Projection) -> Result<Self> {
        check_block(&self.grid, lambda, projection)?;
        Ok(self.apply_real_multiplier(|xi| block_symbol(xi, lambda, projection)))
    }

    /// Zero-mode part `P_0 f` (the mean).
    pub fn zero_mode(&self) -> Self {
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.n()];
        out[0] = self.spectrum[0];
        Self::from_spectrum(&self.grid, out)
    }

    /// Removes the upper third of the spectrum (2/3 rule).
    pub fn two_thirds_filtered(&self) -> Self {
        let n = self.grid.n();
        let cut = (n / 3) as i64;
        let out = self
            .spectrum
            .iter()
            .enumerate()
            .map(|(j, z)| {
                if signed_index(j, n).abs() > cut {
                    Complex64::new(0.0, 0.0)
                } else {
                    *z
                }
            })
            .collect();
        Self::from_spectrum(&self.grid, out)
    }
}

fn check_block(grid: &Grid, lambda: f64, projection: Projection) -> Result<()> {
    let j = lambda.log2();
    if !(lambda > 0.0 && (j - j.round()).abs() < 1e-12) {
        return Err(GsqgError::BlockOutOfRange {
            lambda,
            reason: "not a power of two".into(),
        });
    }
    let top = *dyadic_blocks(grid, projection).last().expect("grid has blocks");
    if lambda > top * (1.0 + 1e-12) {
        return Err(GsqgError::BlockOutOfRange {
            lambda,
            reason: format!("above the top block {top} for Nyquist {}", grid.nyquist()),
        });
    }
    Ok(())
}
