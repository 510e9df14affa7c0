//! M-dependent paraproducts `T_a u` and the balanced remainder `Π(a, u)`.
//!
//! `T_a u` has spectrum
//! `P(ξ) Σ_η χ(|ξ−η|² / (M² + |ξ+η|²)) â(ξ−η) P(η) û(η) / 2L`,
//! where `P` is the high-pass `P_{>M}`. The sum is a truncated linear
//! convolution: no wrap-around, Nyquist slots ignored. The sparse list of
//! contributing `(ξ, η)` pairs is cached per grid and spec.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::error::{GsqgError, Result};
use crate::profiles::{para_cutoff, radial_step};
use crate::spectral::{signed_index, slot, FourierField, Grid, Projection};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParaproductSpec {
    m: f64,
    projection: Projection,
}

impl ParaproductSpec {
    pub fn new(m: f64) -> Result<Self> {
        Self::with_projection(m, Projection::Smooth)
    }

    pub fn with_projection(m: f64, projection: Projection) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(GsqgError::InvalidGrid(format!(
                "paraproduct frequency M must be positive, got {m}"
            )));
        }
        Ok(Self { m, projection })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn projection(&self) -> Projection {
        self.projection
    }

    /// Symbol of `P_{>M}`.
    pub fn high_pass(&self, xi: f64) -> f64 {
        match self.projection {
            Projection::Smooth => 1.0 - radial_step(xi / self.m),
            Projection::Sharp => {
                if xi.abs() > self.m {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Cutoff `χ̃(ξ−η, ξ+η)`.
    pub fn cutoff(&self, xi: f64, eta: f64) -> f64 {
        let d = xi - eta;
        let s = xi + eta;
        para_cutoff(d * d / (self.m * self.m + s * s))
    }

    pub fn project_high(&self, u: &FourierField) -> FourierField {
        u.apply_real_multiplier(|xi| self.high_pass(xi))
    }

    pub fn project_low(&self, u: &FourierField) -> FourierField {
        u.apply_real_multiplier(|xi| 1.0 - self.high_pass(xi))
    }
}

/// Sparse coupling list: `out[k] += w · a[k−j] · u[j]`.
struct Plan {
    out: Vec<u32>,
    low: Vec<u32>,
    high: Vec<u32>,
    weight: Vec<f64>,
}

type PlanKey = (usize, u64, u64, bool);

fn plan_cache() -> &'static Mutex<HashMap<PlanKey, Arc<Plan>>> {
    static CACHE: OnceLock<Mutex<HashMap<PlanKey, Arc<Plan>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn plan_for(grid: &Grid, spec: &ParaproductSpec) -> Arc<Plan> {
    let key = (
        grid.n(),
        grid.half_length().to_bits(),
        spec.m.to_bits(),
        spec.projection == Projection::Smooth,
    );
    if let Some(p) = plan_cache().lock().expect("plan cache poisoned").get(&key) {
        return p.clone();
    }
    let plan = Arc::new(build_plan(grid, spec));
    plan_cache()
        .lock()
        .expect("plan cache poisoned")
        .insert(key, plan.clone());
    plan
}

fn build_plan(grid: &Grid, spec: &ParaproductSpec) -> Plan {
    let n = grid.n();
    let half = (n / 2) as i64;
    let k0 = grid.fundamental();
    let mut plan = Plan {
        out: Vec::new(),
        low: Vec::new(),
        high: Vec::new(),
        weight: Vec::new(),
    };
    for k in (1 - half)..half {
        let xi = k as f64 * k0;
        let pk = spec.high_pass(xi);
        if pk == 0.0 {
            continue;
        }
        // |ξ−η| is bounded by the cutoff's support; see the quadratic in |ξ−η|.
        let m2 = spec.m * spec.m;
        let bound = (0.4 * xi.abs() + (0.16 * xi * xi + 0.36 * (m2 + 4.0 * xi * xi)).sqrt()) / 1.8;
        let dmax = (bound / k0).ceil() as i64 + 1;
        for d in -dmax..=dmax {
            let j = k - d;
            if d.abs() >= half || j.abs() >= half {
                continue;
            }
            let eta = j as f64 * k0;
            let w = pk * spec.cutoff(xi, eta) * spec.high_pass(eta);
            if w != 0.0 {
                plan.out.push(slot(k, n) as u32);
                plan.low.push(slot(d, n) as u32);
                plan.high.push(slot(j, n) as u32);
                plan.weight.push(w);
            }
        }
    }
    plan
}

/// `T_a u` on raw spectra of the given grid (FFT order, unsymmetrized output).
pub fn paraproduct_spectra(
    grid: &Grid,
    a: &[Complex64],
    u: &[Complex64],
    spec: &ParaproductSpec,
) -> Vec<Complex64> {
    let plan = plan_for(grid, spec);
    let mut out = vec![Complex64::new(0.0, 0.0); grid.n()];
    let scale = 1.0 / (2.0 * grid.half_length());
    for i in 0..plan.weight.len() {
        let w = plan.weight[i] * scale;
        out[plan.out[i] as usize] += w * a[plan.low[i] as usize] * u[plan.high[i] as usize];
    }
    out
}

/// `T_a u`.
pub fn paraproduct(a: &FourierField, u: &FourierField, spec: &ParaproductSpec) -> Result<FourierField> {
    a.check_grid(u)?;
    let grid = a.grid();
    let out = paraproduct_spectra(grid, a.spectrum(), u.spectrum(), spec);
    Ok(FourierField::from_spectrum(grid, out))
}

/// Product `a·u` as a truncated linear convolution of spectra: computed on a
/// zero-padded grid of twice the size, then cut back to `|k| < n/2`.
pub fn dealiased_product(a: &FourierField, u: &FourierField) -> Result<FourierField> {
    a.check_grid(u)?;
    let grid = a.grid();
    let n = grid.n();
    let big = Grid::new(2 * n, grid.half_length())?;
    let pad = |f: &FourierField| {
        let mut s = vec![Complex64::new(0.0, 0.0); 2 * n];
        for (j, z) in f.spectrum().iter().enumerate() {
            let k = signed_index(j, n);
            if k != -((n / 2) as i64) {
                s[slot(k, 2 * n)] = *z;
            }
        }
        big.inverse(&mut s);
        s
    };
    let pa = pad(a);
    let pu = pad(u);
    let mut prod: Vec<Complex64> = pa
        .iter()
        .zip(&pu)
        .map(|(x, y)| Complex64::new(x.re * y.re, 0.0))
        .collect();
    big.forward(&mut prod);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for (j, o) in out.iter_mut().enumerate() {
        let k = signed_index(j, n);
        if k != -((n / 2) as i64) {
            *o = prod[slot(k, 2 * n)];
        }
    }
    Ok(FourierField::from_spectrum(grid, out))
}

/// `Π(a, u) = a·u − T_a u − T_u a`, with the product from [`dealiased_product`].
pub fn balanced_remainder(
    a: &FourierField,
    u: &FourierField,
    spec: &ParaproductSpec,
) -> Result<FourierField> {
    let prod = dealiased_product(a, u)?;
    let tau = paraproduct(a, u, spec)?;
    let tua = paraproduct(u, a, spec)?;
    Ok(prod.sub(&tau).sub(&tua))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Arc<Grid> {
        Grid::new(256, PI).unwrap()
    }

    #[test]
    fn constant_symbol_is_projection_in_sharp_mode() {
        let g = grid();
        let spec = ParaproductSpec::with_projection(8.0, Projection::Sharp).unwrap();
        let one = FourierField::from_fn(&g, |_| 1.0);
        let u = FourierField::from_fn(&g, |x| (x.sin() * 3.0).exp() * (5.0 * x).cos());
        let t = paraproduct(&one, &u, &spec).unwrap();
        let p = spec.project_high(&u);
        assert!(t.sub(&p).max_abs() < 1e-12 * u.max_abs());
    }

    #[test]
    fn constant_symbol_is_squared_projection_in_smooth_mode() {
        let g = grid();
        let spec = ParaproductSpec::new(8.0).unwrap();
        let one = FourierField::from_fn(&g, |_| 1.0);
        let u = FourierField::from_fn(&g, |x| (x.sin() * 3.0).exp());
        let t = paraproduct(&one, &u, &spec).unwrap();
        let p = spec.project_high(&spec.project_high(&u));
        assert!(t.sub(&p).max_abs() < 1e-12 * u.max_abs());
    }

    #[test]
    fn low_high_survives_and_high_low_dies() {
        let g = grid();
        let spec = ParaproductSpec::new(8.0).unwrap();
        let low = FourierField::from_fn(&g, |x| x.cos());
        let high = FourierField::from_fn(&g, |x| (64.0 * x).cos());
        let t = paraproduct(&low, &high, &spec).unwrap();
        // cos x cos 64x = (cos 63x + cos 65x)/2, both far above M.
        let expected = FourierField::from_fn(&g, |x| 0.5 * ((63.0 * x).cos() + (65.0 * x).cos()));
        assert!(t.sub(&expected).max_abs() < 1e-12);
        let t2 = paraproduct(&high, &low, &spec).unwrap();
        assert!(t2.max_abs() < 1e-14);
    }

    #[test]
    fn balanced_part_carries_zero_mode() {
        let g = grid();
        let spec = ParaproductSpec::new(8.0).unwrap();
        let a = FourierField::from_fn(&g, |x| (32.0 * x).cos());
        let pi = balanced_remainder(&a, &a, &spec).unwrap();
        // cos² = (1 + cos 64x)/2: the mean lives entirely in Π.
        assert!((pi.spectrum()[0].re - PI).abs() < 1e-12);
    }
}
