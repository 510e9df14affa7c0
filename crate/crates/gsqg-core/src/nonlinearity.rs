//! The front nonlinearity
//! `Q(f, g)(x) = ∫ |y|^{1−α} F(δ^y f(x)) |δ|^y g(x) dy`,
//! its paradifferential split, the bilinear null form `Ω(ψ, v)` and the
//! remainder `Q(f, v) − Ω(ψ(f), v)`.
//!
//! The `y`-integral runs over `0 < |y| < y_max` with `±y` paired:
//!
//! * `|y| < y_min`: first nonvanishing Taylor term of the paired integrand.
//! * `y_min < |y| < Y0`: Gauss–Legendre panels, geometric up to one panel
//!   width and uniform after that. Translates are exact spectral shifts.
//! * `|y| > Y0`: `F(s) = Σ a_k s^{2k}` converges since
//!   `|δ^y f| ≤ osc(f)/Y0 ≤ 1/8`, and each power turns into convolutions
//!   against `|y|^{−α−2k}` evaluated in Fourier space. The kernel transforms
//!   are exact half-line integrals, so for periodic data the `y`-integral
//!   covers the whole line (unless `y_max` is finite).
//!
//! All inputs are 2/3-filtered before use and the output is filtered again.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{GsqgError, Result};
use crate::gauss::GaussLegendre;
use crate::kernel_quad::{oscillatory_from, KernelRule};
use crate::paraproduct::{paraproduct_spectra, ParaproductSpec};
use crate::spectral::{FourierField, Grid};
use crate::symbols::{AlphaModel, Branch};

/// Nodes per parallel work item; fixed so the reduction order never changes.
const CHUNK: usize = 8;

/// Discretization of the `y`-integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// Inner radius; below it the paired integrand is replaced by its Taylor term.
    pub y_min: f64,
    /// Uniform panel width.
    pub panel: f64,
    /// Smallest radius where the far-field series takes over.
    pub near_radius: f64,
    /// Outer radius of the integral; infinite by default.
    pub y_max: f64,
    /// Outer radius of the node quadrature used by the paradifferential split.
    pub split_radius: f64,
    /// Gauss–Legendre order per panel.
    pub order: usize,
}

impl QuadratureSpec {
    pub fn for_grid(grid: &Grid) -> Self {
        Self {
            y_min: 1e-3 * grid.dx(),
            panel: 3.0 / grid.nyquist(),
            near_radius: 2.0,
            y_max: f64::INFINITY,
            split_radius: 2.0 * grid.half_length(),
            order: 8,
        }
    }

    /// Twice the node density.
    pub fn refined(&self) -> Self {
        Self {
            y_min: self.y_min / 2.0,
            panel: self.panel / 2.0,
            ..*self
        }
    }

    pub fn validate(&self, grid: &Grid) -> Result<()> {
        let ok = self.y_min > 0.0
            && self.y_min < grid.dx()
            && self.panel > self.y_min
            && self.near_radius > self.panel
            && self.y_max > self.near_radius
            && self.split_radius > self.panel
            && self.order >= 2;
        if ok {
            Ok(())
        } else {
            Err(GsqgError::InvalidGrid(format!("invalid quadrature spec {self:?}")))
        }
    }

    /// Far-field radius for data with oscillation `osc`: `near_radius · 2^m ≥ 8 osc`.
    fn far_radius(&self, osc: f64) -> f64 {
        let mut r = self.near_radius;
        while r < 8.0 * osc && r < self.y_max {
            r *= 2.0;
        }
        r.min(self.y_max)
    }

    /// Positive nodes and weights on `[y_min, upper]`.
    fn nodes(&self, upper: f64) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(self.order);
        let mut out = Vec::new();
        let h = self.panel.min(upper);
        let m = (h / self.y_min).log2().ceil().max(1.0) as usize;
        let ratio = (h / self.y_min).powf(1.0 / m as f64);
        let mut a = self.y_min;
        for _ in 0..m {
            let b = a * ratio;
            out.extend(gl.mapped(a, b.min(h)));
            a = b;
        }
        if upper > h {
            let panels = ((upper - h) / self.panel).ceil() as usize;
            let width = (upper - h) / panels as f64;
            for p in 0..panels {
                let a = h + p as f64 * width;
                out.extend(gl.mapped(a, a + width));
            }
        }
        out
    }
}

/// The nonlinearity profile `F(s)`: `1 − (1+s²)^{−α/2}`, or `log(1+s²)/2π` at α = 0.
pub fn profile(model: &AlphaModel, s: f64) -> f64 {
    match model.branch() {
        Branch::Zero => (s * s).ln_1p() / (2.0 * std::f64::consts::PI),
        _ => -(-0.5 * model.alpha() * (s * s).ln_1p()).exp_m1(),
    }
}

/// Coefficients `a_k` of `F(s) = Σ_{k≥1} a_k s^{2k}` (index 0 unused).
fn profile_series(model: &AlphaModel, count: usize) -> Vec<f64> {
    let mut a = vec![0.0; count + 1];
    match model.branch() {
        Branch::Zero => {
            for (k, ak) in a.iter_mut().enumerate().skip(1) {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                *ak = sign / (2.0 * std::f64::consts::PI * k as f64);
            }
        }
        _ => {
            let e = -0.5 * model.alpha();
            let mut binom = 1.0;
            for (k, ak) in a.iter_mut().enumerate().skip(1) {
                binom *= (e - (k - 1) as f64) / k as f64;
                *ak = -binom;
            }
        }
    }
    a
}

/// `δ^y f = (f(·+y) − f)/y`.
pub fn difference_quotient(f: &FourierField, y: f64) -> Result<FourierField> {
    if y == 0.0 {
        return Err(GsqgError::ZeroShift);
    }
    f.apply_multiplier(|xi| shift_quotient(xi, y))
}

/// `|δ|^y f = (f(·+y) − f)/|y|`.
pub fn abs_difference_quotient(f: &FourierField, y: f64) -> Result<FourierField> {
    Ok(difference_quotient(f, y)?.scale(y.signum()))
}

/// `(e^{iξy} − 1)/y` written without cancellation.
fn shift_quotient(xi: f64, y: f64) -> Complex64 {
    let h = 0.5 * xi * y;
    Complex64::new(0.0, 2.0 * h.sin() / y) * Complex64::from_polar(1.0, h)
}

/// `ψ = ∂x^{−1} F(∂x f)` with zero mean.
pub fn psi_of(f: &FourierField, model: &AlphaModel) -> FourierField {
    let fx = f.two_thirds_filtered().derivative();
    fx.map(|s| profile(model, s)).two_thirds_filtered().antiderivative()
}

/// Shared per-call data: filtered spectra and near-field nodes.
struct Prepared<'a> {
    grid: &'a Arc<Grid>,
    f: FourierField,
    g: FourierField,
    alpha: f64,
    nodes: Vec<(f64, f64)>,
    far: f64,
}

fn prepare<'a>(
    f: &'a FourierField,
    g: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
    osc: f64,
) -> Result<Prepared<'a>> {
    f.check_grid(g)?;
    let grid = f.grid();
    quad.validate(grid)?;
    let far = quad.far_radius(osc);
    Ok(Prepared {
        grid,
        f: f.two_thirds_filtered(),
        g: g.two_thirds_filtered(),
        alpha: model.alpha(),
        nodes: quad.nodes(far),
        far,
    })
}

fn oscillation(f: &FourierField) -> f64 {
    let v = f.values();
    let hi = v.iter().cloned().fold(f64::MIN, f64::max);
    let lo = v.iter().cloned().fold(f64::MAX, f64::min);
    hi - lo
}

/// Inverse transforms of two Hermitian spectra with one complex FFT.
fn inverse_pair(grid: &Grid, a: &[Complex64], b: &[Complex64]) -> (Vec<f64>, Vec<f64>) {
    let i = Complex64::new(0.0, 1.0);
    let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(x, y)| x + i * y).collect();
    grid.inverse(&mut buf);
    (buf.iter().map(|z| z.re).collect(), buf.iter().map(|z| z.im).collect())
}

/// Forward transforms of two real arrays with one complex FFT.
fn forward_pair(grid: &Grid, a: &[f64], b: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let n = grid.n();
    let mut buf: Vec<Complex64> = a.iter().zip(b).map(|(&x, &y)| Complex64::new(x, y)).collect();
    grid.forward(&mut buf);
    let mut sa = vec![Complex64::new(0.0, 0.0); n];
    let mut sb = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n {
        let z = buf[k];
        let zc = buf[(n - k) % n].conj();
        sa[k] = 0.5 * (z + zc);
        sb[k] = Complex64::new(0.0, -0.5) * (z - zc);
    }
    (sa, sb)
}

/// Spectral data of one paired node: `δ^{±y} f` and `g(·±y) − g` on the grid.
struct NodeFields {
    s_plus: Vec<f64>,
    s_minus: Vec<f64>,
    dg_plus: Vec<f64>,
    dg_minus: Vec<f64>,
    dg_plus_hat: Vec<Complex64>,
    dg_minus_hat: Vec<Complex64>,
}

fn node_fields(p: &Prepared, y: f64) -> NodeFields {
    let grid = p.grid;
    let n = grid.n();
    let mut sp = Vec::with_capacity(n);
    let mut sm = Vec::with_capacity(n);
    let mut gp = Vec::with_capacity(n);
    let mut gm = Vec::with_capacity(n);
    for ((&xi, fh), gh) in grid.wavenumbers().iter().zip(p.f.spectrum()).zip(p.g.spectrum()) {
        let qp = shift_quotient(xi, y);
        let qm = shift_quotient(xi, -y);
        sp.push(qp * fh);
        sm.push(qm * fh);
        gp.push(qp * y * gh);
        gm.push(qm * (-y) * gh);
    }
    let (s_plus, s_minus) = inverse_pair(grid, &sp, &sm);
    let (dg_plus, dg_minus) = inverse_pair(grid, &gp, &gm);
    NodeFields {
        s_plus,
        s_minus,
        dg_plus,
        dg_minus,
        dg_plus_hat: gp,
        dg_minus_hat: gm,
    }
}

/// Sums per-chunk partial arrays in chunk order.
fn ordered_sum<T: Copy + std::ops::AddAssign + Default + Send>(
    parts: Vec<Vec<T>>,
    n: usize,
) -> Vec<T> {
    let mut acc = vec![T::default(); n];
    for part in parts {
        for (a, b) in acc.iter_mut().zip(part) {
            *a += b;
        }
    }
    acc
}

/// Near-field contribution of `∫ |y|^{1−α} G(δ^y f) |δ|^y g dy` for a pointwise `G`.
fn near_field(p: &Prepared, pointwise: &(dyn Fn(f64) -> f64 + Sync)) -> Vec<f64> {
    let n = p.grid.n();
    let parts: Vec<Vec<f64>> = p
        .nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut acc = vec![0.0; n];
            for &(y, w) in chunk {
                let nf = node_fields(p, y);
                let c = w * y.powf(-p.alpha);
                for j in 0..n {
                    acc[j] += c
                        * (pointwise(nf.s_plus[j]) * nf.dg_plus[j]
                            + pointwise(nf.s_minus[j]) * nf.dg_minus[j]);
                }
            }
            acc
        })
        .collect();
    ordered_sum(parts, n)
}

/// `y_min^{3−α}/(3−α) · ∂x(G(f_x) g_x)`: the paired integrand's leading term on `|y| < y_min`.
fn gap_term(p: &Prepared, quad: &QuadratureSpec, pointwise: impl Fn(f64) -> f64) -> FourierField {
    let fx = p.f.derivative();
    let gx = p.g.derivative();
    let c = quad.y_min.powf(3.0 - p.alpha) / (3.0 - p.alpha);
    fx.zip_map(&gx, |a, b| pointwise(a) * b).derivative().scale(c)
}

type KernelKey = (usize, u64, u64, u64, u64, bool);

fn kernel_cache() -> &'static Mutex<HashMap<KernelKey, Arc<Vec<f64>>>> {
    static CACHE: OnceLock<Mutex<HashMap<KernelKey, Arc<Vec<f64>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Fourier transform of `|y|^{−p}` (even) or `sgn(y)|y|^{−p}` (odd) over
/// `r0 < |y| < r1`, per grid wavenumber. Even: `2∫ y^{−p} cos ξy`;
/// odd: `2∫ y^{−p} sin ξy` (the transform is `i` times this).
fn far_kernel(grid: &Grid, power: f64, r0: f64, r1: f64, odd: bool) -> Arc<Vec<f64>> {
    let key = (
        grid.n(),
        grid.half_length().to_bits(),
        power.to_bits(),
        r0.to_bits(),
        r1.to_bits(),
        odd,
    );
    if let Some(k) = kernel_cache().lock().expect("kernel cache poisoned").get(&key) {
        return k.clone();
    }
    let rule = KernelRule::default();
    let values: Vec<f64> = grid
        .wavenumbers()
        .par_iter()
        .map(|&xi| {
            let mut z = oscillatory_from(power, xi, r0, &rule);
            if r1.is_finite() {
                z -= oscillatory_from(power, xi, r1, &rule);
            }
            2.0 * if odd { z.im } else { z.re }
        })
        .collect();
    let k = Arc::new(values);
    kernel_cache()
        .lock()
        .expect("kernel cache poisoned")
        .insert(key, k.clone());
    k
}

/// `(K ⋆ h)(x) = ∫ K(y) h(x+y) dy` for two real arrays at once.
fn convolve_pair(grid: &Grid, kernel: &[f64], odd: bool, a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let (mut sa, mut sb) = forward_pair(grid, a, b);
    let ny = grid.nyquist_index();
    for (k, (x, y)) in sa.iter_mut().zip(sb.iter_mut()).enumerate() {
        let m = if odd {
            if k == ny {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, kernel[k])
            }
        } else {
            Complex64::new(kernel[k], 0.0)
        };
        *x *= m;
        *y *= m;
    }
    inverse_pair(grid, &sa, &sb)
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    c
}

/// Far field of `Q` by the series of `F`.
fn far_field_series(p: &Prepared, model: &AlphaModel, quad: &QuadratureSpec, osc: f64) -> Vec<f64> {
    let grid = p.grid;
    let n = grid.n();
    let r1 = quad.y_max;
    let mut out = vec![0.0; n];
    if p.far >= r1 {
        return out;
    }
    let rho = osc / p.far;
    let mut terms = 1;
    while terms < 60 && rho.powi(2 * terms as i32) > 1e-17 {
        terms += 1;
    }
    let coeffs = profile_series(model, terms);
    // δ^y f and g(·+y) − g do not see constants; center to keep the series terms small.
    let fv = p.f.values();
    let hi = fv.iter().cloned().fold(f64::MIN, f64::max);
    let lo = fv.iter().cloned().fold(f64::MAX, f64::min);
    let mid = 0.5 * (hi + lo);
    let f: Vec<f64> = fv.iter().map(|v| v - mid).collect();
    let gm = p.g.mean();
    let g: Vec<f64> = p.g.values().iter().map(|v| v - gm).collect();

    for k in 1..=terms {
        let kernel = far_kernel(grid, p.alpha + 2.0 * k as f64, p.far, r1, false);
        let mut fj = vec![1.0; n];
        for j in 0..=2 * k {
            let fjg: Vec<f64> = fj.iter().zip(&g).map(|(a, b)| a * b).collect();
            let (k_fjg, k_fj) = convolve_pair(grid, &kernel, false, &fjg, &fj);
            let c = coeffs[k] * binomial(2 * k, j);
            let e = (2 * k - j) as i32;
            for x in 0..n {
                out[x] += c * (-f[x]).powi(e) * (k_fjg[x] - g[x] * k_fj[x]);
            }
            for (a, b) in fj.iter_mut().zip(&f) {
                *a *= b;
            }
        }
    }
    out
}

fn finish(grid: &Arc<Grid>, values: Vec<f64>, extra: &FourierField) -> FourierField {
    FourierField::from_values(grid, values)
        .add(extra)
        .two_thirds_filtered()
}

/// `Q(f, g)`.
pub fn q_apply(
    f: &FourierField,
    g: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
) -> Result<FourierField> {
    let osc = oscillation(&f.two_thirds_filtered());
    let p = prepare(f, g, model, quad, osc)?;
    let m = *model;
    let near = near_field(&p, &move |s| profile(&m, s));
    let far = far_field_series(&p, model, quad, osc);
    let values: Vec<f64> = near.iter().zip(&far).map(|(a, b)| a + b).collect();
    let gap = gap_term(&p, quad, |s| profile(model, s));
    Ok(finish(p.grid, values, &gap))
}

/// `Ω(ψ, v) = ∫ |y|^{1−α} δ^y ψ |δ|^y v dy`.
pub fn omega_bilinear(
    psi: &FourierField,
    v: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
) -> Result<FourierField> {
    let p = prepare(psi, v, model, quad, 0.0)?;
    let grid = p.grid;
    let n = grid.n();
    let near = near_field(&p, &|s| s);
    let r1 = quad.y_max;
    let mut values = near;
    if p.far < r1 {
        // Odd kernel sgn(y)|y|^{−1−α}: K⋆(ψv) − ψ K⋆v − v K⋆ψ.
        let kernel = far_kernel(grid, 1.0 + p.alpha, p.far, r1, true);
        let pv: Vec<f64> = p.f.values().iter().zip(p.g.values()).map(|(a, b)| a * b).collect();
        let (k_pv, k_v) = convolve_pair(grid, &kernel, true, &pv, p.g.values());
        let (k_p, _) = convolve_pair(grid, &kernel, true, p.f.values(), &vec![0.0; n]);
        for x in 0..n {
            values[x] += k_pv[x] - p.f.values()[x] * k_v[x] - p.g.values()[x] * k_p[x];
        }
    }
    let gap = gap_term(&p, quad, |s| s);
    Ok(finish(grid, values, &gap))
}

/// `Q(f, v) − Ω(ψ(f), v)`.
pub fn null_remainder(
    f: &FourierField,
    v: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
) -> Result<FourierField> {
    let q = q_apply(f, v, model, quad)?;
    let psi = psi_of(f, model);
    let om = omega_bilinear(&psi, v, model, quad)?;
    Ok(q.sub(&om))
}

/// `Q = q_lh + q_hl + q_hh`.
#[derive(Debug, Clone)]
pub struct NonlinearityTerms {
    pub q_full: FourierField,
    pub q_lh: FourierField,
    pub q_hl: FourierField,
    pub q_hh: FourierField,
}

/// Splits `F(δ^y f)·|δ|^y v` inside the integral into
/// `T_{F(δ^y f)}|δ|^y v + T_{|δ|^y v}F(δ^y f) + Π`.
/// The low-high and high-low parts use node quadrature over
/// `|y| < split_radius`; the balanced part is the residual against
/// [`q_apply`] and so also carries the rest of the line.
pub fn q_split(
    f: &FourierField,
    v: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
    spec: &ParaproductSpec,
) -> Result<NonlinearityTerms> {
    let q_full = q_apply(f, v, model, quad)?;
    let (q_lh, q_hl) = split_parts(f, v, model, quad, spec, true)?;
    let q_hh = q_full.sub(&q_lh).sub(&q_hl);
    Ok(NonlinearityTerms {
        q_full,
        q_lh,
        q_hl,
        q_hh,
    })
}

/// Low-high part only: `∫ |y|^{1−α} T_{F(δ^y f)} |δ|^y v dy`.
pub fn q_low_high(
    f: &FourierField,
    v: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
    spec: &ParaproductSpec,
) -> Result<FourierField> {
    Ok(split_parts(f, v, model, quad, spec, false)?.0)
}

fn split_parts(
    f: &FourierField,
    v: &FourierField,
    model: &AlphaModel,
    quad: &QuadratureSpec,
    spec: &ParaproductSpec,
    with_high_low: bool,
) -> Result<(FourierField, FourierField)> {
    let mut p = prepare(f, v, model, quad, 0.0)?;
    let grid = p.grid;
    let n = grid.n();
    // Node quadrature out to the split radius; the rest of the line is left to q_hh.
    p.nodes = quad.nodes(quad.split_radius.min(quad.y_max));
    let m = *model;
    let parts: Vec<(Vec<Complex64>, Vec<Complex64>)> = p
        .nodes
        .par_chunks(CHUNK)
        .map(|chunk| {
            let zero = Complex64::new(0.0, 0.0);
            let mut lh = vec![zero; n];
            let mut hl = vec![zero; n];
            for &(y, w) in chunk {
                let nf = node_fields(&p, y);
                let fp: Vec<f64> = nf.s_plus.iter().map(|&s| profile(&m, s)).collect();
                let fm: Vec<f64> = nf.s_minus.iter().map(|&s| profile(&m, s)).collect();
                let (fp_hat, fm_hat) = forward_pair(grid, &fp, &fm);
                let c = w * y.powf(-p.alpha);
                let a = paraproduct_spectra(grid, &fp_hat, &nf.dg_plus_hat, spec);
                let b = paraproduct_spectra(grid, &fm_hat, &nf.dg_minus_hat, spec);
                for k in 0..n {
                    lh[k] += c * (a[k] + b[k]);
                }
                if with_high_low {
                    let a = paraproduct_spectra(grid, &nf.dg_plus_hat, &fp_hat, spec);
                    let b = paraproduct_spectra(grid, &nf.dg_minus_hat, &fm_hat, spec);
                    for k in 0..n {
                        hl[k] += c * (a[k] + b[k]);
                    }
                }
            }
            (lh, hl)
        })
        .collect();
    let (lh_parts, hl_parts): (Vec<_>, Vec<_>) = parts.into_iter().unzip();
    let lh = ordered_sum(lh_parts, n);
    let hl = ordered_sum(hl_parts, n);
    Ok((
        FourierField::from_spectrum(grid, lh).two_thirds_filtered(),
        FourierField::from_spectrum(grid, hl).two_thirds_filtered(),
    ))
}
