use std::f64::consts::PI;
use std::sync::Arc;

use gsqg_core::nonlinearity::profile;
use gsqg_core::normalform::build_normalform;
use gsqg_core::{AlphaModel, FourierField, Grid, GsqgError, ParaproductSpec, Projection};
use proptest::prelude::*;

fn grid() -> Arc<Grid> {
    Grid::new(256, 8.0 * PI).unwrap()
}

fn bump(g: &Arc<Grid>, amp: f64) -> FourierField {
    FourierField::from_fn(g, |x| amp * (-x * x / 2.0).exp())
}

fn smooth_v(g: &Arc<Grid>) -> FourierField {
    FourierField::from_fn(g, |x| (-(x - 0.5) * (x - 0.5) / 2.0).exp() * (3.0 * x).cos())
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

fn spec() -> ParaproductSpec {
    ParaproductSpec::new(1.0).unwrap()
}

#[test]
fn zero_datum_gives_trivial_weights() {
    let g = grid();
    let model = AlphaModel::new(0.5).unwrap();
    let nf = build_normalform(&FourierField::zeros(&g), &model).unwrap();
    assert_eq!(nf.psi.max_abs(), 0.0);
    assert!(nf.j.values().iter().all(|&j| j == 1.0));
    assert!(nf.j_tilde.values().iter().all(|&j| j == 1.0));
}

#[test]
fn pointwise_definitions() {
    let g = grid();
    let eps = 0.3;
    let phi = FourierField::from_fn(&g, |x| eps * x.sin());
    for alpha in [0.0, 0.5, 1.0, 1.5] {
        let model = AlphaModel::new(alpha).unwrap();
        let nf = build_normalform(&phi, &model).unwrap();
        let origin = (0..g.n()).min_by(|&a, &b| g.x(a).abs().total_cmp(&g.x(b).abs())).unwrap();
        assert!(g.x(origin).abs() < 1e-12);
        assert!((nf.psi_x.values()[origin] - profile(&model, eps)).abs() < 1e-12);
        for (j, x) in g.xs().into_iter().enumerate() {
            let p = nf.psi_x.values()[j];
            assert!((p - profile(&model, eps * x.cos())).abs() < 1e-12);
            assert!((nf.j.values()[j] * (1.0 - p) - 1.0).abs() < 1e-10);
        }
        // ψ is the periodic antiderivative of ψ_x up to its mean.
        let back = nf.psi.derivative().map(|p| p + nf.dropped_mean);
        assert!(back.sub(&nf.psi_x).max_abs() < 1e-10);
    }
    let half = AlphaModel::new(0.5).unwrap();
    let nf = build_normalform(&phi, &half).unwrap();
    let expect = nf.psi_x.map(|p| (1.0 - p).powi(2));
    assert!(nf.j_tilde.sub(&expect).max_abs() < 1e-14);
    let inverse = nf.j.map(|j| j.powf(-2.0));
    assert!(nf.j_tilde.sub(&inverse).max_abs() < 1e-12);
}

#[test]
fn large_slope_is_rejected() {
    let g = grid();
    let model = AlphaModel::new(1.5).unwrap();
    let phi = FourierField::from_fn(&g, |x| 0.6 * x.sin());
    match build_normalform(&phi, &model) {
        Err(GsqgError::DataTooLarge { sup_slope }) => assert!((sup_slope - 0.6).abs() < 1e-3),
        other => panic!("expected DataTooLarge, got {other:?}"),
    }
}

#[test]
fn corrections_off_the_generic_branch() {
    let g = grid();
    let v = smooth_v(&g);
    for alpha in [0.0, 1.0] {
        let model = AlphaModel::new(alpha).unwrap();
        let nf = build_normalform(&bump(&g, 0.05), &model).unwrap();
        assert!(matches!(nf.linearized_correction(&v, &spec()), Err(GsqgError::UnsupportedBranch(_))));
        assert!((nf.modified_energy(&v, &spec()).unwrap() - v.l2_norm_sq()).abs() < 1e-14);
    }
}

#[test]
fn corrections_vanish_at_zero() {
    let g = grid();
    let v = smooth_v(&g);
    let model = AlphaModel::new(0.5).unwrap();
    let zero = FourierField::zeros(&g);
    let nf = build_normalform(&zero, &model).unwrap();
    assert!(nf.linearized_correction(&v, &spec()).unwrap().sub(&v).max_abs() < 1e-15);
    assert!(nf.nonlinear_correction(&zero, &spec()).unwrap().max_abs() < 1e-15);
}

#[test]
fn linearized_correction_is_affine() {
    let g = grid();
    let model = AlphaModel::new(1.5).unwrap();
    let nf = build_normalform(&bump(&g, 0.2), &model).unwrap();
    let v1 = smooth_v(&g);
    let v2 = FourierField::from_fn(&g, |x| (-x * x / 4.0).exp() * (5.0 * x).sin());
    let corr = |v: &FourierField| v.sub(&nf.linearized_correction(v, &spec()).unwrap());
    let lhs = corr(&v1.add(&v2));
    let rhs = corr(&v1).add(&corr(&v2));
    assert!(lhs.sub(&rhs).max_abs() < 1e-13 * (1.0 + rhs.max_abs()));
    assert!(rhs.max_abs() > 1e-6);
}

fn scan(alpha: f64, measure: impl Fn(&FourierField, &AlphaModel) -> f64) -> f64 {
    let g = grid();
    let model = AlphaModel::new(alpha).unwrap();
    let amps = [0.01, 0.02, 0.04, 0.08];
    let vals: Vec<f64> = amps.iter().map(|&k| measure(&bump(&g, k), &model)).collect();
    slope(&amps, &vals)
}

// ψ is quadratic in the front amplitude, so each correction picks up
// an extra power beyond its bilinear slot count.
#[test]
fn amplitude_scaling_of_corrections() {
    for alpha in [0.5, 1.5] {
        let lin = scan(alpha, |phi, model| {
            let v = smooth_v(phi.grid());
            let nf = build_normalform(phi, model).unwrap();
            nf.linearized_correction(&v, &spec()).unwrap().sub(&v).l2_norm()
        });
        assert!((lin - 2.0).abs() < 0.1, "α={alpha}: linearized exponent {lin}");
        let non = scan(alpha, |phi, model| {
            let nf = build_normalform(phi, model).unwrap();
            nf.nonlinear_correction(phi, &spec()).unwrap().sub(phi).l2_norm()
        });
        assert!((non - 3.0).abs() < 0.1, "α={alpha}: nonlinear exponent {non}");
        let conj = scan(alpha, |phi, model| {
            let v = smooth_v(phi.grid());
            let nf = build_normalform(phi, model).unwrap();
            let zero = build_normalform(&FourierField::zeros(phi.grid()), model).unwrap();
            let base = zero.conjugated_variable(&v, 1.5, model, &spec(), true).unwrap();
            nf.conjugated_variable(&v, 1.5, model, &spec(), true).unwrap().sub(&base).l2_norm()
        });
        assert!((conj - 2.0).abs() < 0.1, "α={alpha}: conjugation exponent {conj}");
    }
}

#[test]
fn energy_at_zero_is_projected_mass() {
    let g = grid();
    let v = smooth_v(&g).add(&FourierField::from_fn(&g, |x| 0.3 * (x / 4.0).cos()));
    let model = AlphaModel::new(0.5).unwrap();
    let nf = build_normalform(&FourierField::zeros(&g), &model).unwrap();
    for projection in [Projection::Smooth, Projection::Sharp] {
        let sp = ParaproductSpec::with_projection(1.0, projection).unwrap();
        let e = nf.modified_energy(&v, &sp).unwrap();
        let expect = sp.project_high(&v).l2_norm_sq();
        assert!((e - expect).abs() < 1e-12 * expect, "{projection:?}: {e} vs {expect}");
        assert!(e < v.l2_norm_sq());
    }
}

#[test]
fn conjugated_variable_at_small_orders() {
    let g = grid();
    let model = AlphaModel::new(1.5).unwrap();
    let v = smooth_v(&g);
    let nf = build_normalform(&FourierField::zeros(&g), &model).unwrap();
    let sharp = ParaproductSpec::with_projection(1.0, Projection::Sharp).unwrap();
    let s0 = nf.conjugated_variable(&v, 0.0, &model, &sharp, true).unwrap();
    assert!(s0.sub(&sharp.project_high(&v)).max_abs() < 1e-13);
    let s1 = nf.conjugated_variable(&v, 1.0, &model, &sharp, true).unwrap();
    assert!(s1.sub(&sharp.project_high(&v.abs_d_pow(1.0))).max_abs() < 1e-12);
    // Smooth quantization: T_1 acts as the squared high-pass multiplier.
    let sp = spec();
    let s1 = nf.conjugated_variable(&v, 1.0, &model, &sp, false).unwrap();
    let expect = sp.project_high(&sp.project_high(&v.abs_d_pow(1.0)));
    assert!(s1.sub(&expect).max_abs() < 1e-12);
}

#[test]
fn higher_energy_grows_on_single_modes() {
    let g = grid();
    let model = AlphaModel::new(0.5).unwrap();
    let nf = build_normalform(&FourierField::zeros(&g), &model).unwrap();
    let s = 3.0;
    let mode = |k: f64| FourierField::from_fn(&g, move |x| (k * x).cos());
    let e4 = nf.higher_energy(&mode(4.0), s, &model, &spec()).unwrap();
    let e8 = nf.higher_energy(&mode(8.0), s, &model, &spec()).unwrap();
    assert!((e4 - 4f64.powf(2.0 * s) * 8.0 * PI).abs() < 1e-9 * e4);
    assert!((e8 / e4 - 2f64.powf(2.0 * s)).abs() < 1e-9 * e8 / e4);
}

#[test]
fn energy_equivalence_for_small_data() {
    let g = grid();
    for alpha in [0.5, 1.5] {
        let model = AlphaModel::new(alpha).unwrap();
        let nf = build_normalform(&bump(&g, 0.2), &model).unwrap();
        let v = smooth_v(&g);
        for s in [0.0, 1.0, 2.0] {
            let e = nf.higher_energy(&v, s, &model, &spec()).unwrap();
            let hs = spec().project_high(&v.abs_d_pow(s)).l2_norm_sq();
            assert!(e > 0.5 * hs && e < 1.5 * hs, "α={alpha} s={s}: {e} vs {hs}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn energy_is_symmetric_and_coercive(
        amp in 0.0f64..0.3,
        width in 0.5f64..3.0,
        coeffs in proptest::collection::vec(-1.0f64..1.0, 6),
        alpha in prop_oneof![Just(0.5), Just(1.5), Just(0.25), Just(1.75)],
    ) {
        let g = grid();
        let model = AlphaModel::new(alpha).unwrap();
        let phi = FourierField::from_fn(&g, |x| amp * (-x * x / (width * width)).exp());
        let nf = build_normalform(&phi, &model).unwrap();
        let make = |c: &[f64]| FourierField::from_fn(&g, |x| {
            (-x * x / 8.0).exp() * (c[0] * x.cos() + c[1] * (2.5 * x).sin() + c[2] * (6.0 * x).cos())
        });
        let v = make(&coeffs[..3]);
        let w = make(&coeffs[3..]);
        let sp = spec();
        let e = nf.modified_energy(&v, &sp).unwrap();
        prop_assert!(e >= 0.5 * sp.project_high(&v).l2_norm_sq() - 1e-12);
        prop_assert!(e <= 1.1 * v.l2_norm_sq() + 1e-12);
        let tv = gsqg_core::paraproduct::paraproduct(&nf.j_tilde, &v, &sp).unwrap();
        let tw = gsqg_core::paraproduct::paraproduct(&nf.j_tilde, &w, &sp).unwrap();
        prop_assert!((tv.inner(&w) - v.inner(&tw)).abs() < 1e-12 * (1.0 + v.l2_norm_sq() + w.l2_norm_sq()));
    }
}
