use std::f64::consts::PI;
use std::sync::Arc;

use gsqg_core::paraproduct::{balanced_remainder, dealiased_product, paraproduct};
use gsqg_core::spectral::{block_symbol, dyadic_blocks};
use gsqg_core::{Complex64, FourierField, Grid, ParaproductSpec, Projection};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random real field with content on `|k| ≤ kmax`.
fn random_field(g: &Arc<Grid>, rng: &mut ChaCha8Rng, kmax: usize) -> FourierField {
    let n = g.n();
    let mut s = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..=kmax {
        let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        s[k] = if k == 0 { Complex64::new(z.re, 0.0) } else { z };
        if k > 0 {
            s[n - k] = z.conj();
        }
    }
    FourierField::from_spectrum(g, s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn parseval(seed in any::<u64>(), lg in 3u32..9, half in 0.5f64..50.0) {
        let g = Grid::new(1 << lg, half).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FourierField::from_values(&g, (0..g.n()).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let a = f.l2_norm_sq();
        let b = f.spectral_norm_sq();
        prop_assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn multiplier_composition(seed in any::<u64>(), s1 in -1.0f64..2.0, s2 in -1.0f64..2.0) {
        let g = Grid::new(128, PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&g, &mut rng, 60);
        let m1 = |xi: f64| if xi == 0.0 { Complex64::new(0.0, 0.0) } else { Complex64::new(0.0, xi.signum() * xi.abs().powf(s1)) };
        let m2 = |xi: f64| Complex64::new(1.0 / (1.0 + xi * xi).powf(s2 / 2.0), 0.0);
        let a = f.apply_multiplier(m1).unwrap().apply_multiplier(m2).unwrap();
        let b = f.apply_multiplier(|xi| m1(xi) * m2(xi)).unwrap();
        prop_assert!(a.sub(&b).max_abs() <= 1e-12 * (1.0 + b.max_abs()));
    }

    #[test]
    fn translation_group(seed in any::<u64>(), y in -20.0f64..20.0) {
        let g = Grid::new(128, 3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&g, &mut rng, 50);
        let back = f.translate(y).translate(-y);
        prop_assert!(back.sub(&f).max_abs() <= 1e-12 * (1.0 + f.max_abs()));
        let per = f.translate(6.0);
        prop_assert!(per.sub(&f).max_abs() <= 1e-12 * (1.0 + f.max_abs()));
    }

    #[test]
    fn real_field_symmetry(seed in any::<u64>()) {
        let g = Grid::new(64, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = FourierField::from_values(&g, (0..64).map(|_| rng.gen_range(-1.0..1.0)).collect());
        let s = f.spectrum();
        let norm = s.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for k in 1..32 {
            prop_assert!((s[k] - s[64 - k].conj()).norm() <= 1e-12 * norm);
        }
    }

    #[test]
    fn littlewood_paley_reconstruction(seed in any::<u64>(), smooth in any::<bool>()) {
        let g = Grid::new(256, 4.0 * PI).unwrap();
        let proj = if smooth { Projection::Smooth } else { Projection::Sharp };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&g, &mut rng, 120);
        let mut sum = f.zero_mode();
        for lambda in dyadic_blocks(&g, proj) {
            sum = sum.add(&f.littlewood_paley(lambda, proj).unwrap());
        }
        prop_assert!(sum.sub(&f).l2_norm() <= 1e-12 * f.l2_norm());
    }

    #[test]
    fn almost_orthogonality(seed in any::<u64>()) {
        let g = Grid::new(256, 4.0 * PI).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_field(&g, &mut rng, 127);
        let total = f.sub(&f.zero_mode()).l2_norm_sq();
        let blocks: f64 = dyadic_blocks(&g, Projection::Smooth)
            .into_iter()
            .map(|l| f.littlewood_paley(l, Projection::Smooth).unwrap().l2_norm_sq())
            .sum();
        prop_assert!(blocks >= 0.5 * total && blocks <= total * (1.0 + 1e-12));
    }

    #[test]
    fn paraproduct_self_adjoint(seed in any::<u64>()) {
        let g = Grid::new(128, 2.0 * PI).unwrap();
        let spec = ParaproductSpec::new(3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_field(&g, &mut rng, 63);
        let u = random_field(&g, &mut rng, 63);
        let w = random_field(&g, &mut rng, 63);
        let lhs = paraproduct(&a, &u, &spec).unwrap().inner(&w);
        let rhs = u.inner(&paraproduct(&a, &w, &spec).unwrap());
        prop_assert!((lhs - rhs).abs() <= 1e-10 * lhs.abs().max(rhs.abs()).max(1e-300));
    }

    #[test]
    fn paraproduct_decomposition(seed in any::<u64>()) {
        let g = Grid::new(128, 2.0 * PI).unwrap();
        let spec = ParaproductSpec::new(3.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Content below n/4 so the grid product itself is alias-free.
        let a = random_field(&g, &mut rng, 31);
        let u = random_field(&g, &mut rng, 31);
        let pi = balanced_remainder(&a, &u, &spec).unwrap();
        let sum = paraproduct(&a, &u, &spec).unwrap().add(&paraproduct(&u, &a, &spec).unwrap()).add(&pi);
        let prod = a.pointwise_mul(&u);
        prop_assert!(sum.sub(&prod).l2_norm() <= 1e-12 * a.l2_norm() * u.l2_norm());
        let dp = dealiased_product(&a, &u).unwrap();
        prop_assert!(dp.sub(&prod).l2_norm() <= 1e-12 * a.l2_norm() * u.l2_norm());
    }
}

#[test]
fn block_norm_matches_direct_sum() {
    let g = Grid::new(256, 4.0 * PI).unwrap();
    let f = FourierField::from_spectrum(
        &g,
        g.wavenumbers().iter().map(|&xi| Complex64::new(1.0 / (1.0 + xi * xi), 0.0)).collect(),
    );
    for proj in [Projection::Sharp, Projection::Smooth] {
        for lambda in dyadic_blocks(&g, proj) {
            let got = f.littlewood_paley(lambda, proj).unwrap().l2_norm_sq();
            let mut direct = 0.0;
            for (j, &xi) in g.wavenumbers().iter().enumerate() {
                let p = block_symbol(xi, lambda, proj);
                let z = if j == g.nyquist_index() { f.spectrum()[j].re } else { f.spectrum()[j].norm() };
                direct += (p * z).powi(2);
            }
            direct /= 2.0 * g.half_length();
            assert!((got - direct).abs() < 1e-12 * direct.max(1e-300), "{lambda}: {got} {direct}");
        }
    }
}

/// Direct double sum over at most 128 modes, written from the definition.
fn paraproduct_oracle(a: &FourierField, u: &FourierField, spec: &ParaproductSpec) -> Vec<Complex64> {
    let g = a.grid();
    let n = g.n() as i64;
    let k0 = g.fundamental();
    let idx = |k: i64| if k >= 0 { k as usize } else { (k + n) as usize };
    let mut out = vec![Complex64::new(0.0, 0.0); g.n()];
    for k in (1 - n / 2)..(n / 2) {
        for j in (1 - n / 2)..(n / 2) {
            let d = k - j;
            if d.abs() >= n / 2 {
                continue;
            }
            let (xi, eta) = (k as f64 * k0, j as f64 * k0);
            let w = spec.high_pass(xi) * spec.cutoff(xi, eta) * spec.high_pass(eta);
            out[idx(k)] += w * a.spectrum()[idx(d)] * u.spectrum()[idx(j)] / (2.0 * g.half_length());
        }
    }
    out
}

#[test]
fn paraproduct_matches_direct_convolution() {
    let g = Grid::new(128, PI).unwrap();
    let spec = ParaproductSpec::new(8.0).unwrap();
    let low = FourierField::from_fn(&g, |x| x.cos() + 0.3 * x.sin());
    let high = FourierField::from_fn(&g, |x| (40.0 * x).cos() + 0.5 * (41.0 * x).sin());
    for (a, u) in [(&low, &high), (&high, &low), (&high, &high)] {
        let got = paraproduct(a, u, &spec).unwrap();
        let want = paraproduct_oracle(a, u, &spec);
        for (x, y) in got.spectrum().iter().zip(&want) {
            assert!((x - y).norm() < 1e-12);
        }
    }
    assert!(paraproduct(&high, &low, &spec).unwrap().max_abs() < 1e-14);
}
