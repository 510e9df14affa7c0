use gsqg_core::kernel_quad::{cubic_coefficient_q, resonance_kernel, KernelRule};
use gsqg_core::symbols::AlphaModel;
use proptest::prelude::*;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// Independent closed form of the cubic coefficient.
fn q_closed(xi: f64, alpha: f64) -> f64 {
    -2.0 * gamma(-1.0 - alpha) * (PI * alpha / 2.0).sin() * (4.0 - 2f64.powf(1.0 + alpha))
        * xi.abs().powf(1.0 + alpha)
}

#[test]
fn resonance_identity_on_grid() {
    let rule = KernelRule::default();
    for alpha in [0.25, 0.5, 1.5, 1.75] {
        let m = AlphaModel::new(alpha).unwrap();
        let mut worst: f64 = 0.0;
        for i in 0..20 {
            for j in 0..20 {
                let x1 = -8.0 + 16.0 * i as f64 / 19.0;
                let x2 = -8.0 + 16.0 * j as f64 / 19.0;
                let k = resonance_kernel(x1, x2, &m, &rule).unwrap_or_else(|e| panic!("{alpha} {x1} {x2} {e:?}"));
                let rhs = m.omega(x1) + m.omega(x2) - m.omega(x1 + x2);
                worst = worst.max((alpha * k - rhs).norm());
            }
        }
        assert!(worst < 1e-6, "alpha {alpha}: {worst}");
    }
}

#[test]
fn resonance_kernel_scaling() {
    let rule = KernelRule::default();
    let m = AlphaModel::new(0.5).unwrap();
    let a = resonance_kernel(1.3, 2.1, &m, &rule).unwrap();
    let b = resonance_kernel(2.6, 4.2, &m, &rule).unwrap();
    assert!((b - 2f64.powf(0.5) * a).norm() < 1e-8 * b.norm());
}

#[test]
fn q_matches_closed_form_and_is_even() {
    let rule = KernelRule::default();
    for alpha in [0.25, 0.5, 1.5, 1.75] {
        let m = AlphaModel::new(alpha).unwrap();
        for xi in [0.3, 1.0, 2.0, 5.5] {
            let q = cubic_coefficient_q(xi, &m, &rule).unwrap_or_else(|e| panic!("{alpha} {xi} {e:?}"));
            let qm = cubic_coefficient_q(-xi, &m, &rule).unwrap();
            let exact = q_closed(xi, alpha);
            assert!((q.re - exact).abs() < 1e-8 * exact.abs(), "{alpha} {xi}: {q} vs {exact}");
            assert_eq!(q.im, 0.0);
            assert!((qm - q).norm() < 1e-10 * q.norm());
        }
    }
}

#[test]
fn q_homogeneity_exponent() {
    let rule = KernelRule::default();
    for alpha in [0.5, 1.5] {
        let m = AlphaModel::new(alpha).unwrap();
        let q1 = cubic_coefficient_q(1.0, &m, &rule).unwrap().re;
        let q2 = cubic_coefficient_q(2.0, &m, &rule).unwrap().re;
        let exponent = (q2 / q1).log2();
        assert!((exponent - (1.0 + alpha)).abs() < 1e-4, "{exponent}");
    }
}

#[test]
fn q_golden_value() {
    let m = AlphaModel::new(0.5).unwrap();
    let coarse = cubic_coefficient_q(1.0, &m, &KernelRule::default()).unwrap().re;
    let fine_rule = KernelRule {
        order: 16,
        panel: 0.5,
        tail: 800.0,
        tolerance: 1e-10,
    };
    let fine = cubic_coefficient_q(1.0, &m, &fine_rule).unwrap().re;
    assert!((coarse - (-3.915_596_927)).abs() < 1e-8);
    assert!((coarse - fine).abs() < 1e-10);
}

proptest! {
    #[test]
    fn dispersion_is_odd_and_homogeneous(xi in 0.01f64..50.0, alpha in prop_oneof![0.05f64..0.95, 1.05f64..1.95]) {
        let m = AlphaModel::new(alpha).unwrap();
        prop_assert!((m.a(-xi) + m.a(xi)).abs() <= 1e-12 * m.a(xi).abs());
        let w1 = m.omega(xi);
        let w2 = m.omega(2.0 * xi);
        prop_assert!((w2 - 2f64.powf(alpha) * w1).norm() <= 1e-12 * w2.norm());
    }

    #[test]
    fn group_velocity_matches_finite_difference(xi in prop_oneof![-20.0f64..-0.1, 0.1f64..20.0], alpha in prop_oneof![0.05f64..0.95, 1.05f64..1.95]) {
        let m = AlphaModel::new(alpha).unwrap();
        let h = 1e-4;
        let fd = (m.a(xi * (1.0 + h)) - m.a(xi * (1.0 - h))) / (2.0 * xi * h);
        let gv = m.group_velocity(xi);
        prop_assert!((fd - gv).abs() <= 1e-6 * gv.abs());
    }

    #[test]
    fn velocity_round_trip(xi in -20.0f64..-0.05, alpha in prop_oneof![0.05f64..0.95, 1.05f64..1.95]) {
        let m = AlphaModel::new(alpha).unwrap();
        let v = m.group_velocity(xi);
        let back = m.xi_of_velocity(v).unwrap();
        prop_assert!((back - xi).abs() <= 1e-10 * xi.abs());
    }
}

#[test]
fn velocity_ordering_follows_curvature() {
    for alpha in [0.5, 1.5] {
        let m = AlphaModel::new(alpha).unwrap();
        let vs: Vec<f64> = (1..40).map(|i| m.group_velocity(-0.25 * i as f64)).collect();
        for w in vs.windows(2) {
            let (x1, x2) = (m.xi_of_velocity(w[0]).unwrap(), m.xi_of_velocity(w[1]).unwrap());
            // dξ/dv = 1/a″, so the ordering of ξ follows sgn(a″) at negative frequencies.
            let s = m.curvature(-1.0).signum();
            assert!(((x2 - x1) * (w[1] - w[0])).signum() == s);
        }
    }
}
