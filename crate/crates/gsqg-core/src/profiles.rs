//! Smooth cutoff profiles built from the `exp(−1/t)` mollifier.

/// C^∞ transition: 0 for `t ≤ 0`, 1 for `t ≥ 1`, monotone in between.
pub fn transition(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else if t >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / t).exp();
        let b = (-1.0 / (1.0 - t)).exp();
        a / (a + b)
    }
}

/// Radial step used by the Littlewood–Paley pieces and `P_{>M}`:
/// 1 on `r ≤ 0.8`, 0 on `r ≥ 1.2`.
pub fn radial_step(r: f64) -> f64 {
    1.0 - transition((r.abs() - 0.8) / 0.4)
}

/// Paraproduct cutoff: even, 1 on `|θ| ≤ 1/20`, 0 on `|θ| ≥ 1/10`.
pub fn para_cutoff(theta: f64) -> f64 {
    1.0 - transition((theta.abs() - 0.05) / 0.05)
}

/// Compact bump `exp(−1/(1−y²))` on `(−1, 1)`, unnormalized.
pub fn bump(y: f64) -> f64 {
    if y.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - y * y)).exp()
    }
}

/// `∫_{−1}^{1} bump`, used to give packets unit mass.
pub const BUMP_INTEGRAL: f64 = 0.443_993_816_168_079_4;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_integral_constant() {
        let nodes = crate::gauss::GaussLegendre::new(40);
        let mut s = 0.0;
        let panels = 64;
        for p in 0..panels {
            let a = -1.0 + 2.0 * p as f64 / panels as f64;
            let b = a + 2.0 / panels as f64;
            s += nodes.integrate(a, b, bump);
        }
        assert!((s - BUMP_INTEGRAL).abs() < 1e-14, "{s}");
    }

    #[test]
    fn cutoffs_have_their_plateaus() {
        assert_eq!(para_cutoff(0.05), 1.0);
        assert_eq!(para_cutoff(-0.03), 1.0);
        assert_eq!(para_cutoff(0.1), 0.0);
        assert_eq!(radial_step(0.8), 1.0);
        assert_eq!(radial_step(1.2), 0.0);
        let mut prev = 1.0;
        for i in 0..=100 {
            let th = 0.05 + 0.05 * i as f64 / 100.0;
            let c = para_cutoff(th);
            assert!((0.0..=1.0).contains(&c) && c <= prev);
            prev = c;
        }
    }
}
