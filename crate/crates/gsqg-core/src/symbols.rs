//! Closed-form symbols of the front equation: the dispersion constant,
//! dispersion relation, group velocity and its inverse, packet phase, and
//! the resonance function.

use std::f64::consts::PI;

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{GsqgError, Result};

/// Distance from α = 0 and α = 1 below which the special branches are used.
pub const BRANCH_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// α = 0: logarithmic kernel.
    Zero,
    /// α ∈ (0,1) ∪ (1,2).
    Generic,
    /// α = 1: logarithmic dispersion `2 log|D| ∂x`.
    LogSqg,
}

/// Dispersion constant `c(α) = −2 sin(π(2−α)/2) Γ(1−α)`, and `−1/2` at α = 0.
pub fn c_of_alpha(alpha: f64) -> Result<f64> {
    if !(0.0..2.0).contains(&alpha) {
        return Err(GsqgError::AlphaOutOfRange { alpha });
    }
    if (alpha - 1.0).abs() < BRANCH_TOLERANCE {
        return Err(GsqgError::UseLogBranch { alpha });
    }
    if alpha < BRANCH_TOLERANCE {
        return Ok(-0.5);
    }
    Ok(-2.0 * (PI * (2.0 - alpha) / 2.0).sin() * gamma(1.0 - alpha))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaModel {
    alpha: f64,
    c: f64,
    branch: Branch,
}

impl AlphaModel {
    /// Routes α near 0 or 1 to the special branches (and snaps α to 0 or 1 there).
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..2.0).contains(&alpha) {
            return Err(GsqgError::AlphaOutOfRange { alpha });
        }
        if alpha < BRANCH_TOLERANCE {
            Ok(Self {
                alpha: 0.0,
                c: -0.5,
                branch: Branch::Zero,
            })
        } else if (alpha - 1.0).abs() < BRANCH_TOLERANCE {
            // c is not defined here; the log symbol replaces c|ξ|^{α−1}.
            Ok(Self {
                alpha: 1.0,
                c: f64::NAN,
                branch: Branch::LogSqg,
            })
        } else {
            Ok(Self {
                alpha,
                c: c_of_alpha(alpha)?,
                branch: Branch::Generic,
            })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `c(α)`; NaN on the LogSQG branch.
    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    /// Second derivative of the nonlinearity profile at 0: α, or 1/π at α = 0.
    pub fn profile_curvature(&self) -> f64 {
        match self.branch {
            Branch::Zero => 1.0 / PI,
            _ => self.alpha,
        }
    }

    /// Real symbol `a(ξ)` of the linear flow: `φ̂(t) = e^{−i a(ξ) t} φ̂(0)`.
    pub fn a(&self, xi: f64) -> f64 {
        match self.branch {
            Branch::LogSqg => {
                if xi == 0.0 {
                    0.0
                } else {
                    -2.0 * xi * xi.abs().ln()
                }
            }
            _ => -self.c * signed_pow(xi, self.alpha),
        }
    }

    /// `ω(ξ) = −i a(ξ)`, i.e. `c i ξ|ξ|^{α−1}` on the generic branch.
    pub fn omega(&self, xi: f64) -> Complex64 {
        Complex64::new(0.0, -self.a(xi))
    }

    /// Group velocity `a′(ξ)`.
    pub fn group_velocity(&self, xi: f64) -> f64 {
        match self.branch {
            Branch::LogSqg => -2.0 * (xi.abs().ln() + 1.0),
            _ => -self.c * self.alpha * xi.abs().powf(self.alpha - 1.0),
        }
    }

    /// `a″(ξ)`.
    pub fn curvature(&self, xi: f64) -> f64 {
        match self.branch {
            Branch::LogSqg => -2.0 / xi,
            _ => {
                -self.c
                    * self.alpha
                    * (self.alpha - 1.0)
                    * xi.signum()
                    * xi.abs().powf(self.alpha - 2.0)
            }
        }
    }

    fn require_generic(&self, what: &str) -> Result<()> {
        if self.branch == Branch::Generic {
            Ok(())
        } else {
            Err(GsqgError::UnsupportedBranch(format!(
                "{what} needs α in (0,1)∪(1,2), got {:?}",
                self.branch
            )))
        }
    }

    /// Sign of attainable group velocities: positive for α < 1, negative for α > 1.
    pub fn velocity_sign(&self) -> f64 {
        -self.c.signum()
    }

    /// Negative frequency `ξ_v` with `a′(ξ_v) = v`.
    pub fn xi_of_velocity(&self, v: f64) -> Result<f64> {
        self.require_generic("velocity inversion")?;
        let r = -v / (self.c * self.alpha);
        if !(r.is_finite() && r > 0.0) {
            return Err(GsqgError::VelocityOutOfRange { v });
        }
        let xi = -r.powf(1.0 / (self.alpha - 1.0));
        if !(xi.is_finite() && xi < 0.0) {
            return Err(GsqgError::VelocityOutOfRange { v });
        }
        Ok(xi)
    }

    /// Packet phase `Φ(v) = v ξ_v − a(ξ_v)`; `Φ′(v) = ξ_v`.
    pub fn packet_phase(&self, v: f64) -> Result<f64> {
        let xi = self.xi_of_velocity(v)?;
        Ok(v * xi - self.a(xi))
    }

    /// `Ω(ξ1, ξ2) = (ω(ξ1) + ω(ξ2) − ω(ξ1+ξ2)) / α`.
    pub fn resonance_closed(&self, xi1: f64, xi2: f64) -> Result<Complex64> {
        self.require_generic("resonance function")?;
        Ok((self.omega(xi1) + self.omega(xi2) - self.omega(xi1 + xi2)) / self.alpha)
    }
}

/// `sgn(x)|x|^p`, continuous at 0 for `p > 0`.
pub fn signed_pow(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.signum() * x.abs().powf(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dispersion_constant_values() {
        assert_eq!(c_of_alpha(0.0).unwrap(), -0.5);
        assert!((c_of_alpha(0.5).unwrap() + (2.0 * PI).sqrt()).abs() < 1e-12);
        assert!((c_of_alpha(1.5).unwrap() - 2.0 * (2.0 * PI).sqrt()).abs() < 1e-12);
        assert_eq!(
            c_of_alpha(1.0005),
            Err(GsqgError::UseLogBranch { alpha: 1.0005 })
        );
        assert!(c_of_alpha(2.0).is_err());
    }

    #[test]
    fn branch_routing() {
        assert_eq!(AlphaModel::new(0.0005).unwrap().branch(), Branch::Zero);
        assert_eq!(AlphaModel::new(0.9995).unwrap().branch(), Branch::LogSqg);
        assert_eq!(AlphaModel::new(0.5).unwrap().branch(), Branch::Generic);
    }

    #[test]
    fn velocity_inversion_examples() {
        let m = AlphaModel::new(1.5).unwrap();
        let v = m.group_velocity(-1.0);
        assert!((m.xi_of_velocity(v).unwrap() + 1.0).abs() < 1e-12);
        assert!(m.xi_of_velocity(-v).is_err());
        let m = AlphaModel::new(0.5).unwrap();
        assert!(m.velocity_sign() > 0.0);
        let v = m.group_velocity(-2.0);
        assert!((m.xi_of_velocity(v).unwrap() + 2.0).abs() < 2e-10);
    }

    #[test]
    fn resonance_examples() {
        let m = AlphaModel::new(0.5).unwrap();
        assert_eq!(m.resonance_closed(1.3, -1.3).unwrap().norm(), 0.0);
        assert!(m.resonance_closed(2.7, 0.0).unwrap().norm() < 1e-15);
        let om = m.resonance_closed(1.0, 1.0).unwrap();
        let expected = Complex64::new(0.0, 2.0 * m.c() * (2.0 - 2f64.sqrt()));
        assert!((om - expected).norm() < 1e-12);
    }

    #[test]
    fn zero_branch_symbol_is_sign() {
        let m = AlphaModel::new(0.0).unwrap();
        assert_eq!(m.a(3.0), 0.5);
        assert_eq!(m.a(-0.2), -0.5);
        assert_eq!(m.a(0.0), 0.0);
    }
}
