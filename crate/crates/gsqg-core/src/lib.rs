//! Numerics for generalized SQG fronts on a periodic interval.
//!
//! The front equation `(∂t − c(α)|D|^{α−1}∂x)φ = Q(φ, ∂xφ)` is discretized
//! pseudo-spectrally on `[−L, L)`. The crate is organised bottom-up:
//! spectral fields and paraproducts, closed-form symbols, the nonlocal
//! nonlinearity, normal-form quantities, time stepping, diagnostics and
//! wave-packet analysis.

pub mod diagnostics;
pub mod error;
pub mod evolution;
pub mod gauss;
pub mod kernel_quad;
pub mod nonlinearity;
pub mod normalform;
pub mod paraproduct;
pub mod profiles;
pub mod spectral;
pub mod symbols;
pub mod wavepacket;

pub use error::{GsqgError, Result};
pub use num_complex::Complex64;
pub use paraproduct::ParaproductSpec;
pub use spectral::{FourierField, Grid, Projection};
pub use symbols::{AlphaModel, Branch};
