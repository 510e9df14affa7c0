use thiserror::Error;

pub type Result<T> = std::result::Result<T, GsqgError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GsqgError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("multiplier is not finite at wavenumber {xi}")]
    SingularMultiplier { xi: f64 },
    #[error("dyadic block {lambda} is not available on this grid ({reason})")]
    BlockOutOfRange { lambda: f64, reason: String },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("alpha = {alpha} is within 1e-3 of 1; use the logarithmic branch")]
    UseLogBranch { alpha: f64 },
    #[error("alpha = {alpha} is outside [0, 2)")]
    AlphaOutOfRange { alpha: f64 },
    #[error("velocity {v} is not attained by the group velocity")]
    VelocityOutOfRange { v: f64 },
    #[error("quadrature did not converge: refinements differ by {difference:e} (tolerance {tolerance:e})")]
    QuadratureDiverged { difference: f64, tolerance: f64 },
    #[error("difference quotient requested at y = 0")]
    ZeroShift,
    #[error("data too large for the small-data regime: ‖φ_x‖∞ = {sup_slope}")]
    DataTooLarge { sup_slope: f64 },
    #[error("invalid stepper configuration: {0}")]
    InvalidStepper(String),
    #[error("non-finite values at t = {t}")]
    BlowupDetected { t: f64 },
    #[error("series too short: {got} points, need at least {need}")]
    InsufficientSeries { got: usize, need: usize },
    #[error("|γ| is not converging: relative spread {spread}")]
    NotInScatteringRegime { spread: f64 },
    #[error("wave packet does not fit in the periodic box: {0}")]
    PacketDoesNotFit(String),
    #[error("operation not available for this branch: {0}")]
    UnsupportedBranch(String),
}
