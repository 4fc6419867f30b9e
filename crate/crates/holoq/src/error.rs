use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot normalize a zero-norm state vector")]
    ZeroNormState,

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NonHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("scaling pair violates |a|^2 + |b|^2 = 1 (got {norm_sq})")]
    InvalidScalingPair { norm_sq: f64 },

    #[error("gate angle theta = {theta} outside [0, pi]")]
    InvalidGateAngle { theta: f64 },

    #[error("invalid pulse envelope: {reason}")]
    InvalidEnvelope { reason: &'static str },

    #[error("invalid time grid: {reason}")]
    InvalidTimeGrid { reason: &'static str },

    #[error("invalid density matrix: {reason} (residual {residual:.3e})")]
    InvalidDensityMatrix { reason: &'static str, residual: f64 },

    #[error("intermediate-state detuning must be nonzero for a two-photon drive")]
    ZeroIntermediateDetuning,

    #[error("two-photon calibration failed to bracket the {target} target; amplitude sweep (rad/s, p2): {sweep:?}")]
    CalibrationFailed {
        target: &'static str,
        sweep: Vec<(f64, f64)>,
    },

    #[error("trajectory left the physical regime: {reason} (value {value:.3e})")]
    NumericalDrift { reason: &'static str, value: f64 },

    #[error("unknown scenario `{0}` (expected fig4|fig5|fig6|fig7|rabi-ramsey)")]
    UnknownScenario(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
