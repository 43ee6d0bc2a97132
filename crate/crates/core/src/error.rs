use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid pulse: {0}")]
    InvalidPulse(String),
    #[error("invalid signal: {0}")]
    InvalidSignal(String),
    #[error("window half-width {window:e} s is narrower than 6 sigma ({min:e} s)")]
    WindowTooNarrow { window: f64, min: f64 },
    #[error("sample count {0} is not a power of two >= 2")]
    NotPowerOfTwo(usize),
    #[error("scale factor must be positive, got {0}")]
    NonPositiveFactor(f64),
    #[error("geometry error: {0}")]
    Geometry(String),
    #[error("|beta| = {0} is not below 1")]
    SuperluminalVelocity(f64),
    #[error("frequency must be positive, got {0} rad/s")]
    NonPositiveFrequency(f64),
    #[error("lossless material evaluated at its transverse resonance {0} rad/s")]
    PoleAtResonance(f64),
    #[error("invalid material: {0}")]
    InvalidMaterial(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("Mie series did not converge: {0}")]
    ConvergenceFailure(String),
    #[error("scattering angle {0} rad outside [0, pi]")]
    InvalidAngle(f64),
    #[error("signal has zero variance")]
    DegenerateSignal,
    #[error("signal lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("max lag {max_lag} must be below N/2 = {half}")]
    InvalidLag { max_lag: usize, half: usize },
    #[error("internal consistency check failed: {0}")]
    AssertionFailure(String),
}
