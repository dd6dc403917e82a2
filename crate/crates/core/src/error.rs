use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("port rates sum to {sum} but 2*kappa = {expected}")]
    SumMismatch { sum: f64, expected: f64 },
    #[error("blue-detuned pump (detuning = {0}); the linear model requires detuning <= 0")]
    BlueDetuned(f64),
    #[error("coupling g_c = {g_c} violates the stability bound g_c < kappa = {kappa}")]
    Overcoupled { g_c: f64, kappa: f64 },
    #[error("{name} must be positive (got {value})")]
    NonPositiveRate { name: &'static str, value: f64 },
    #[error("detection efficiency {0} outside [0, 1]")]
    BadEfficiency(f64),
    #[error("omega = {omega} lies in the pole band of the real-valued spring-shift form")]
    NearPole { omega: f64 },
    #[error("damping target {target} unreachable below g_c = kappa; maximum attainable is {max_attainable}")]
    NoRoot { target: f64, max_attainable: f64 },
    #[error("mechanical transfer elements are undefined at zero coupling")]
    ZeroCoupling,
    #[error("singular system matrix at omega = {0}")]
    SingularMatrix(f64),
    #[error("vacuum port cannot be used as a detection channel")]
    InvalidPort,
    #[error("static output carrier vanishes; output modulation quadratures are undefined")]
    ZeroCarrier,
    #[error("force quadrature ratio diverges at zero detuning in the closed-form path")]
    ZeroDetuningQuadrature,
    #[error("optimal cooperativity diverges at zero frequency")]
    ZeroFrequency,
    #[error("requested cooperativity/detuning region violates g_c < kappa")]
    Unstable,
    #[error("optimizer did not converge after {iterations} iterations (best SNR {best})")]
    NotConverged { iterations: usize, best: f64 },
    #[error("trajectory exceeded the overflow guard at step {step}")]
    UnstableBlowup { step: usize },
    #[error("residual transient {residual} exceeds the settling tolerance")]
    NotSettled { residual: f64 },
    #[error("trajectory too short for Welch estimation: {segments} segments, need at least 8")]
    TooShort { segments: usize },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
