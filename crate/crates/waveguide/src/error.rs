use num_complex::Complex64;

/// Crate-wide error type. Variant names double as the stable identifiers
/// printed by the CLI, so `Display` always starts with the variant name.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("InvalidInput: {0}")]
    InvalidInput(String),

    #[error("NoConvergence: branch {branch}: residual {residual:.3e} after {iters} Newton iterations (tol {tol:.1e}, s = {s})")]
    NoConvergence {
        branch: usize,
        s: f64,
        residual: f64,
        tol: f64,
        iters: usize,
    },

    #[error("PoleProximity: branch {branch}: iterate {lambda} entered the pole guard around -a_l or -a_0 (s = {s})")]
    PoleProximity {
        branch: usize,
        s: f64,
        lambda: Complex64,
    },

    #[error("ContinuationStall: branch {branch}: step fell below {floor:.3e} at s = {s}")]
    ContinuationStall { branch: usize, s: f64, floor: f64 },

    #[error("BandViolation: branch {branch}: Re lambda = {re_lambda} left its band or crossed a line Re = k*nu at s = {s}")]
    BandViolation {
        branch: usize,
        s: f64,
        re_lambda: f64,
    },

    #[error("RatioSingularity: lambda = {lambda} is within the pole guard of a_0 = {a_0}; the two-exponential form is ill-conditioned there")]
    RatioSingularity { lambda: Complex64, a_0: f64 },

    #[error("DegeneratePairing: mode {index}: |pairing| = {magnitude:.3e} is below the floor {floor:.1e}")]
    DegeneratePairing {
        index: usize,
        magnitude: f64,
        floor: f64,
    },

    #[error("NotPositive: Gram matrix has lambda_min = {lambda_min:.3e}; the mode family is not a frame at this size")]
    NotPositive { lambda_min: f64 },

    #[error("GridTooCoarse: quadrature self-estimate {estimate:.3e} exceeds {limit:.1e}")]
    GridTooCoarse { estimate: f64, limit: f64 },

    #[error("TableTooShort: {0}")]
    TableTooShort(String),

    #[error("TableDegeneracy: modes {i} and {j}: {detail}")]
    TableDegeneracy { i: usize, j: usize, detail: String },

    #[error("TruncationTooCoarse: modal defect {defect:.3e} exceeds {limit:.1e}; raise the mode count or smooth the data")]
    TruncationTooCoarse { defect: f64, limit: f64 },

    #[error("NonPositiveNorm: norm sample at t = {t} is not positive; cannot fit a decay rate in log space")]
    NonPositiveNorm { t: f64 },

    #[error("LinearSolveFailure: tridiagonal pivot vanished at row {row}")]
    LinearSolveFailure { row: usize },

    #[error("DeltaOutOfRange: delta = {delta} must be greater than 1/2 for the weight <x>^-delta")]
    DeltaOutOfRange { delta: f64 },

    #[error("BranchJump: branch {branch}: |delta lambda| = {jump:.3e} between s = {s_prev} and s = {s} exceeds nu/2 after maximal refinement")]
    BranchJump {
        branch: usize,
        s_prev: f64,
        s: f64,
        jump: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
