use thiserror::Error;

/// Failure modes across the crate. Variants mirror the contract of the
/// operation that raises them.
#[derive(Debug, Error)]
pub enum RotorError {
    #[error("not a resonance: beta = {beta} but nu/P + Q/2 = {expected} (mod 1) for nu = {nu}")]
    NotAResonance { beta: f64, expected: f64, nu: i64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),

    #[error("grid mismatch: {grid_points} grid points is not a multiple of Q = {q_len}")]
    GridMismatch { grid_points: usize, q_len: u64 },

    #[error("matrix is not unitary: defect {defect:e} exceeds {tol:e}")]
    NotUnitary { defect: f64, tol: f64 },

    #[error("eigensolver convergence failure: {what}")]
    ConvergenceFailure { what: String },

    #[error(
        "band tracking ambiguous at grid index {grid_index} (theta = {theta}): \
         best overlap {best} vs second {second}"
    )]
    TrackingAmbiguity {
        grid_index: usize,
        theta: f64,
        best: f64,
        second: f64,
    },

    #[error("band index {j} out of range for order {q}")]
    InvalidBand { j: usize, q: u64 },

    #[error("pole hit: |a_m - z| = {dist:e} below 1e-14 for site {site}")]
    PoleHit { site: usize, dist: f64 },

    #[error("enumeration budget exceeded: alpha = {alpha} > 30")]
    BudgetExceeded { alpha: u32 },

    #[error("degenerate residue: a_{site} coincides with a_{j} where distinctness is required")]
    DegenerateResidue { site: usize, j: usize },

    #[error("degenerate factor: a_{site} = a_{j} makes log|a a* - 1| divergent")]
    DegenerateFactor { site: usize, j: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

pub type Result<T> = core::result::Result<T, RotorError>;
