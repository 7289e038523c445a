use thiserror::Error;

/// Crate-wide error type. Variants map onto the CLI exit codes
/// (parse = 2, solver = 3, verification = 4, io = 5).
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid: {0}")]
    Grid(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("material: {0}")]
    Material(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("scenario: {0}")]
    Scenario(String),

    #[error("solver: {0}")]
    Solver(String),

    #[error("rank-deficient system: {0}")]
    RankDeficient(String),

    #[error("singular step matrix at step {step}: {msg}")]
    Singular { step: usize, msg: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
