use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    DataLength { rows: usize, cols: usize, len: usize },

    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },

    #[error("shape mismatch in {op}: {detail}")]
    Shape { op: &'static str, detail: String },

    #[error("power iteration on a {rows}x{cols} matrix did not converge in {iterations} iterations")]
    NoConvergence { rows: usize, cols: usize, iterations: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("not a partial isometry: residual {residual:e}")]
    NotPartialIsometry { residual: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid tolerance configuration: {0}")]
    Tolerance(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),
}
