use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid tolerance {name} = {value}: must lie in (0, 1e-2)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("columns are not orthonormal (residual {residual:.3e})")]
    NotOrthonormal { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositive { eigenvalue: f64 },

    #[error("trace {trace} differs from 1")]
    BadTrace { trace: f64 },

    #[error("Kraus operators are not complete (residual {residual:.3e})")]
    Incomplete { residual: f64 },

    #[error("invalid subspace split: dim_s = {dim_s}, dim_total = {dim_total}")]
    InvalidSplit { dim_s: usize, dim_total: usize },

    #[error("map does not leave the target subspace invariant (max Q-block norm {max_q_norm:.3e})")]
    NotInvariant { max_q_norm: f64 },

    #[error("sampled outcome {index} has negligible probability {probability:.3e}")]
    MeasureZero { index: usize, probability: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
