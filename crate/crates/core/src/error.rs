use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("index {index} out of range for dimension {len}")]
    Index { index: usize, len: usize },
    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is numerically singular (min |eigenvalue| = {min_abs_eigenvalue:e})")]
    Singular { min_abs_eigenvalue: f64 },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("unsupported family for this operation: {0}")]
    UnsupportedFamily(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
}
