use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DavError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// No weight `w` satisfies `C(w + p - 1, p - 1) = target`.
    #[error("no weight w with C(w+{p}-1, {p}-1) = {target}")]
    NoParameters { target: usize, p: usize },

    #[error("vector length {found} does not match candidate count {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{what} would produce {count} items, above the cap of {cap}")]
    CapExceeded { what: &'static str, count: u128, cap: u128 },

    #[error("{what} needs {required} steps, above the size guard of {guard}")]
    SizeGuard { what: &'static str, required: u128, guard: u128 },

    #[error("expected a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("strategies must be distinct")]
    EqualStrategies,

    #[error("malformed tableau: {0}")]
    Malformed(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, DavError>;
