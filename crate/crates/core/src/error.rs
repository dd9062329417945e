use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix: pivot magnitude {pivot:e} below threshold {threshold:e}")]
    SingularMatrix { pivot: f64, threshold: f64 },

    #[error("shape mismatch in {op}: {left:?} vs {right:?}")]
    ShapeMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("invalid group element: {0}")]
    InvalidElement(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid tangent vector: {0}")]
    InvalidTangent(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("point too close to the boundary: margin {margin:e} < required {required:e}")]
    DomainMargin { margin: f64, required: f64 },

    #[error("quadratic form is not real: imaginary part {imag:e} for value {real:e}")]
    NonRealForm { real: f64, imag: f64 },

    #[error("symmetric result drifted: defect {defect:e}")]
    SymmetryDefect { defect: f64 },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("unknown check '{0}'")]
    UnknownCheck(String),

    #[error("unknown field '{0}'")]
    UnknownField(String),

    #[error("malformed json: {0}")]
    Json(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
