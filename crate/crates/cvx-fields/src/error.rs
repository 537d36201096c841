use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("torus dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),

    #[error("grid size must be a power of two >= 8, got {0}")]
    InvalidGridSize(usize),

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("expected {expected} components, got {got}")]
    ComponentCount { expected: usize, got: usize },

    #[error("value array has shape {got:?}, grid wants {expected:?}")]
    ShapeMismatch { expected: Vec<usize>, got: Vec<usize> },

    #[error("spectrum is not Hermitian-symmetric (inverse transform has imaginary part {max_imag:.3e})")]
    NonHermitianSpectrum { max_imag: f64 },

    #[error("a space-time field needs at least 2 time slices, got {0}")]
    TooFewTimeSlices(usize),

    #[error("invalid norm request: {0}")]
    InvalidNorm(String),

    #[error("malformed snapshot header: {0}")]
    MalformedHeader(String),

    #[error("snapshot dimensions do not match: {0}")]
    DimensionMismatch(String),

    #[error("snapshot payload truncated: expected {expected} bytes, got {got}")]
    TruncatedPayload { expected: usize, got: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
