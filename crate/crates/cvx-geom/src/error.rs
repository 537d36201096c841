use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeomError {
    #[error("dimension must be 2 or 3, got {0}")]
    InvalidDimension(usize),
    #[error("input outside the decomposition domain: {0}")]
    Domain(String),
    #[error("no chart covers the domain point {0:?} (build verification should prevent this)")]
    CoverageGap(Vec<f64>),
    #[error("direction table is not exactly orthonormal: {0}")]
    BadTable(String),
    #[error("chart construction failed: {0}")]
    ChartConstruction(String),
    #[error("parse error: {0}")]
    Parse(String),
}
