use thiserror::Error;

#[derive(Debug, Error)]
pub enum CalcError {
    #[error("second argument must be mean-free, but has mean {mean:.3e}")]
    NotMeanFree { mean: f64 },

    #[error("mollifier scale must lie in (0, 1/4], got {0}")]
    BadScale(f64),

    #[error("operator needs dimension {needs}, got {got}")]
    NeedsDim { needs: usize, got: usize },

    #[error("phase map is too far from the identity: sup |grad Phi - Id| = {dist:.3}")]
    NotNearIdentity { dist: f64 },

    #[error("log-log fit needs at least two positive samples, got {0}")]
    TooFewSamples(usize),
}
