use thiserror::Error;

#[derive(Debug, Error)]
pub enum BlocksError {
    #[error("bad jet parameters: {0}")]
    InvalidParams(String),

    #[error("building blocks need dimension 2 or 3, got {0}")]
    InvalidDimension(usize),

    #[error("tube supports of directions {first} and {second} collide at separation {gap:.3e} (needed {needed:.3e})")]
    SupportCollision {
        first: String,
        second: String,
        gap: f64,
        needed: f64,
    },

    #[error("could not place disjoint tube offsets after {0} radius halvings")]
    OffsetsInfeasible(usize),

    #[error("temporal slots for {members} profiles of width {eta} do not fit in a unit period")]
    SlotsDontFit { members: usize, eta: f64 },

    #[error("scaling sweep needs at least {needs} admissible points, got {got}")]
    DegenerateSweep { needs: usize, got: usize },

    #[error(transparent)]
    Field(#[from] cvx_fields::FieldError),

    #[error(transparent)]
    Geom(#[from] cvx_geom::GeomError),
}
