//! Rational direction sets and the two convex decompositions they support:
//! vectors in the annulus `1/2 <= |r| <= 1` as positive combinations of set
//! directions, and symmetric matrices within Frobenius distance 1/2 of the
//! identity as combinations of dyads `xi (x) xi` with real amplitudes.
//!
//! Every direction is a rational unit vector carrying a rational orthonormal
//! completion and the smallest integer `n_*` that clears all denominators
//! (at most 100 for the built-in tables; the built sets assert it).  There
//! are two disjoint sets of each flavor so that alternating construction
//! steps can draw from non-overlapping direction pools.
//!
//! Coefficients come from smooth affine charts blended by a partition of
//! unity, so they vary smoothly in the input, stay nonnegative, and
//! reconstruct the input exactly up to rounding.  Chart placement is
//! deterministic; serializing a set stores only the rational table and the
//! charts are rebuilt on load.
//!
//! Symmetric matrices are passed as their plain upper triangle, row-major
//! (`[r00, r01, r11]` for d = 2), matching the field crates' packed layout.

mod chart;
mod decompose;
mod direction;
mod error;
mod linalg;
mod sets;
mod tables;

pub use decompose::{
    decompose_matrix, decompose_vector, smoothness_constant, Decomposer, Decomposition,
};
pub use direction::Direction;
pub use error::GeomError;
pub use sets::{build_direction_sets, DirectionSet, SetKind};
