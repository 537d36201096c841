//! Periodic fields on the unit torus T^d = R^d/Z^d (d = 2 or 3) sampled on a
//! uniform n^d grid, with cached Fourier transforms.
//!
//! Grid points are x_j = j/n, frequencies are integer vectors k with
//! components in [-n/2, n/2). The spectral convention is
//!
//! ```text
//! f(x) = sum_k  c_k  exp(2 pi i k.x),      c_k = (1/n^d) sum_j f(x_j) exp(-2 pi i k.x_j),
//! ```
//!
//! so `c_0` is the mean and Parseval reads `sum_k |c_k|^2 = (1/n^d) sum_j |f(x_j)|^2`.
//!
//! Fields are immutable: every operation returns a new field, and the
//! transform of a field is computed at most once and cached.

mod error;
mod fft;
mod grid;
mod norms;
mod scalar;
mod snapshot;
mod spacetime;
mod tensor;
mod vector;

pub use error::FieldError;
pub use grid::TorusGrid;
pub use norms::{hoelder_pairs, NormReport, NormTag, HOELDER_PAIRS};
pub use scalar::ScalarField;
pub use snapshot::{snapshot_read, snapshot_write, Snapshot};
pub use spacetime::{SpaceTimeField, TimeSlice};
pub use tensor::{sym_index, sym_len, MatrixField, SymTensorField};
pub use vector::VectorField;

pub type Complex = num_complex::Complex64;

/// Remove the spatial mean from a scalar field.
pub fn project_mean_free(f: &ScalarField) -> ScalarField {
    f.mean_free()
}
