//! Deterministic random band-limited fields for operator identity tests.
//! Band-limiting below the Nyquist frequency keeps spectral derivative
//! identities exact; products of two such fields stay below Nyquist as long
//! as the combined cutoffs do.
#![allow(dead_code)] // each test binary uses a different subset

use cvx_fields::{ScalarField, TorusGrid, VectorField};
use ndarray::ArrayD;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_scalar(rng: &mut ChaCha8Rng, grid: TorusGrid, kmax: i64) -> ScalarField {
    let values: Vec<f64> = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let raw = ScalarField::from_values(grid, ArrayD::from_shape_vec(grid.shape(), values).unwrap())
        .unwrap();
    raw.band_limit(kmax)
}

pub fn random_mean_free_scalar(rng: &mut ChaCha8Rng, grid: TorusGrid, kmax: i64) -> ScalarField {
    random_scalar(rng, grid, kmax).mean_free()
}

pub fn random_vector(rng: &mut ChaCha8Rng, grid: TorusGrid, kmax: i64) -> VectorField {
    VectorField::new(
        (0..grid.dim())
            .map(|_| random_scalar(rng, grid, kmax))
            .collect(),
    )
    .unwrap()
}

pub fn random_mean_free_vector(rng: &mut ChaCha8Rng, grid: TorusGrid, kmax: i64) -> VectorField {
    random_vector(rng, grid, kmax).mean_free()
}

pub fn random_div_free_vector(rng: &mut ChaCha8Rng, grid: TorusGrid, kmax: i64) -> VectorField {
    cvx_calc::leray_project(&random_vector(rng, grid, kmax))
}
