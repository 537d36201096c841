//! Right-inverse and projection identities on batches of random fields.

mod common;

use common::*;
use cvx_calc::{
    bilinear_b, bilinear_b1, biot_savart, inv_div_scalar, inv_div_tensor, leray_project,
};
use cvx_fields::{SymTensorField, TorusGrid};

const FIELDS_PER_DIM: usize = 200;

fn grid_for(d: usize) -> TorusGrid {
    // Smaller n in 3-d keeps the 200-field sweep quick; the acceptance suite
    // re-runs these identities at n = 64.
    TorusGrid::new(d, if d == 2 { 32 } else { 16 }).unwrap()
}

#[test]
fn tensor_inverse_divergence_is_right_inverse() {
    for d in [2usize, 3] {
        let grid = grid_for(d);
        let mut r = rng(100 + d as u64);
        for case in 0..FIELDS_PER_DIM {
            let f = random_mean_free_vector(&mut r, grid, grid.dealias_cutoff());
            let rf = inv_div_tensor(&f);
            let resid = rf.divergence().sub(&f).c0();
            let scale = f.c0().max(1e-300);
            assert!(
                resid <= 1e-10 * scale,
                "d={d} case={case}: residual {resid:.3e} vs scale {scale:.3e}"
            );
            // Output is trace-free and symmetric by construction; check trace.
            assert!(rf.trace().c0() <= 1e-12 * scale);
        }
    }
}

#[test]
fn scalar_inverse_divergence_is_right_inverse() {
    for d in [2usize, 3] {
        let grid = grid_for(d);
        let mut r = rng(200 + d as u64);
        for case in 0..FIELDS_PER_DIM {
            let f = random_mean_free_scalar(&mut r, grid, grid.dealias_cutoff());
            let rf = inv_div_scalar(&f);
            let resid = rf.divergence().sub(&f).c0();
            let scale = f.c0().max(1e-300);
            assert!(
                resid <= 1e-10 * scale,
                "d={d} case={case}: residual {resid:.3e}"
            );
        }
    }
}

#[test]
fn leray_projection_properties() {
    for d in [2usize, 3] {
        let grid = grid_for(d);
        let mut r = rng(300 + d as u64);
        for _ in 0..50 {
            let f = random_vector(&mut r, grid, grid.dealias_cutoff());
            let p = leray_project(&f);
            let scale = f.c0().max(1e-300);
            assert!(p.divergence().c0() <= 1e-12 * scale);
            // Idempotent.
            assert!(leray_project(&p).sub(&p).c0() <= 1e-12 * scale);
        }
    }
}

#[test]
fn biot_savart_recovers_div_free_fields() {
    let grid = TorusGrid::new(3, 16).unwrap();
    let mut r = rng(400);
    for _ in 0..50 {
        let v = random_div_free_vector(&mut r, grid, grid.dealias_cutoff()).mean_free();
        let z = biot_savart(&v).unwrap();
        let scale = v.c0().max(1e-300);
        assert!(z.curl().sub(&v).c0() <= 1e-10 * scale);
        assert!(z.divergence().c0() <= 1e-11 * scale);
    }
}

#[test]
fn bilinear_b_identity() {
    for d in [2usize, 3] {
        let grid = TorusGrid::new(d, 64).unwrap();
        let mut r = rng(500 + d as u64);
        for case in 0..10 {
            // Low-frequency v against a higher-frequency mean-free tensor:
            // the outer product doubles the raw band (12 -> 24), and 24 + 4
            // stays below Nyquist (32), so every product in the identity is
            // exact on the grid.
            let v = random_vector(&mut r, grid, 4);
            let raw = random_vector(&mut r, grid, 12);
            let a_mat = raw.outer_sym(&raw).mean_free();
            let b = bilinear_b(&v, &a_mat).unwrap();

            // div(B(v,A)) should equal vA - mean(vA).
            let va = a_mat.matvec(&v);
            let want = va.mean_free();
            let got = b.divergence();
            let scale = want.c0().max(1e-300);
            let resid = got.sub(&want).c0();
            assert!(
                resid <= 1e-9 * scale,
                "d={d} case={case}: residual {resid:.3e} vs scale {scale:.3e}"
            );
        }
    }
}

#[test]
fn bilinear_b_rejects_tensor_with_mean() {
    let grid = TorusGrid::new(2, 16).unwrap();
    let v = cvx_fields::VectorField::zeros(grid);
    let a = SymTensorField::scaled_identity(grid, 1.0);
    assert!(bilinear_b(&v, &a).is_err());
}

#[test]
fn bilinear_b1_identity() {
    for d in [2usize, 3] {
        let grid = TorusGrid::new(d, 64).unwrap();
        let mut r = rng(600 + d as u64);
        for case in 0..10 {
            let v = random_scalar(&mut r, grid, 4);
            let f = random_mean_free_scalar(&mut r, grid, 18);
            let b = bilinear_b1(&v, &f).unwrap();
            let want = v.mul(&f).mean_free();
            let got = b.divergence();
            let scale = want.c0().max(1e-300);
            let resid = got.sub(&want).c0();
            assert!(
                resid <= 1e-9 * scale,
                "d={d} case={case}: residual {resid:.3e}"
            );
        }
    }
}
