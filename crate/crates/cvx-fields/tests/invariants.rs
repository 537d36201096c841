use cvx_fields::{project_mean_free, ScalarField, SymTensorField, TorusGrid};
use ndarray::ArrayD;
use proptest::prelude::*;

fn field_from_raw(d: usize, n: usize, raw: &[f64]) -> ScalarField {
    let grid = TorusGrid::new(d, n).unwrap();
    let values = ArrayD::from_shape_vec(grid.shape(), raw.to_vec()).unwrap();
    ScalarField::from_values(grid, values).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parseval_holds_on_random_fields(raw in proptest::collection::vec(-1e3..1e3f64, 64)) {
        let f = field_from_raw(2, 8, &raw);
        let spectral: f64 = f.spectrum().iter().map(|c| c.norm_sqr()).sum();
        let physical: f64 = raw.iter().map(|v| v * v).sum::<f64>() / raw.len() as f64;
        let scale = physical.max(1.0);
        prop_assert!((spectral - physical).abs() <= 1e-12 * scale,
            "Parseval gap {:.3e}", (spectral - physical).abs());
    }

    #[test]
    fn transform_roundtrip_is_tight(raw in proptest::collection::vec(-1e3..1e3f64, 512)) {
        let f = field_from_raw(3, 8, &raw);
        let back = ScalarField::from_spectrum(f.grid(), f.spectrum().clone()).unwrap();
        let scale = f.c0().max(1.0);
        prop_assert!(f.sub(&back).c0() <= 1e-12 * scale);
    }

    #[test]
    fn lp_norms_are_monotone_in_p(raw in proptest::collection::vec(-1e2..1e2f64, 64)) {
        // On a probability space ||f||_p <= ||f||_q for p <= q.
        let f = field_from_raw(2, 8, &raw);
        let l1 = f.lp(1.0);
        let l2 = f.lp(2.0);
        let l4 = f.lp(4.0);
        let linf = f.lp(f64::INFINITY);
        let eps = 1e-12 * linf.max(1.0);
        prop_assert!(l1 <= l2 + eps);
        prop_assert!(l2 <= l4 + eps);
        prop_assert!(l4 <= linf + eps);
    }

    #[test]
    fn mean_free_projection_is_idempotent(raw in proptest::collection::vec(-1e3..1e3f64, 64)) {
        let f = field_from_raw(2, 8, &raw);
        let g = project_mean_free(&f);
        let scale = f.c0().max(1.0);
        prop_assert!(g.mean().abs() <= 1e-14 * scale);
        // out + mean(f) = f
        let rebuilt = g.map(|v| v + f.mean());
        prop_assert!(rebuilt.sub(&f).c0() <= 1e-13 * scale);
        let gg = project_mean_free(&g);
        prop_assert!(gg.sub(&g).c0() <= 1e-14 * scale);
    }

    #[test]
    fn trace_free_projection_kills_trace(raw in proptest::collection::vec(-1e2..1e2f64, 6 * 64)) {
        let grid = TorusGrid::new(2, 8).unwrap();
        let vol = grid.len();
        let entries: Vec<ScalarField> = (0..3)
            .map(|c| field_from_raw(2, 8, &raw[c * vol..(c + 1) * vol]))
            .collect();
        let s = SymTensorField::new(grid, entries);
        let tf = s.trace_free();
        let scale = s.frobenius_c0().max(1.0);
        prop_assert!(tf.trace().c0() <= 1e-12 * scale);
        // Off-diagonal entries are untouched.
        prop_assert!(tf.entry(0, 1).sub(s.entry(0, 1)).c0() <= 1e-15 * scale);
    }

    #[test]
    fn derivative_kills_constants_and_commutes(raw in proptest::collection::vec(-1e2..1e2f64, 64), c in -1e3..1e3f64) {
        let f = field_from_raw(2, 8, &raw);
        let g = f.map(|v| v + c);
        let scale = f.c0().max(c.abs()).max(1.0);
        // d(f + c) = df
        prop_assert!(g.partial(0).sub(&f.partial(0)).c0() <= 1e-10 * scale);
        // mixed partials commute
        let fxy = f.partial(0).partial(1);
        let fyx = f.partial(1).partial(0);
        prop_assert!(fxy.sub(&fyx).c0() <= 1e-9 * scale);
    }
}
