//! End-to-end checks of the annulus and identity-ball decompositions for
//! both supported dimensions, against independent reconstructions built only
//! from the public direction tables.

use cvx_geom::{
    build_direction_sets, decompose_matrix, decompose_vector, smoothness_constant, Decomposer,
    DirectionSet, GeomError, SetKind,
};
use num_rational::Rational64;
use once_cell::sync::Lazy;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Reconstruction tolerance over random domain samples.
const SAMPLE_TOL: f64 = 1e-8;
/// Tolerance at distinguished points (pure directions, the identity).
const CENTER_TOL: f64 = 1e-10;
const SAMPLES: usize = 1000;

fn sets(d: usize) -> &'static [DirectionSet; 4] {
    static SETS2: Lazy<[DirectionSet; 4]> = Lazy::new(|| build_direction_sets(2).unwrap());
    static SETS3: Lazy<[DirectionSet; 4]> = Lazy::new(|| build_direction_sets(3).unwrap());
    match d {
        2 => &SETS2,
        3 => &SETS3,
        _ => panic!("tests only cover d in {{2, 3}}"),
    }
}

fn transport_sets(d: usize) -> impl Iterator<Item = &'static DirectionSet> {
    sets(d).iter().filter(|s| s.kind().is_transport())
}

fn euler_sets(d: usize) -> impl Iterator<Item = &'static DirectionSet> {
    sets(d).iter().filter(|s| !s.kind().is_transport())
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// |sum_i c_i xi_i - r|, built from the direction table alone.
fn vector_residual(r: &[f64], coeffs: &[f64], set: &DirectionSet) -> f64 {
    let mut recon = vec![0.0; r.len()];
    for (c, dir) in coeffs.iter().zip(set.directions()) {
        for (out, x) in recon.iter_mut().zip(dir.xi_f64()) {
            *out += c * x;
        }
    }
    let diff: Vec<f64> = recon.iter().zip(r).map(|(a, b)| a - b).collect();
    norm(&diff)
}

/// Frobenius norm of sum_i c_i^2 (xi_i xi_i^T) minus the symmetric matrix
/// given by its plain upper triangle.
fn matrix_residual(upper: &[f64], coeffs: &[f64], set: &DirectionSet) -> f64 {
    let d = set.dim();
    let mut full = vec![0.0; d * d];
    let mut k = 0;
    for i in 0..d {
        for j in i..d {
            full[i * d + j] = upper[k];
            full[j * d + i] = upper[k];
            k += 1;
        }
    }
    let mut recon = vec![0.0; d * d];
    for (c, dir) in coeffs.iter().zip(set.directions()) {
        let xi = dir.xi_f64();
        for i in 0..d {
            for j in 0..d {
                recon[i * d + j] += c * c * xi[i] * xi[j];
            }
        }
    }
    let diff: Vec<f64> = recon.iter().zip(&full).map(|(a, b)| a - b).collect();
    norm(&diff)
}

fn identity_upper(d: usize) -> Vec<f64> {
    let mut upper = Vec::new();
    for i in 0..d {
        for j in i..d {
            upper.push(if i == j { 1.0 } else { 0.0 });
        }
    }
    upper
}

/// Uniform-by-volume sample of the annulus 1/2 <= |r| <= 1.
fn annulus_sample(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm(&v);
        if n < 1e-3 {
            continue;
        }
        let lo = 0.5f64.powi(d as i32);
        let r = (lo + rng.gen::<f64>() * (1.0 - lo)).powf(1.0 / d as f64);
        return v.iter().map(|x| x * r / n).collect();
    }
}

/// Upper triangle of a symmetric matrix sampled (by rejection) from the
/// Frobenius ball of radius 1/2 around the identity.
fn near_identity_sample(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    loop {
        let mut upper = Vec::with_capacity(d * (d + 1) / 2);
        let mut dev2 = 0.0f64;
        for i in 0..d {
            for j in i..d {
                if i == j {
                    let a = rng.gen_range(-0.5..0.5);
                    dev2 += a * a;
                    upper.push(1.0 + a);
                } else {
                    let a = rng.gen_range(-0.36..0.36);
                    dev2 += 2.0 * a * a;
                    upper.push(a);
                }
            }
        }
        if dev2.sqrt() <= 0.5 {
            return upper;
        }
    }
}

#[test]
fn annulus_samples_reconstruct_with_nonnegative_coefficients() {
    for d in [2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for set in transport_sets(d) {
            let mut worst = 0.0f64;
            for _ in 0..SAMPLES {
                let r = annulus_sample(&mut rng, d);
                let dec = decompose_vector(&r, set).unwrap();
                assert!(
                    dec.coefficients.iter().all(|c| *c >= 0.0),
                    "{} d={}: negative coefficient at {:?}",
                    set.kind(),
                    d,
                    r
                );
                assert!(dec.reconstruction_error <= SAMPLE_TOL);
                worst = worst.max(vector_residual(&r, &dec.coefficients, set));
            }
            assert!(
                worst <= SAMPLE_TOL,
                "{} d={}: worst residual {worst:.3e}",
                set.kind(),
                d
            );
        }
    }
}

#[test]
fn near_identity_samples_reconstruct_with_nonnegative_weights() {
    for d in [2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for set in euler_sets(d) {
            let mut worst = 0.0f64;
            for _ in 0..SAMPLES {
                let upper = near_identity_sample(&mut rng, d);
                let dec = decompose_matrix(&upper, set).unwrap();
                assert!(dec.coefficients.iter().all(|c| *c >= 0.0));
                assert!(dec.reconstruction_error <= SAMPLE_TOL);
                worst = worst.max(matrix_residual(&upper, &dec.coefficients, set));
            }
            assert!(
                worst <= SAMPLE_TOL,
                "{} d={}: worst residual {worst:.3e}",
                set.kind(),
                d
            );
        }
    }
}

#[test]
fn pure_direction_inputs_reconstruct_tightly() {
    for d in [2, 3] {
        for set in transport_sets(d) {
            for dir in set.directions() {
                let r: Vec<f64> = dir.xi_f64().iter().map(|x| 0.75 * x).collect();
                let dec = decompose_vector(&r, set).unwrap();
                assert!(dec.coefficients.iter().all(|c| *c >= 0.0));
                let res = vector_residual(&r, &dec.coefficients, set);
                assert!(
                    res <= CENTER_TOL,
                    "{} d={}: residual {res:.3e} at 0.75*xi",
                    set.kind(),
                    d
                );
            }
        }
    }
}

#[test]
fn identity_matrix_decomposes_tightly() {
    for d in [2, 3] {
        let upper = identity_upper(d);
        for set in euler_sets(d) {
            let dec = decompose_matrix(&upper, set).unwrap();
            assert!(dec.reconstruction_error <= CENTER_TOL);
            let res = matrix_residual(&upper, &dec.coefficients, set);
            assert!(res <= CENTER_TOL, "{} d={}: residual {res:.3e}", set.kind(), d);
        }
    }
}

#[test]
fn diagonal_stretch_near_identity_reconstructs() {
    // Id + 0.4 * diag(1, -1, [0]) / sqrt(2): Frobenius deviation 0.4.
    let s = 0.4 / std::f64::consts::SQRT_2;
    let cases: [(usize, Vec<f64>); 2] = [
        (2, vec![1.0 + s, 0.0, 1.0 - s]),
        (3, vec![1.0 + s, 0.0, 0.0, 1.0 - s, 0.0, 1.0]),
    ];
    for (d, upper) in cases {
        for set in euler_sets(d) {
            let dec = decompose_matrix(&upper, set).unwrap();
            let res = matrix_residual(&upper, &dec.coefficients, set);
            assert!(res <= SAMPLE_TOL, "{} d={}: residual {res:.3e}", set.kind(), d);
        }
    }
}

#[test]
fn out_of_domain_inputs_are_rejected() {
    for d in [2, 3] {
        let t = transport_sets(d).next().unwrap();
        let mut small = vec![0.0; d];
        small[0] = 0.3;
        assert!(matches!(decompose_vector(&small, t), Err(GeomError::Domain(_))));
        let mut big = vec![0.0; d];
        big[0] = 1.2;
        assert!(matches!(decompose_vector(&big, t), Err(GeomError::Domain(_))));

        let e = euler_sets(d).next().unwrap();
        let mut upper = identity_upper(d);
        upper[0] += 0.7;
        assert!(matches!(decompose_matrix(&upper, e), Err(GeomError::Domain(_))));
    }
}

#[test]
fn mismatched_set_kind_or_shape_is_rejected() {
    let t = &sets(2)[0];
    let e = &sets(2)[2];
    assert!(matches!(decompose_vector(&[0.75, 0.0], e), Err(GeomError::Domain(_))));
    assert!(matches!(
        decompose_matrix(&[1.0, 0.0, 1.0], t),
        Err(GeomError::Domain(_))
    ));
    assert!(matches!(
        decompose_vector(&[0.6, 0.0, 0.0], t),
        Err(GeomError::Domain(_))
    ));
    assert!(matches!(
        decompose_matrix(&[1.0, 0.0, 0.0, 1.0], e),
        Err(GeomError::Domain(_))
    ));
}

#[test]
fn unsupported_dimensions_are_rejected() {
    assert!(matches!(
        build_direction_sets(4),
        Err(GeomError::InvalidDimension(4))
    ));
    assert!(matches!(
        DirectionSet::build(SetKind::EulerOdd, 1),
        Err(GeomError::InvalidDimension(1))
    ));
}

/// out[i] = sign[i] * v[perm[i]] over rational entries.
fn signed_permute_rat(v: &[Rational64], perm: &[usize], signs: &[i64]) -> Vec<Rational64> {
    perm.iter()
        .zip(signs)
        .map(|(&p, &s)| v[p] * Rational64::from_integer(s))
        .collect()
}

#[test]
fn axis_permutation_keeps_reconstruction_consistent() {
    // The transport tables are orbits under signed axis permutations, so a
    // reversal with one sign flip maps each set to itself (checked exactly);
    // decomposing a point and its permuted image must then reproduce both to
    // the tight tolerance.
    for d in [2usize, 3] {
        let perm: Vec<usize> = (0..d).rev().collect();
        let mut signs = vec![1i64; d];
        signs[0] = -1;
        for set in transport_sets(d) {
            for dir in set.directions() {
                let pxi = signed_permute_rat(dir.xi(), &perm, &signs);
                assert!(
                    set.directions().iter().any(|o| o.xi() == pxi.as_slice()),
                    "{} d={} not closed under the permutation",
                    set.kind(),
                    d
                );
            }
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for _ in 0..50 {
                let r = annulus_sample(&mut rng, d);
                let pr: Vec<f64> = perm
                    .iter()
                    .zip(&signs)
                    .map(|(&p, &s)| s as f64 * r[p])
                    .collect();
                let a = decompose_vector(&r, set).unwrap();
                let b = decompose_vector(&pr, set).unwrap();
                assert!(vector_residual(&r, &a.coefficients, set) <= CENTER_TOL);
                assert!(vector_residual(&pr, &b.coefficients, set) <= CENTER_TOL);
            }
        }
    }
}

#[test]
fn direction_tables_are_unit_orthonormal_with_small_n_star() {
    for d in [2, 3] {
        for set in sets(d) {
            for dir in set.directions() {
                let xi = dir.xi_f64();
                assert!((norm(&xi) - 1.0).abs() <= 1e-14);
                for i in 0..d - 1 {
                    let a = dir.frame_f64(i);
                    assert!((norm(&a) - 1.0).abs() <= 1e-14);
                    let dot_xi: f64 = a.iter().zip(&xi).map(|(x, y)| x * y).sum();
                    assert!(dot_xi.abs() <= 1e-14);
                    for j in i + 1..d - 1 {
                        let b = dir.frame_f64(j);
                        let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                        assert!(dot.abs() <= 1e-14);
                    }
                }
                assert!(dir.n_star() <= 100, "n_* = {} too large", dir.n_star());
                let n = Rational64::from_integer(dir.n_star());
                for entry in dir.xi() {
                    assert!((n * entry).is_integer());
                }
                for i in 0..d - 1 {
                    for entry in dir.frame(i) {
                        assert!((n * entry).is_integer());
                    }
                }
            }
        }
    }
}

#[test]
fn the_four_kinds_are_pairwise_disjoint() {
    for d in [2, 3] {
        let s = sets(d);
        for i in 0..4 {
            for j in i + 1..4 {
                for a in s[i].directions() {
                    assert!(
                        !s[j].directions().iter().any(|b| b.xi() == a.xi()),
                        "{} and {} share {:?} (d={})",
                        s[i].kind(),
                        s[j].kind(),
                        a.xi(),
                        d
                    );
                }
            }
        }
    }
}

#[test]
fn rebuilt_sets_decompose_bitwise_identically() {
    for d in [2, 3] {
        let again = build_direction_sets(d).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(37);
        for (a, b) in sets(d).iter().zip(&again) {
            for _ in 0..20 {
                if a.kind().is_transport() {
                    let r = annulus_sample(&mut rng, d);
                    let da = decompose_vector(&r, a).unwrap();
                    let db = decompose_vector(&r, b).unwrap();
                    assert_eq!(da.coefficients, db.coefficients);
                } else {
                    let upper = near_identity_sample(&mut rng, d);
                    let da = decompose_matrix(&upper, a).unwrap();
                    let db = decompose_matrix(&upper, b).unwrap();
                    assert_eq!(da.coefficients, db.coefficients);
                }
            }
        }
    }
}

#[test]
fn streaming_decomposer_matches_the_one_shot_functions() {
    for d in [2, 3] {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for set in sets(d) {
            let mut dec = Decomposer::new(set);
            for _ in 0..50 {
                if set.kind().is_transport() {
                    let r = annulus_sample(&mut rng, d);
                    let one_shot = decompose_vector(&r, set).unwrap().coefficients;
                    let streamed = dec.vector_coefficients(&r).unwrap().to_vec();
                    assert_eq!(one_shot, streamed);
                } else {
                    let upper = near_identity_sample(&mut rng, d);
                    let one_shot = decompose_matrix(&upper, set).unwrap().coefficients;
                    let streamed = dec.matrix_coefficients(&upper).unwrap().to_vec();
                    assert_eq!(one_shot, streamed);
                }
            }
            if set.kind().is_transport() {
                let mut small = vec![0.0; d];
                small[0] = 0.2;
                assert!(matches!(
                    dec.vector_coefficients(&small),
                    Err(GeomError::Domain(_))
                ));
            } else {
                let mut upper = identity_upper(d);
                upper[0] += 0.8;
                assert!(matches!(
                    dec.matrix_coefficients(&upper),
                    Err(GeomError::Domain(_))
                ));
            }
        }
    }
}

#[test]
fn smoothness_constants_are_finite_and_reported() {
    // Regression canary: measured values sit between ~4 and ~46 across the
    // eight sets; a blow-up past 200 means a chart got too thin.
    for d in [2, 3] {
        for set in sets(d) {
            let m = smoothness_constant(set).unwrap();
            assert!(m.is_finite() && m > 0.0);
            assert!(m <= 200.0, "{} d={}: smoothness constant {m:.3}", set.kind(), d);
            println!("smoothness constant {} d={}: {m:.3}", set.kind(), d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn any_annulus_vector_decomposes_nonnegatively(
        theta in 0.0..std::f64::consts::TAU,
        rad in 0.5f64..=1.0,
    ) {
        let r = [rad * theta.cos(), rad * theta.sin()];
        for set in transport_sets(2) {
            let dec = decompose_vector(&r, set).unwrap();
            prop_assert!(dec.coefficients.iter().all(|c| *c >= 0.0));
            prop_assert!(vector_residual(&r, &dec.coefficients, set) <= SAMPLE_TOL);
        }
    }

    #[test]
    fn vectors_off_the_annulus_are_rejected(
        theta in 0.0..std::f64::consts::TAU,
        rad in prop_oneof![0.0f64..0.499, 1.001f64..3.0],
    ) {
        let set = &sets(2)[0];
        let r = [rad * theta.cos(), rad * theta.sin()];
        prop_assert!(matches!(decompose_vector(&r, set), Err(GeomError::Domain(_))));
    }

    #[test]
    fn any_matrix_near_identity_decomposes(
        a in -0.35f64..0.35,
        b in -0.24f64..0.24,
        c in -0.35f64..0.35,
    ) {
        let dev = (a * a + 2.0 * b * b + c * c).sqrt();
        prop_assume!(dev <= 0.5);
        let upper = [1.0 + a, b, 1.0 + c];
        for set in euler_sets(2) {
            let dec = decompose_matrix(&upper, set).unwrap();
            prop_assert!(dec.coefficients.iter().all(|w| *w >= 0.0));
            prop_assert!(matrix_residual(&upper, &dec.coefficients, set) <= SAMPLE_TOL);
        }
    }

    #[test]
    fn matrices_far_from_identity_are_rejected(
        excess in 0.51f64..2.0,
        slot in 0usize..3,
    ) {
        let mut upper = [1.0, 0.0, 1.0];
        match slot {
            0 => upper[0] += excess,
            1 => upper[1] = excess / std::f64::consts::SQRT_2,
            _ => upper[2] -= excess,
        }
        let set = &sets(2)[2];
        prop_assert!(matches!(decompose_matrix(&upper, set), Err(GeomError::Domain(_))));
    }
}
