//! Right inverses of the divergence, built mode by mode.
//!
//! For a mean-free vector field f, `inv_div_tensor` returns a symmetric
//! trace-free tensor R(f) with div R(f) = f; for a mean-free scalar,
//! `inv_div_scalar` is grad of the inverse Laplacian. Both drop the zero mode
//! of the input (the right inverse only exists on mean-free data) and the
//! Nyquist modes (which carry no consistent derivative).

use crate::CalcError;
use cvx_fields::{ScalarField, SymTensorField, TorusGrid, VectorField};
use ndarray::{ArrayD, Dimension};
use num_complex::Complex64;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn freq_vec(grid: TorusGrid, idx: &[usize], out: &mut [i64]) {
    for (a, &i) in out.iter_mut().zip(idx) {
        *a = grid.freq_of(i);
    }
}

fn has_nyquist(grid: TorusGrid, k: &[i64]) -> bool {
    let nyq = -(grid.n() as i64) / 2;
    k.iter().any(|&a| a == nyq)
}

/// Inverse Laplacian: multiplier -1/(4 pi^2 |k|^2), zero mode mapped to 0.
pub fn inv_laplace(f: &ScalarField) -> ScalarField {
    f.apply_multiplier(|k| {
        let k2: f64 = k.iter().map(|&a| (a * a) as f64).sum();
        if k2 == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(-1.0 / (TWO_PI * TWO_PI * k2), 0.0)
        }
    })
}

/// grad of the inverse Laplacian: div(out) = f - mean(f).
pub fn inv_div_scalar(f: &ScalarField) -> VectorField {
    let grid = f.grid();
    let nyq = -(grid.n() as i64) / 2;
    let comps = (0..grid.dim())
        .map(|axis| {
            f.apply_multiplier(|k| {
                let k2: f64 = k.iter().map(|&a| (a * a) as f64).sum();
                if k2 == 0.0 || k.iter().any(|&a| a == nyq) {
                    Complex64::new(0.0, 0.0)
                } else {
                    // (2 pi i k_axis) * (-1/(4 pi^2 |k|^2))
                    Complex64::new(0.0, -k[axis] as f64 / (TWO_PI * k2))
                }
            })
        })
        .collect();
    VectorField::new(comps).unwrap()
}

/// Symmetric trace-free right inverse of the divergence on vector fields.
pub fn inv_div_tensor(f: &VectorField) -> SymTensorField {
    let grid = f.grid();
    let d = grid.dim();
    // Symbol coefficients: the tensor is built from
    //   c1 * k_i k_j k_m / |k|^2  +  c2 * k_m delta_ij  -  k_i delta_jm  -  k_j delta_im,
    // all times i/(2 pi |k|^2), applied to component m of the input.
    let c1 = -(2.0 - d as f64) / (d as f64 - 1.0);
    let c2 = 1.0 / (d as f64 - 1.0);

    let specs: Vec<&ArrayD<Complex64>> = f.comps().iter().map(|c| c.spectrum()).collect();
    let n_entries = cvx_fields::sym_len(d);
    let mut out: Vec<ArrayD<Complex64>> = (0..n_entries)
        .map(|_| ArrayD::zeros(specs[0].raw_dim()))
        .collect();

    let mut k = vec![0i64; d];
    for (idx, _) in specs[0].indexed_iter() {
        freq_vec(grid, idx.slice(), &mut k);
        let k2: f64 = k.iter().map(|&a| (a * a) as f64).sum();
        if k2 == 0.0 || has_nyquist(grid, &k) {
            continue;
        }
        let kf: Vec<f64> = k.iter().map(|&a| a as f64).collect();
        let fhat: Vec<Complex64> = specs.iter().map(|s| s[&idx]).collect();
        let pre = Complex64::new(0.0, 1.0 / (TWO_PI * k2));
        for i in 0..d {
            for j in i..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for (m, &fm) in fhat.iter().enumerate() {
                    let mut sym = c1 * kf[i] * kf[j] * kf[m] / k2;
                    if i == j {
                        sym += c2 * kf[m];
                    }
                    if j == m {
                        sym -= kf[i];
                    }
                    if i == m {
                        sym -= kf[j];
                    }
                    acc += fm * sym;
                }
                out[cvx_fields::sym_index(d, i, j)][&idx] = pre * acc;
            }
        }
    }

    let entries = out
        .into_iter()
        .map(|s| ScalarField::from_spectrum(grid, s).expect("symbol preserves Hermitian symmetry"))
        .collect();
    SymTensorField::new(grid, entries)
}

fn require_mean_free(mean: f64, scale: f64) -> Result<(), CalcError> {
    if mean.abs() > 1e-12 * scale.max(1.0) {
        return Err(CalcError::NotMeanFree { mean });
    }
    Ok(())
}

/// Bilinear inverse divergence on (vector, mean-free symmetric tensor):
/// div(out) = vA - mean(vA). Rejects tensors with a nonzero mean entry.
pub fn bilinear_b(v: &VectorField, a: &SymTensorField) -> Result<SymTensorField, CalcError> {
    let grid = v.grid();
    let d = grid.dim();
    let scale = a.frobenius_c0();
    for m in a.mean() {
        require_mean_free(m, scale)?;
    }

    // R applied to each row of A, reused for both terms.
    let r_rows: Vec<SymTensorField> = (0..d)
        .map(|m| {
            let row =
                VectorField::new((0..d).map(|k| a.entry(m, k).clone()).collect()).unwrap();
            inv_div_tensor(&row)
        })
        .collect();

    let mut term1 = SymTensorField::zeros(grid);
    let mut h = VectorField::zeros(grid);
    for m in 0..d {
        term1 = term1.add(&r_rows[m].mul_scalar(v.comp(m)));
        let grad_vm =
            VectorField::new((0..d).map(|i| v.comp(m).partial(i)).collect()).unwrap();
        h = h.add(&r_rows[m].matvec(&grad_vm));
    }
    Ok(term1.sub(&inv_div_tensor(&h)))
}

/// Bilinear inverse divergence on (scalar, mean-free scalar):
/// div(out) = vf - mean(vf).
pub fn bilinear_b1(v: &ScalarField, f: &ScalarField) -> Result<VectorField, CalcError> {
    require_mean_free(f.mean(), f.c0())?;
    let grid = v.grid();
    let r1f = inv_div_scalar(f);
    let grad_v = VectorField::new((0..grid.dim()).map(|i| v.partial(i)).collect()).unwrap();
    // The mean-of-product correction inside the second term dies under the
    // gradient, so only grad(v) . R1(f) survives there.
    let inner = grad_v.dot(&r1f);
    Ok(r1f.mul_scalar(v).sub(&inv_div_scalar(&inner)))
}

/// Component-wise bilinear inverse divergence for vector pairs:
/// div(out) = u . f - mean(u . f), each component of f mean-free.
pub fn bilinear_b1_vec(u: &VectorField, f: &VectorField) -> Result<VectorField, CalcError> {
    let mut acc = VectorField::zeros(u.grid());
    for k in 0..u.grid().dim() {
        acc = acc.add(&bilinear_b1(u.comp(k), f.comp(k))?);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn single_mode_tensor_inverse_matches_symbol() {
        // f = cos(2 pi x1) e2 on the 3-torus inverts to
        // sin(2 pi x1)/(2 pi) * (e1 (x) e2 + e2 (x) e1).
        let g = TorusGrid::new(3, 16).unwrap();
        let f = VectorField::from_fns(g, |x, i| {
            if i == 1 {
                (2.0 * PI * x[0]).cos()
            } else {
                0.0
            }
        });
        let r = inv_div_tensor(&f);
        let want01 = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).sin() / (2.0 * PI));
        assert!(r.entry(0, 1).sub(&want01).c0() < 1e-12);
        assert!(r.entry(0, 0).c0() < 1e-13);
        assert!(r.entry(1, 1).c0() < 1e-13);
        assert!(r.entry(2, 2).c0() < 1e-13);
        assert!(r.entry(0, 2).c0() < 1e-13);
        assert!(r.entry(1, 2).c0() < 1e-13);
        // And it really is a right inverse.
        assert!(r.divergence().sub(&f).c0() < 1e-12);
    }

    #[test]
    fn scalar_inverse_matches_closed_form() {
        let g = TorusGrid::new(2, 16).unwrap();
        let f = ScalarField::from_fn(g, |x| (2.0 * PI * x[0]).sin());
        let r = inv_div_scalar(&f);
        let want = ScalarField::from_fn(g, |x| -(2.0 * PI * x[0]).cos() / (2.0 * PI));
        assert!(r.comp(0).sub(&want).c0() < 1e-12);
        assert!(r.comp(1).c0() < 1e-13);
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = TorusGrid::new(2, 8).unwrap();
        assert_eq!(inv_div_scalar(&ScalarField::zeros(g)).c0(), 0.0);
        assert_eq!(inv_div_tensor(&VectorField::zeros(g)).frobenius_c0(), 0.0);
    }

    #[test]
    fn bilinear_b1_rejects_nonzero_mean() {
        let g = TorusGrid::new(2, 8).unwrap();
        let v = ScalarField::constant(g, 1.0);
        let f = ScalarField::constant(g, 0.5);
        assert!(matches!(
            bilinear_b1(&v, &f),
            Err(CalcError::NotMeanFree { .. })
        ));
    }

    #[test]
    fn constant_v_reduces_b1_to_scaled_inverse() {
        let g = TorusGrid::new(2, 16).unwrap();
        let v = ScalarField::constant(g, 3.0);
        let f = ScalarField::from_fn(g, |x| (2.0 * PI * (x[0] + x[1])).cos());
        let b = bilinear_b1(&v, &f).unwrap();
        let want = inv_div_scalar(&f).scale(3.0);
        assert!(b.sub(&want).c0() < 1e-12);
    }
}
