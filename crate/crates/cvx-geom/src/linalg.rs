//! Tiny dense solves for the chart construction (matrices are at most 6x6,
//! stored row-major in `Vec<f64>`).

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
/// `a` is n x n row-major and is consumed.  Returns `None` when the pivot
/// drops below `tol` (rank-deficient for our purposes).
pub(crate) fn solve(mut a: Vec<f64>, mut b: Vec<f64>, tol: f64) -> Option<Vec<f64>> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    for col in 0..n {
        let mut piv = col;
        for row in col + 1..n {
            if a[row * n + col].abs() > a[piv * n + col].abs() {
                piv = row;
            }
        }
        if a[piv * n + col].abs() < tol {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(col * n + k, piv * n + k);
            }
            b.swap(col, piv);
        }
        let inv = 1.0 / a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] * inv;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for k in col + 1..n {
            s -= a[col * n + k] * b[k];
        }
        b[col] = s / a[col * n + col];
    }
    Some(b)
}

/// Invert an n x n row-major matrix; `None` on near-singularity.
pub(crate) fn invert(a: &[f64], n: usize, tol: f64) -> Option<Vec<f64>> {
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        cols.push(solve(a.to_vec(), e, tol)?);
    }
    let mut out = vec![0.0; n * n];
    for (j, col) in cols.iter().enumerate() {
        for i in 0..n {
            out[i * n + j] = col[i];
        }
    }
    Some(out)
}

/// Minimum-norm right-inverse `D^T (D D^T)^{-1}` of a fat n x m matrix
/// (n rows, m >= n columns, row-major).  Returns an m x n matrix.
pub(crate) fn right_inverse(d: &[f64], n: usize, m: usize, tol: f64) -> Option<Vec<f64>> {
    let mut gram = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..m {
                s += d[i * m + k] * d[j * m + k];
            }
            gram[i * n + j] = s;
        }
    }
    let gram_inv = invert(&gram, n, tol)?;
    let mut out = vec![0.0; m * n];
    for i in 0..m {
        for j in 0..n {
            let mut s = 0.0;
            for k in 0..n {
                s += d[k * m + i] * gram_inv[k * n + j];
            }
            out[i * n + j] = s;
        }
    }
    Some(out)
}

/// `a x` for a row-major n x m matrix.
pub(crate) fn matvec(a: &[f64], n: usize, m: usize, x: &[f64]) -> Vec<f64> {
    debug_assert_eq!(x.len(), m);
    let mut out = vec![0.0; n];
    for i in 0..n {
        let mut s = 0.0;
        for k in 0..m {
            s += a[i * m + k] * x[k];
        }
        out[i] = s;
    }
    out
}
