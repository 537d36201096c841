//! Smoothing with compactly supported bumps.
//!
//! Space: convolution with the radial bump c.exp(-1/(1 - (r/l)^2)) on r < l,
//! normalized to unit mass, applied as a spectral multiplier built from the
//! kernel's grid transform (so constants and means are preserved exactly).
//!
//! Time: a one-sided kernel supported in (0, l) - smoothing at time t looks
//! only at earlier times, with constant extension before t = 0.

use crate::CalcError;
use cvx_fields::{ScalarField, SpaceTimeField, SymTensorField, TorusGrid, VectorField};
use ndarray::ArrayD;
use num_complex::Complex64;

fn bump(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (-1.0 / (1.0 - u * u)).exp()
    } else {
        0.0
    }
}

fn check_scale(ell: f64) -> Result<(), CalcError> {
    if !(ell > 0.0 && ell <= 0.25) {
        return Err(CalcError::BadScale(ell));
    }
    Ok(())
}

/// Spectral multiplier of the space mollifier at scale `ell` on `grid`.
fn kernel_multiplier(grid: TorusGrid, ell: f64) -> ArrayD<f64> {
    let origin = vec![0.0; grid.dim()];
    let samples = ScalarField::from_fn(grid, |x| {
        let r = grid.torus_distance(x, &origin);
        bump(r / ell)
    });
    let mass = samples.mean();
    let normalized = samples.scale(1.0 / mass);
    // The kernel is even, so its transform is real up to roundoff.
    normalized.spectrum().mapv(|c| c.re)
}

fn apply_kernel(f: &ScalarField, mult: &ArrayD<f64>) -> ScalarField {
    let spec = f.spectrum();
    let mut out = spec.clone();
    out.zip_mut_with(mult, |c, &m| *c *= Complex64::new(m, 0.0));
    ScalarField::from_spectrum(f.grid(), out).expect("real multiplier keeps spectra Hermitian")
}

pub fn mollify_scalar(f: &ScalarField, ell: f64) -> Result<ScalarField, CalcError> {
    check_scale(ell)?;
    let mult = kernel_multiplier(f.grid(), ell);
    Ok(apply_kernel(f, &mult))
}

pub fn mollify_vector(f: &VectorField, ell: f64) -> Result<VectorField, CalcError> {
    check_scale(ell)?;
    let mult = kernel_multiplier(f.grid(), ell);
    Ok(f.map_comps(|c| apply_kernel(c, &mult)))
}

pub fn mollify_sym_tensor(f: &SymTensorField, ell: f64) -> Result<SymTensorField, CalcError> {
    check_scale(ell)?;
    let mult = kernel_multiplier(f.grid(), ell);
    Ok(f.map_entries(|e| apply_kernel(e, &mult)))
}

/// One-sided time mollifier: quadrature nodes and weights for the bump
/// supported in (0, ell), midpoint rule, weights normalized to sum 1.
#[derive(Clone, Debug)]
pub struct TimeKernel {
    ell: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeKernel {
    pub fn new(ell: f64) -> Result<TimeKernel, CalcError> {
        check_scale(ell)?;
        let m = 128;
        let mut nodes = Vec::with_capacity(m);
        let mut weights = Vec::with_capacity(m);
        for j in 0..m {
            let s = (j as f64 + 0.5) * ell / m as f64;
            nodes.push(s);
            weights.push(bump(2.0 * s / ell - 1.0));
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        Ok(TimeKernel { ell, nodes, weights })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    /// Smooth a time function at `t`, looking only at earlier times and
    /// extending the function as constant before 0.
    pub fn smooth_fn(&self, f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * f((t - s).max(0.0)))
            .sum()
    }

    /// Same, without the constant extension (for functions defined on all of R).
    pub fn smooth_fn_raw(&self, f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&s, &w)| w * f(t - s))
            .sum()
    }

    /// Smooth uniformly spaced samples (spacing `dt`, first sample at t=0),
    /// reading between samples by linear interpolation.
    pub fn smooth_samples(&self, samples: &[f64], dt: f64) -> Vec<f64> {
        let eval = |t: f64| -> f64 {
            let t = t.max(0.0);
            let s = t / dt;
            let i = (s.floor() as usize).min(samples.len() - 2);
            let theta = (s - i as f64).clamp(0.0, 1.0);
            samples[i] * (1.0 - theta) + samples[i + 1] * theta
        };
        (0..samples.len())
            .map(|i| self.smooth_fn(&eval, i as f64 * dt))
            .collect()
    }
}

/// Mollify a space-time scalar field: space bump at scale `ell_x` on every
/// slice, then the one-sided time kernel at scale `ell_t` across slices.
pub fn mollify_spacetime(
    f: &SpaceTimeField<ScalarField>,
    ell_x: f64,
    ell_t: f64,
) -> Result<SpaceTimeField<ScalarField>, CalcError> {
    let mult = {
        check_scale(ell_x)?;
        kernel_multiplier(f.grid(), ell_x)
    };
    let spatial: Vec<ScalarField> = f.slices().iter().map(|s| apply_kernel(s, &mult)).collect();
    let kernel = TimeKernel::new(ell_t)?;
    let dt = f.dt();
    let n_t = f.n_t();
    let slices: Vec<ScalarField> = (0..n_t)
        .map(|i| {
            let t = i as f64 * dt;
            let mut acc = ScalarField::zeros(f.grid());
            for (&s, &w) in kernel.nodes.iter().zip(&kernel.weights) {
                let tau = (t - s).max(0.0);
                let pos = tau / dt;
                let j = (pos.floor() as usize).min(n_t - 2);
                let theta = (pos - j as f64).clamp(0.0, 1.0);
                acc = acc
                    .add_scaled(w * (1.0 - theta), &spatial[j])
                    .add_scaled(w * theta, &spatial[j + 1]);
            }
            acc
        })
        .collect();
    Ok(SpaceTimeField::new(slices).expect("same slice count"))
}
