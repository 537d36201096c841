use crate::{fft, FieldError, TorusGrid};
use ndarray::{ArrayD, Dimension, IxDyn};
use num_complex::Complex64;
use once_cell::sync::OnceCell;

/// Real scalar field on a torus grid. The Fourier transform is computed
/// lazily and cached; the field itself never changes after construction.
pub struct ScalarField {
    grid: TorusGrid,
    values: ArrayD<f64>,
    spectrum: OnceCell<ArrayD<Complex64>>,
}

impl Clone for ScalarField {
    fn clone(&self) -> Self {
        ScalarField {
            grid: self.grid,
            values: self.values.clone(),
            spectrum: self.spectrum.clone(),
        }
    }
}

impl std::fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "ScalarField(d={}, n={}, cached={})",
            self.grid.dim(),
            self.grid.n(),
            self.spectrum.get().is_some()
        )
    }
}

impl ScalarField {
    pub fn from_values(grid: TorusGrid, values: ArrayD<f64>) -> Result<Self, FieldError> {
        if values.shape() != grid.shape().as_slice() {
            return Err(FieldError::ShapeMismatch {
                expected: grid.shape(),
                got: values.shape().to_vec(),
            });
        }
        Ok(ScalarField {
            grid,
            values,
            spectrum: OnceCell::new(),
        })
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let values = ArrayD::from_shape_fn(IxDyn(&grid.shape()), |idx| {
            let x: Vec<f64> = idx.slice().iter().map(|&j| j as f64 / grid.n() as f64).collect();
            f(&x)
        });
        ScalarField {
            grid,
            values,
            spectrum: OnceCell::new(),
        }
    }

    pub fn constant(grid: TorusGrid, c: f64) -> Self {
        ScalarField {
            grid,
            values: ArrayD::from_elem(IxDyn(&grid.shape()), c),
            spectrum: OnceCell::new(),
        }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Build a field from Fourier coefficients. The coefficients must be
    /// Hermitian-symmetric (they came from a real field or a multiplier that
    /// preserves the symmetry); otherwise this fails.
    pub fn from_spectrum(grid: TorusGrid, spectrum: ArrayD<Complex64>) -> Result<Self, FieldError> {
        if spectrum.shape() != grid.shape().as_slice() {
            return Err(FieldError::ShapeMismatch {
                expected: grid.shape(),
                got: spectrum.shape().to_vec(),
            });
        }
        let (values, max_im) = fft::inverse(&spectrum);
        let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        if max_im > 1e-9 * scale {
            return Err(FieldError::NonHermitianSpectrum { max_imag: max_im });
        }
        let cell = OnceCell::new();
        let _ = cell.set(spectrum);
        Ok(ScalarField {
            grid,
            values,
            spectrum: cell,
        })
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn values(&self) -> &ArrayD<f64> {
        &self.values
    }

    pub fn spectrum(&self) -> &ArrayD<Complex64> {
        self.spectrum.get_or_init(|| fft::forward(&self.values))
    }

    pub fn mean(&self) -> f64 {
        self.values.sum() / self.values.len() as f64
    }

    pub fn mean_free(&self) -> ScalarField {
        let m = self.mean();
        self.map(|v| v - m)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> ScalarField {
        ScalarField {
            grid: self.grid,
            values: self.values.mapv(&f),
            spectrum: OnceCell::new(),
        }
    }

    pub fn scale(&self, a: f64) -> ScalarField {
        self.map(|v| a * v)
    }

    pub fn zip_with(&self, rhs: &ScalarField, f: impl Fn(f64, f64) -> f64) -> ScalarField {
        assert_eq!(self.grid, rhs.grid, "fields live on different grids");
        let mut values = self.values.clone();
        values.zip_mut_with(&rhs.values, |a, &b| *a = f(*a, b));
        ScalarField {
            grid: self.grid,
            values,
            spectrum: OnceCell::new(),
        }
    }

    pub fn add(&self, rhs: &ScalarField) -> ScalarField {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &ScalarField) -> ScalarField {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &ScalarField) -> ScalarField {
        self.zip_with(rhs, |a, b| a * b)
    }

    pub fn add_scaled(&self, a: f64, rhs: &ScalarField) -> ScalarField {
        self.zip_with(rhs, |x, y| x + a * y)
    }

    /// Apply a Fourier multiplier m(k). The multiplier must satisfy
    /// m(-k) = conj(m(k)) for the result to be a real field.
    pub fn apply_multiplier(&self, m: impl Fn(&[i64]) -> Complex64) -> ScalarField {
        let spec = self.spectrum();
        let mut out = spec.clone();
        let mut k = vec![0i64; self.grid.dim()];
        for (idx, c) in out.indexed_iter_mut() {
            for (a, &i) in k.iter_mut().zip(idx.slice()) {
                *a = self.grid.freq_of(i);
            }
            *c *= m(&k);
        }
        let (values, _max_im) = fft::inverse(&out);
        let cell = OnceCell::new();
        let _ = cell.set(out);
        ScalarField {
            grid: self.grid,
            values,
            spectrum: cell,
        }
    }

    /// Spectral partial derivative along the given axis. The Nyquist mode is
    /// dropped, which keeps the output real.
    pub fn partial(&self, axis: usize) -> ScalarField {
        let nyq = -(self.grid.n() as i64) / 2;
        self.apply_multiplier(|k| {
            if k[axis] == nyq {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, 2.0 * std::f64::consts::PI * k[axis] as f64)
            }
        })
    }

    pub fn laplacian(&self) -> ScalarField {
        self.apply_multiplier(|k| {
            let k2: f64 = k.iter().map(|&a| (a * a) as f64).sum();
            Complex64::new(-4.0 * std::f64::consts::PI * std::f64::consts::PI * k2, 0.0)
        })
    }

    /// Zero every mode with any |k_i| larger than the cutoff.
    pub fn band_limit(&self, kmax: i64) -> ScalarField {
        self.apply_multiplier(|k| {
            if k.iter().any(|&a| a.abs() > kmax) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(1.0, 0.0)
            }
        })
    }

    /// 2/3-rule dealiasing truncation.
    pub fn dealias(&self) -> ScalarField {
        self.band_limit(self.grid.dealias_cutoff())
    }

    /// Translate the field: returns x -> f(x - shift).
    pub fn translate(&self, shift: &[f64]) -> ScalarField {
        let two_pi = 2.0 * std::f64::consts::PI;
        self.apply_multiplier(|k| {
            let phase: f64 = k.iter().zip(shift).map(|(&a, &s)| a as f64 * s).sum();
            Complex64::from_polar(1.0, -two_pi * phase)
        })
    }

    /// Evaluate the trigonometric interpolant at an arbitrary point.
    /// Direct mode summation; meant for spot checks, not bulk evaluation.
    pub fn eval_trig(&self, x: &[f64]) -> f64 {
        let spec = self.spectrum();
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut acc = Complex64::new(0.0, 0.0);
        for (idx, c) in spec.indexed_iter() {
            let phase: f64 = idx
                .slice()
                .iter()
                .zip(x)
                .map(|(&i, &xi)| self.grid.freq_of(i) as f64 * xi)
                .sum();
            acc += c * Complex64::from_polar(1.0, two_pi * phase);
        }
        acc.re
    }

    /// Largest |f| over grid points.
    pub fn c0(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// L^p norm with respect to the normalized measure on the torus
    /// (grid quadrature). `p = f64::INFINITY` gives the sup norm.
    pub fn lp(&self, p: f64) -> f64 {
        assert!(p >= 1.0, "lp needs p >= 1");
        if p.is_infinite() {
            return self.c0();
        }
        let sum: f64 = self.values.iter().map(|v| v.abs().powf(p)).sum();
        (sum / self.values.len() as f64).powf(1.0 / p)
    }

    /// C^N norm: sum over derivative orders j <= N of the largest sup-norm of
    /// any order-j partial derivative.
    pub fn cn(&self, order: usize) -> f64 {
        let mut total = self.c0();
        let mut layer: Vec<(ScalarField, usize)> = vec![(self.clone(), 0)];
        for _ in 1..=order {
            let mut next: Vec<(ScalarField, usize)> = Vec::new();
            // Differentiate in non-decreasing axis order so each multi-index
            // appears exactly once.
            for (f, min_axis) in &layer {
                for axis in *min_axis..self.grid.dim() {
                    next.push((f.partial(axis), axis));
                }
            }
            total += next
                .iter()
                .map(|(f, _)| f.c0())
                .fold(0.0f64, f64::max);
            layer = next;
        }
        total
    }

    pub fn grid_value(&self, idx: &[usize]) -> f64 {
        self.values[IxDyn(idx)]
    }
}
