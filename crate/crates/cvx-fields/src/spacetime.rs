use crate::{FieldError, ScalarField, SymTensorField, TorusGrid, VectorField};

/// Anything that can sit on a time slice: enough norm structure for the
/// space-time norms, plus linear interpolation between slices.
pub trait TimeSlice: Clone {
    fn slice_grid(&self) -> TorusGrid;
    /// L^p of the pointwise magnitude (euclidean / Frobenius for vectors and
    /// tensors) under the normalized grid measure.
    fn slice_lp(&self, p: f64) -> f64;
    fn slice_c0(&self) -> f64;
    /// W^{1,s} norm: ‖f‖_s plus the L^s norm of the full gradient magnitude.
    fn slice_w1s(&self, s: f64) -> f64;
    fn slice_lerp(&self, other: &Self, theta: f64) -> Self;
}

impl TimeSlice for ScalarField {
    fn slice_grid(&self) -> TorusGrid {
        self.grid()
    }
    fn slice_lp(&self, p: f64) -> f64 {
        self.lp(p)
    }
    fn slice_c0(&self) -> f64 {
        self.c0()
    }
    fn slice_w1s(&self, s: f64) -> f64 {
        let d = self.grid().dim();
        let grads: Vec<ScalarField> = (0..d).map(|a| self.partial(a)).collect();
        let grad = VectorField::new(grads).unwrap();
        self.lp(s) + grad.lp(s)
    }
    fn slice_lerp(&self, other: &Self, theta: f64) -> Self {
        self.scale(1.0 - theta).add_scaled(theta, other)
    }
}

impl TimeSlice for VectorField {
    fn slice_grid(&self) -> TorusGrid {
        self.grid()
    }
    fn slice_lp(&self, p: f64) -> f64 {
        self.lp(p)
    }
    fn slice_c0(&self) -> f64 {
        self.c0()
    }
    fn slice_w1s(&self, s: f64) -> f64 {
        let jac = self.jacobian();
        let d = self.grid().dim();
        // Frobenius magnitude of the Jacobian, via the packed general matrix.
        let mut sq = ScalarField::zeros(self.grid());
        for i in 0..d {
            for j in 0..d {
                let e = jac.entry(i, j);
                sq = sq.add(&e.mul(e));
            }
        }
        self.lp(s) + sq.map(f64::sqrt).lp(s)
    }
    fn slice_lerp(&self, other: &Self, theta: f64) -> Self {
        self.scale(1.0 - theta).add_scaled(theta, other)
    }
}

impl TimeSlice for SymTensorField {
    fn slice_grid(&self) -> TorusGrid {
        self.grid()
    }
    fn slice_lp(&self, p: f64) -> f64 {
        self.lp(p)
    }
    fn slice_c0(&self) -> f64 {
        self.frobenius_c0()
    }
    fn slice_w1s(&self, s: f64) -> f64 {
        let d = self.grid().dim();
        let mut sq = ScalarField::zeros(self.grid());
        for i in 0..d {
            for j in 0..d {
                for a in 0..d {
                    let e = self.entry(i, j).partial(a);
                    sq = sq.add(&e.mul(&e));
                }
            }
        }
        self.lp(s) + sq.map(f64::sqrt).lp(s)
    }
    fn slice_lerp(&self, other: &Self, theta: f64) -> Self {
        self.scale(1.0 - theta).add(&other.scale(theta))
    }
}

/// Uniformly sampled field on [0,1]: slice i sits at t_i = i/(n_t - 1).
#[derive(Clone, Debug)]
pub struct SpaceTimeField<T: TimeSlice> {
    slices: Vec<T>,
}

impl<T: TimeSlice> SpaceTimeField<T> {
    pub fn new(slices: Vec<T>) -> Result<Self, FieldError> {
        if slices.len() < 2 {
            return Err(FieldError::TooFewTimeSlices(slices.len()));
        }
        let grid = slices[0].slice_grid();
        if slices.iter().any(|s| s.slice_grid() != grid) {
            return Err(FieldError::GridMismatch);
        }
        Ok(SpaceTimeField { slices })
    }

    pub fn from_fn(n_t: usize, f: impl Fn(f64) -> T) -> Result<Self, FieldError> {
        if n_t < 2 {
            return Err(FieldError::TooFewTimeSlices(n_t));
        }
        let slices = (0..n_t)
            .map(|i| f(i as f64 / (n_t - 1) as f64))
            .collect();
        Self::new(slices)
    }

    pub fn grid(&self) -> TorusGrid {
        self.slices[0].slice_grid()
    }

    pub fn n_t(&self) -> usize {
        self.slices.len()
    }

    pub fn dt(&self) -> f64 {
        1.0 / (self.slices.len() - 1) as f64
    }

    pub fn time(&self, i: usize) -> f64 {
        i as f64 * self.dt()
    }

    pub fn slice(&self, i: usize) -> &T {
        &self.slices[i]
    }

    pub fn slices(&self) -> &[T] {
        &self.slices
    }

    /// Linear interpolation in time; clamps t to [0,1].
    pub fn at_time(&self, t: f64) -> T {
        let t = t.clamp(0.0, 1.0);
        let s = t / self.dt();
        let i = (s.floor() as usize).min(self.slices.len() - 2);
        let theta = s - i as f64;
        self.slices[i].slice_lerp(&self.slices[i + 1], theta)
    }

    /// Trapezoid quadrature in time of a per-slice quantity.
    fn time_integral(&self, f: impl Fn(&T) -> f64) -> f64 {
        let dt = self.dt();
        let n = self.slices.len();
        let mut acc = 0.5 * (f(&self.slices[0]) + f(&self.slices[n - 1]));
        for s in &self.slices[1..n - 1] {
            acc += f(s);
        }
        acc * dt
    }

    /// L^r in time of the spatial L^p norm. r = inf gives sup over slices.
    pub fn lr_lp(&self, r: f64, p: f64) -> f64 {
        if r.is_infinite() {
            return self
                .slices
                .iter()
                .map(|s| s.slice_lp(p))
                .fold(0.0f64, f64::max);
        }
        self.time_integral(|s| s.slice_lp(p).powf(r)).powf(1.0 / r)
    }

    /// Sup over time of the spatial L^p norm.
    pub fn ct_lp(&self, p: f64) -> f64 {
        self.lr_lp(f64::INFINITY, p)
    }

    pub fn c0(&self) -> f64 {
        self.slices
            .iter()
            .map(|s| s.slice_c0())
            .fold(0.0f64, f64::max)
    }

    /// L^1 in time of the W^{1,s} norm.
    pub fn l1_w1s(&self, s: f64) -> f64 {
        self.time_integral(|sl| sl.slice_w1s(s))
    }

    pub fn map_slices<U: TimeSlice>(&self, f: impl Fn(&T) -> U) -> SpaceTimeField<U> {
        SpaceTimeField {
            slices: self.slices.iter().map(f).collect(),
        }
    }

    pub fn zip_slices(&self, rhs: &SpaceTimeField<T>, f: impl Fn(&T, &T) -> T) -> SpaceTimeField<T> {
        assert_eq!(self.n_t(), rhs.n_t(), "time axes differ");
        SpaceTimeField {
            slices: self
                .slices
                .iter()
                .zip(&rhs.slices)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_single_slice() {
        let g = TorusGrid::new(2, 8).unwrap();
        let err = SpaceTimeField::new(vec![ScalarField::zeros(g)]);
        assert!(matches!(err, Err(FieldError::TooFewTimeSlices(1))));
    }

    #[test]
    fn time_axis_is_uniform_on_unit_interval() {
        let g = TorusGrid::new(2, 8).unwrap();
        let f = SpaceTimeField::from_fn(5, |t| ScalarField::constant(g, t)).unwrap();
        assert!((f.time(0) - 0.0).abs() < 1e-15);
        assert!((f.time(4) - 1.0).abs() < 1e-15);
        assert!((f.time(2) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lr_lp_matches_closed_form_for_separable_field() {
        // f(x,t) = t * sin(2π x_1): ‖f(t)‖_2 = t/√2, so
        // L²_t L²_x = (∫ t²/2 dt)^{1/2} = 1/√6.
        let g = TorusGrid::new(2, 16).unwrap();
        let f = SpaceTimeField::from_fn(257, |t| {
            ScalarField::from_fn(g, move |x| t * (2.0 * std::f64::consts::PI * x[0]).sin())
        })
        .unwrap();
        let got = f.lr_lp(2.0, 2.0);
        let want = 1.0 / 6.0f64.sqrt();
        assert!((got - want).abs() < 1e-5, "got {got}, want {want}");
        assert!((f.ct_lp(2.0) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
    }

    #[test]
    fn at_time_interpolates_linearly() {
        let g = TorusGrid::new(2, 8).unwrap();
        let f = SpaceTimeField::from_fn(3, |t| ScalarField::constant(g, 2.0 * t)).unwrap();
        let mid = f.at_time(0.25);
        assert!((mid.mean() - 0.5).abs() < 1e-14);
    }
}
