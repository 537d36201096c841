use crate::{FieldError, MatrixField, ScalarField, SymTensorField, TorusGrid};

/// Vector field stored component-wise.
#[derive(Clone, Debug)]
pub struct VectorField {
    comps: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(comps: Vec<ScalarField>) -> Result<Self, FieldError> {
        let grid = comps
            .first()
            .ok_or(FieldError::ComponentCount { expected: 1, got: 0 })?
            .grid();
        if comps.len() != grid.dim() {
            return Err(FieldError::ComponentCount {
                expected: grid.dim(),
                got: comps.len(),
            });
        }
        if comps.iter().any(|c| c.grid() != grid) {
            return Err(FieldError::GridMismatch);
        }
        Ok(VectorField { comps })
    }

    pub fn from_fns(grid: TorusGrid, f: impl Fn(&[f64], usize) -> f64) -> Self {
        let comps = (0..grid.dim())
            .map(|i| ScalarField::from_fn(grid, |x| f(x, i)))
            .collect();
        VectorField { comps }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        VectorField {
            comps: (0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect(),
        }
    }

    pub fn constant(grid: TorusGrid, v: &[f64]) -> Self {
        assert_eq!(v.len(), grid.dim());
        VectorField {
            comps: v.iter().map(|&c| ScalarField::constant(grid, c)).collect(),
        }
    }

    pub fn grid(&self) -> TorusGrid {
        self.comps[0].grid()
    }

    pub fn comp(&self, i: usize) -> &ScalarField {
        &self.comps[i]
    }

    pub fn comps(&self) -> &[ScalarField] {
        &self.comps
    }

    pub fn map_comps(&self, f: impl Fn(&ScalarField) -> ScalarField) -> VectorField {
        VectorField {
            comps: self.comps.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> VectorField {
        self.map_comps(|c| c.scale(a))
    }

    pub fn add_scaled(&self, a: f64, rhs: &VectorField) -> VectorField {
        VectorField {
            comps: self
                .comps
                .iter()
                .zip(&rhs.comps)
                .map(|(x, y)| x.add_scaled(a, y))
                .collect(),
        }
    }

    /// Pointwise scalar multiple.
    pub fn mul_scalar(&self, s: &ScalarField) -> VectorField {
        self.map_comps(|c| c.mul(s))
    }

    pub fn dot(&self, rhs: &VectorField) -> ScalarField {
        let mut acc = self.comps[0].mul(&rhs.comps[0]);
        for i in 1..self.comps.len() {
            acc = acc.add(&self.comps[i].mul(&rhs.comps[i]));
        }
        acc
    }

    pub fn norm_sq(&self) -> ScalarField {
        self.dot(self)
    }

    pub fn divergence(&self) -> ScalarField {
        let mut acc = self.comps[0].partial(0);
        for i in 1..self.comps.len() {
            acc = acc.add(&self.comps[i].partial(i));
        }
        acc
    }

    /// Jacobian matrix J_ij = d v_i / d x_j.
    pub fn jacobian(&self) -> MatrixField {
        let d = self.grid().dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.comps[i].partial(j));
            }
        }
        MatrixField::new(self.grid(), entries)
    }

    /// Curl of a 3-d vector field.
    pub fn curl(&self) -> VectorField {
        assert_eq!(self.grid().dim(), 3, "curl is the d=3 operation");
        let c = &self.comps;
        VectorField {
            comps: vec![
                c[2].partial(1).sub(&c[1].partial(2)),
                c[0].partial(2).sub(&c[2].partial(0)),
                c[1].partial(0).sub(&c[0].partial(1)),
            ],
        }
    }

    /// Pointwise cross product of 3-d vector fields.
    pub fn cross(&self, rhs: &VectorField) -> VectorField {
        assert_eq!(self.grid().dim(), 3, "cross product is the d=3 operation");
        let a = &self.comps;
        let b = rhs.comps();
        VectorField {
            comps: vec![
                a[1].mul(&b[2]).sub(&a[2].mul(&b[1])),
                a[2].mul(&b[0]).sub(&a[0].mul(&b[2])),
                a[0].mul(&b[1]).sub(&a[1].mul(&b[0])),
            ],
        }
    }

    /// Scalar curl of a 2-d vector field: d v_2/d x_1 - d v_1/d x_2.
    pub fn curl_2d(&self) -> ScalarField {
        assert_eq!(self.grid().dim(), 2, "curl_2d is the d=2 operation");
        self.comps[1].partial(0).sub(&self.comps[0].partial(1))
    }

    /// Symmetric part of the outer product v (x) w.
    pub fn outer_sym(&self, rhs: &VectorField) -> SymTensorField {
        let d = self.grid().dim();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i..d {
                let a = self.comps[i].mul(&rhs.comps[j]);
                let b = self.comps[j].mul(&rhs.comps[i]);
                entries.push(a.add(&b).scale(0.5));
            }
        }
        SymTensorField::new(self.grid(), entries)
    }

    pub fn mean(&self) -> Vec<f64> {
        self.comps.iter().map(|c| c.mean()).collect()
    }

    pub fn mean_free(&self) -> VectorField {
        self.map_comps(|c| c.mean_free())
    }

    pub fn band_limit(&self, kmax: i64) -> VectorField {
        self.map_comps(|c| c.band_limit(kmax))
    }

    pub fn dealias(&self) -> VectorField {
        self.map_comps(|c| c.dealias())
    }

    pub fn translate(&self, shift: &[f64]) -> VectorField {
        self.map_comps(|c| c.translate(shift))
    }

    /// sup over grid points of the euclidean |v|.
    pub fn c0(&self) -> f64 {
        let mut max = 0.0f64;
        let n = self.comps[0].values().len();
        for idx in 0..n {
            let s: f64 = self
                .comps
                .iter()
                .map(|c| {
                    let v = c.values().as_slice().unwrap()[idx];
                    v * v
                })
                .sum();
            max = max.max(s);
        }
        max.sqrt()
    }

    /// L^p norm of |v| under the normalized grid measure.
    pub fn lp(&self, p: f64) -> f64 {
        if p.is_infinite() {
            return self.c0();
        }
        let n = self.comps[0].values().len();
        let mut sum = 0.0f64;
        for idx in 0..n {
            let s: f64 = self
                .comps
                .iter()
                .map(|c| {
                    let v = c.values().as_slice().unwrap()[idx];
                    v * v
                })
                .sum();
            sum += s.sqrt().powf(p);
        }
        (sum / n as f64).powf(1.0 / p)
    }

    pub fn cn(&self, order: usize) -> f64 {
        self.comps.iter().map(|c| c.cn(order)).sum()
    }

    pub fn value_at(&self, idx: &[usize]) -> Vec<f64> {
        self.comps.iter().map(|c| c.grid_value(idx)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divergence_of_gradient_is_laplacian() {
        let g = TorusGrid::new(2, 16).unwrap();
        let f = ScalarField::from_fn(g, |x| {
            (2.0 * std::f64::consts::PI * x[0]).sin() * (2.0 * std::f64::consts::PI * x[1]).cos()
        });
        let grad = VectorField::new(vec![f.partial(0), f.partial(1)]).unwrap();
        let div = grad.divergence();
        let lap = f.laplacian();
        assert!(div.sub(&lap).c0() < 1e-9);
    }

    #[test]
    fn curl_of_gradient_vanishes() {
        let g = TorusGrid::new(3, 8).unwrap();
        let f = ScalarField::from_fn(g, |x| {
            (2.0 * std::f64::consts::PI * (x[0] + x[1])).sin()
                + (2.0 * std::f64::consts::PI * x[2]).cos()
        });
        let grad = VectorField::new(vec![f.partial(0), f.partial(1), f.partial(2)]).unwrap();
        assert!(grad.curl().c0() < 1e-9);
    }

    #[test]
    fn component_count_is_enforced() {
        let g = TorusGrid::new(3, 8).unwrap();
        let err = VectorField::new(vec![ScalarField::zeros(g), ScalarField::zeros(g)]);
        assert!(matches!(
            err,
            Err(FieldError::ComponentCount { expected: 3, got: 2 })
        ));
    }
}
