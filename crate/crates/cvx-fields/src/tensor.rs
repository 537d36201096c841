use crate::{ScalarField, TorusGrid, VectorField};

/// General (not necessarily symmetric) d x d matrix field, row-major entries.
#[derive(Clone, Debug)]
pub struct MatrixField {
    grid: TorusGrid,
    entries: Vec<ScalarField>,
}

impl MatrixField {
    pub fn new(grid: TorusGrid, entries: Vec<ScalarField>) -> Self {
        let d = grid.dim();
        assert_eq!(entries.len(), d * d, "need d*d entries");
        assert!(entries.iter().all(|e| e.grid() == grid));
        MatrixField { grid, entries }
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64], usize, usize) -> f64) -> Self {
        let d = grid.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(ScalarField::from_fn(grid, |x| f(x, i, j)));
            }
        }
        MatrixField { grid, entries }
    }

    pub fn identity(grid: TorusGrid) -> Self {
        let d = grid.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(ScalarField::constant(grid, if i == j { 1.0 } else { 0.0 }));
            }
        }
        MatrixField { grid, entries }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[i * self.grid.dim() + j]
    }

    pub fn transpose(&self) -> MatrixField {
        let d = self.grid.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.entry(j, i).clone());
            }
        }
        MatrixField {
            grid: self.grid,
            entries,
        }
    }

    pub fn add(&self, rhs: &MatrixField) -> MatrixField {
        MatrixField {
            grid: self.grid,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &MatrixField) -> MatrixField {
        MatrixField {
            grid: self.grid,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> MatrixField {
        MatrixField {
            grid: self.grid,
            entries: self.entries.iter().map(|e| e.scale(a)).collect(),
        }
    }

    /// Pointwise matrix product self * rhs.
    pub fn matmul(&self, rhs: &MatrixField) -> MatrixField {
        let d = self.grid.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = self.entry(i, 0).mul(rhs.entry(0, j));
                for k in 1..d {
                    acc = acc.add(&self.entry(i, k).mul(rhs.entry(k, j)));
                }
                entries.push(acc);
            }
        }
        MatrixField {
            grid: self.grid,
            entries,
        }
    }

    /// Pointwise matrix-vector product.
    pub fn matvec(&self, v: &VectorField) -> VectorField {
        let d = self.grid.dim();
        let mut comps = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = self.entry(i, 0).mul(v.comp(0));
            for k in 1..d {
                acc = acc.add(&self.entry(i, k).mul(v.comp(k)));
            }
            comps.push(acc);
        }
        VectorField::new(comps).unwrap()
    }

    pub fn det(&self) -> ScalarField {
        match self.grid.dim() {
            2 => {
                let a = self.entry(0, 0).mul(self.entry(1, 1));
                let b = self.entry(0, 1).mul(self.entry(1, 0));
                a.sub(&b)
            }
            3 => {
                let m = |i: usize, j: usize| self.entry(i, j);
                let c0 = m(1, 1).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 1)));
                let c1 = m(1, 0).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 0)));
                let c2 = m(1, 0).mul(m(2, 1)).sub(&m(1, 1).mul(m(2, 0)));
                m(0, 0)
                    .mul(&c0)
                    .sub(&m(0, 1).mul(&c1))
                    .add(&m(0, 2).mul(&c2))
            }
            _ => unreachable!("grids are 2-d or 3-d"),
        }
    }

    /// Pointwise inverse via cofactors. Panics if the determinant vanishes
    /// anywhere on the grid.
    pub fn inverse(&self) -> MatrixField {
        let d = self.grid.dim();
        let det = self.det();
        let min_det = det.values().iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        assert!(min_det > 1e-12, "matrix field is singular somewhere (|det| down to {min_det:.3e})");
        let inv_det = det.map(|v| 1.0 / v);
        match d {
            2 => {
                let entries = vec![
                    self.entry(1, 1).mul(&inv_det),
                    self.entry(0, 1).scale(-1.0).mul(&inv_det),
                    self.entry(1, 0).scale(-1.0).mul(&inv_det),
                    self.entry(0, 0).mul(&inv_det),
                ];
                MatrixField {
                    grid: self.grid,
                    entries,
                }
            }
            3 => {
                let m = |i: usize, j: usize| self.entry(i, j);
                let mut entries = Vec::with_capacity(9);
                // adj(A)_ij = cofactor_ji
                for i in 0..3 {
                    for j in 0..3 {
                        let r = [(j + 1) % 3, (j + 2) % 3];
                        let c = [(i + 1) % 3, (i + 2) % 3];
                        let cof = m(r[0], c[0])
                            .mul(m(r[1], c[1]))
                            .sub(&m(r[0], c[1]).mul(m(r[1], c[0])));
                        entries.push(cof.mul(&inv_det));
                    }
                }
                MatrixField {
                    grid: self.grid,
                    entries,
                }
            }
            _ => unreachable!(),
        }
    }

    pub fn trace(&self) -> ScalarField {
        let d = self.grid.dim();
        let mut acc = self.entry(0, 0).clone();
        for i in 1..d {
            acc = acc.add(self.entry(i, i));
        }
        acc
    }

    /// Row divergence: (div M)_i = sum_j d M_ij / d x_j.
    pub fn divergence_rows(&self) -> VectorField {
        let d = self.grid.dim();
        let mut comps = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = self.entry(i, 0).partial(0);
            for j in 1..d {
                acc = acc.add(&self.entry(i, j).partial(j));
            }
            comps.push(acc);
        }
        VectorField::new(comps).unwrap()
    }

    /// Symmetric part (A + A^T)/2 in packed form.
    pub fn sym_part(&self) -> SymTensorField {
        let d = self.grid.dim();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i..d {
                entries.push(self.entry(i, j).add(self.entry(j, i)).scale(0.5));
            }
        }
        SymTensorField::new(self.grid, entries)
    }

    /// sup over grid points of the Frobenius norm.
    pub fn frobenius_c0(&self) -> f64 {
        let n = self.entries[0].values().len();
        let mut max = 0.0f64;
        for idx in 0..n {
            let s: f64 = self
                .entries
                .iter()
                .map(|e| {
                    let v = e.values().as_slice().unwrap()[idx];
                    v * v
                })
                .sum();
            max = max.max(s);
        }
        max.sqrt()
    }

    pub fn value_at(&self, idx: &[usize]) -> Vec<f64> {
        self.entries.iter().map(|e| e.grid_value(idx)).collect()
    }
}

/// Symmetric d x d tensor field, packed upper triangle:
/// index(i,j) = i*d - i*(i-1)/2 + (j-i) for i <= j.
#[derive(Clone, Debug)]
pub struct SymTensorField {
    grid: TorusGrid,
    entries: Vec<ScalarField>,
}

pub fn sym_index(d: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    // Row i starts after the rows above it: sum_{r<i} (d - r) = i(2d - i + 1)/2.
    i * (2 * d - i + 1) / 2 + (j - i)
}

pub fn sym_len(d: usize) -> usize {
    d * (d + 1) / 2
}

impl SymTensorField {
    pub fn new(grid: TorusGrid, entries: Vec<ScalarField>) -> Self {
        assert_eq!(entries.len(), sym_len(grid.dim()), "need d(d+1)/2 entries");
        assert!(entries.iter().all(|e| e.grid() == grid));
        SymTensorField { grid, entries }
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn(&[f64], usize, usize) -> f64) -> Self {
        let d = grid.dim();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i..d {
                entries.push(ScalarField::from_fn(grid, |x| f(x, i, j)));
            }
        }
        SymTensorField { grid, entries }
    }

    pub fn zeros(grid: TorusGrid) -> Self {
        let entries = (0..sym_len(grid.dim()))
            .map(|_| ScalarField::zeros(grid))
            .collect();
        SymTensorField { grid, entries }
    }

    /// c * Id as a tensor field.
    pub fn scaled_identity(grid: TorusGrid, c: f64) -> Self {
        let d = grid.dim();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i..d {
                entries.push(ScalarField::constant(grid, if i == j { c } else { 0.0 }));
            }
        }
        SymTensorField { grid, entries }
    }

    /// c(x) * Id with a scalar field on the diagonal.
    pub fn scalar_identity(c: &ScalarField) -> Self {
        let grid = c.grid();
        let d = grid.dim();
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i..d {
                entries.push(if i == j {
                    c.clone()
                } else {
                    ScalarField::zeros(grid)
                });
            }
        }
        SymTensorField { grid, entries }
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.entries[sym_index(self.grid.dim(), i, j)]
    }

    pub fn packed(&self) -> &[ScalarField] {
        &self.entries
    }

    pub fn map_entries(&self, f: impl Fn(&ScalarField) -> ScalarField) -> SymTensorField {
        SymTensorField {
            grid: self.grid,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn add(&self, rhs: &SymTensorField) -> SymTensorField {
        SymTensorField {
            grid: self.grid,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &SymTensorField) -> SymTensorField {
        SymTensorField {
            grid: self.grid,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, a: f64) -> SymTensorField {
        self.map_entries(|e| e.scale(a))
    }

    pub fn mul_scalar(&self, s: &ScalarField) -> SymTensorField {
        self.map_entries(|e| e.mul(s))
    }

    pub fn trace(&self) -> ScalarField {
        let d = self.grid.dim();
        let mut acc = self.entry(0, 0).clone();
        for i in 1..d {
            acc = acc.add(self.entry(i, i));
        }
        acc
    }

    /// Remove the trace: S - (tr S / d) Id.
    pub fn trace_free(&self) -> SymTensorField {
        let d = self.grid.dim();
        let t = self.trace().scale(1.0 / d as f64);
        let mut entries = Vec::new();
        for i in 0..d {
            for j in i..d {
                let e = self.entry(i, j);
                entries.push(if i == j { e.sub(&t) } else { e.clone() });
            }
        }
        SymTensorField {
            grid: self.grid,
            entries,
        }
    }

    /// (div S)_i = sum_j d S_ij / d x_j.
    pub fn divergence(&self) -> VectorField {
        let d = self.grid.dim();
        let mut comps = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = self.entry(i, 0).partial(0);
            for j in 1..d {
                acc = acc.add(&self.entry(i, j).partial(j));
            }
            comps.push(acc);
        }
        VectorField::new(comps).unwrap()
    }

    pub fn matvec(&self, v: &VectorField) -> VectorField {
        let d = self.grid.dim();
        let mut comps = Vec::with_capacity(d);
        for i in 0..d {
            let mut acc = self.entry(i, 0).mul(v.comp(0));
            for k in 1..d {
                acc = acc.add(&self.entry(i, k).mul(v.comp(k)));
            }
            comps.push(acc);
        }
        VectorField::new(comps).unwrap()
    }

    pub fn to_matrix(&self) -> MatrixField {
        let d = self.grid.dim();
        let mut entries = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push(self.entry(i, j).clone());
            }
        }
        MatrixField::new(self.grid, entries)
    }

    pub fn mean(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.mean()).collect()
    }

    pub fn mean_free(&self) -> SymTensorField {
        self.map_entries(|e| e.mean_free())
    }

    pub fn band_limit(&self, kmax: i64) -> SymTensorField {
        self.map_entries(|e| e.band_limit(kmax))
    }

    pub fn translate(&self, shift: &[f64]) -> SymTensorField {
        self.map_entries(|e| e.translate(shift))
    }

    /// Pointwise Frobenius norm as a scalar field (off-diagonals counted twice).
    pub fn frobenius(&self) -> ScalarField {
        let d = self.grid.dim();
        let mut acc = ScalarField::zeros(self.grid);
        for i in 0..d {
            for j in 0..d {
                let e = self.entry(i, j);
                acc = acc.add(&e.mul(e));
            }
        }
        acc.map(f64::sqrt)
    }

    pub fn frobenius_c0(&self) -> f64 {
        self.frobenius().c0()
    }

    pub fn lp(&self, p: f64) -> f64 {
        self.frobenius().lp(p)
    }

    pub fn value_at(&self, idx: &[usize]) -> Vec<f64> {
        self.entries.iter().map(|e| e.grid_value(idx)).collect()
    }
}
