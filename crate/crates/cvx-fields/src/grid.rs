use crate::FieldError;

/// Uniform grid on the unit torus T^d, d = 2 or 3, with n points per axis
/// (n a power of two, n >= 8). Point j = (j_1, ..., j_d) sits at x = j/n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    d: usize,
    n: usize,
}

impl TorusGrid {
    pub fn new(d: usize, n: usize) -> Result<Self, FieldError> {
        if !(d == 2 || d == 3) {
            return Err(FieldError::InvalidDimension(d));
        }
        if n < 8 || !n.is_power_of_two() {
            return Err(FieldError::InvalidGridSize(n));
        }
        Ok(TorusGrid { d, n })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Total number of grid points, n^d.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn shape(&self) -> Vec<usize> {
        vec![self.n; self.d]
    }

    /// Grid spacing 1/n.
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    /// Coordinates of the grid point with the given index.
    pub fn point(&self, idx: &[usize]) -> Vec<f64> {
        idx.iter().map(|&j| j as f64 / self.n as f64).collect()
    }

    /// Signed integer frequency for index i along one axis, in [-n/2, n/2).
    pub fn freq_of(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i <= n / 2 - 1 {
            i
        } else {
            i - n
        }
    }

    /// All signed frequencies along one axis, in FFT storage order.
    pub fn freqs(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.freq_of(i)).collect()
    }

    /// Largest frequency magnitude kept by the 2/3 dealiasing rule.
    pub fn dealias_cutoff(&self) -> i64 {
        (self.n as i64) / 3
    }

    /// Shortest distance between two points on the torus.
    pub fn torus_distance(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let mut dx = (x - y).rem_euclid(1.0);
                if dx > 0.5 {
                    dx = 1.0 - dx;
                }
                dx * dx
            })
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dims_and_sizes() {
        assert!(TorusGrid::new(1, 16).is_err());
        assert!(TorusGrid::new(4, 16).is_err());
        assert!(TorusGrid::new(2, 12).is_err());
        assert!(TorusGrid::new(2, 4).is_err());
        assert!(TorusGrid::new(3, 64).is_ok());
    }

    #[test]
    fn freq_ordering_matches_fft_layout() {
        let g = TorusGrid::new(2, 8).unwrap();
        assert_eq!(g.freqs(), vec![0, 1, 2, 3, -4, -3, -2, -1]);
    }

    #[test]
    fn torus_distance_wraps() {
        let g = TorusGrid::new(2, 8).unwrap();
        let a = [0.95, 0.0];
        let b = [0.05, 0.0];
        assert!((g.torus_distance(&a, &b) - 0.1).abs() < 1e-12);
    }
}
