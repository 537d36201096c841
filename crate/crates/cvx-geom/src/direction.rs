//! Rational unit directions with exact orthonormal completions.
//!
//! Every direction carries its full frame: the unit vector `xi` plus d-1
//! further rational unit vectors completing an orthonormal basis.  All
//! orthonormality checks are done in exact rational arithmetic, so the
//! floating-point views are orthonormal to rounding error by construction.

use num_integer::lcm;
use num_rational::Rational64;

use crate::error::GeomError;

pub(crate) fn rdot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn as_f64(r: &Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Direction {
    xi: Vec<Rational64>,
    frame: Vec<Vec<Rational64>>,
    n_star: i64,
}

impl Direction {
    /// Builds a direction from its unit vector and the d-1 completion
    /// vectors, verifying orthonormality exactly.
    pub fn new(xi: Vec<Rational64>, frame: Vec<Vec<Rational64>>) -> Result<Self, GeomError> {
        let d = xi.len();
        if d != 2 && d != 3 {
            return Err(GeomError::InvalidDimension(d));
        }
        if frame.len() != d - 1 || frame.iter().any(|a| a.len() != d) {
            return Err(GeomError::BadTable(format!(
                "frame must hold {} vectors of length {d}",
                d - 1
            )));
        }
        let one = Rational64::from_integer(1);
        let zero = Rational64::from_integer(0);
        let mut basis: Vec<&[Rational64]> = vec![&xi];
        basis.extend(frame.iter().map(|a| a.as_slice()));
        for (i, u) in basis.iter().enumerate() {
            for (j, v) in basis.iter().enumerate() {
                let want = if i == j { one } else { zero };
                if rdot(u, v) != want {
                    return Err(GeomError::BadTable(format!(
                        "basis vectors {i},{j} have inner product {} for xi={xi:?}",
                        rdot(u, v)
                    )));
                }
            }
        }
        let mut n_star = 1i64;
        for v in &basis {
            for e in v.iter() {
                n_star = lcm(n_star, *e.denom());
            }
        }
        Ok(Self { xi, frame, n_star })
    }

    pub fn dim(&self) -> usize {
        self.xi.len()
    }

    pub fn xi(&self) -> &[Rational64] {
        &self.xi
    }

    pub fn frame(&self, i: usize) -> &[Rational64] {
        &self.frame[i]
    }

    /// Smallest natural number n with n*xi and all n*frame vectors integer.
    pub fn n_star(&self) -> i64 {
        self.n_star
    }

    pub fn xi_f64(&self) -> Vec<f64> {
        self.xi.iter().map(as_f64).collect()
    }

    pub fn frame_f64(&self, i: usize) -> Vec<f64> {
        self.frame[i].iter().map(as_f64).collect()
    }
}

/// Applies a signed permutation to a vector: out[i] = signs[i] * v[perm[i]].
pub(crate) fn signed_permute(v: &[Rational64], perm: &[usize], signs: &[i64]) -> Vec<Rational64> {
    perm.iter()
        .zip(signs)
        .map(|(&p, &s)| v[p] * Rational64::from_integer(s))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational64 {
        Rational64::new(n, d)
    }

    #[test]
    fn accepts_exact_orthonormal_frame_and_clears_denominators() {
        let dir = Direction::new(
            vec![r(3, 5), r(4, 5)],
            vec![vec![r(-4, 5), r(3, 5)]],
        )
        .unwrap();
        assert_eq!(dir.n_star(), 5);
        let dir3 = Direction::new(
            vec![r(2, 3), r(2, 3), r(1, 3)],
            vec![
                vec![r(-2, 3), r(1, 3), r(2, 3)],
                vec![r(1, 3), r(-2, 3), r(2, 3)],
            ],
        )
        .unwrap();
        assert_eq!(dir3.n_star(), 3);
        // n_star * entries are integers
        for i in 0..3 {
            let v = dir3.xi()[i] * Rational64::from_integer(dir3.n_star());
            assert_eq!(*v.denom(), 1);
        }
    }

    #[test]
    fn rejects_non_unit_xi() {
        let err = Direction::new(vec![r(1, 2), r(1, 2)], vec![vec![r(-1, 2), r(1, 2)]]);
        assert!(matches!(err, Err(GeomError::BadTable(_))));
    }

    #[test]
    fn rejects_skewed_frame() {
        let err = Direction::new(vec![r(1, 1), r(0, 1)], vec![vec![r(3, 5), r(4, 5)]]);
        assert!(matches!(err, Err(GeomError::BadTable(_))));
    }

    #[test]
    fn mixed_denominators_take_the_lcm() {
        // xi from the 5-family, frame vector with a unit entry
        let dir = Direction::new(
            vec![r(3, 5), r(4, 5), r(0, 1)],
            vec![
                vec![r(-4, 5), r(3, 5), r(0, 1)],
                vec![r(0, 1), r(0, 1), r(1, 1)],
            ],
        )
        .unwrap();
        assert_eq!(dir.n_star(), 5);
    }

    #[test]
    fn signed_permutation_reindexes_with_signs() {
        let v = vec![r(1, 2), r(1, 3), r(1, 5)];
        let out = signed_permute(&v, &[2, 0, 1], &[1, -1, 1]);
        assert_eq!(out, vec![r(1, 5), r(-1, 2), r(1, 3)]);
    }
}
