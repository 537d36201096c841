//! Fixed rational direction tables.
//!
//! Each set is generated from one or two base vectors (with hand-checked
//! rational orthonormal completions) by applying all signed coordinate
//! permutations; the same signed permutation is applied to the completion
//! vectors, which preserves orthonormality exactly.  The four sets per
//! dimension are pairwise disjoint because they draw on different
//! Pythagorean families.

use num_rational::Rational64;

use crate::direction::{signed_permute, Direction};
use crate::error::GeomError;

fn rat(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

fn rvec(entries: &[(i64, i64)]) -> Vec<Rational64> {
    entries.iter().map(|&(n, d)| rat(n, d)).collect()
}

struct Base {
    xi: Vec<Rational64>,
    frame: Vec<Vec<Rational64>>,
}

fn base(xi: &[(i64, i64)], frame: &[&[(i64, i64)]]) -> Base {
    Base {
        xi: rvec(xi),
        frame: frame.iter().map(|f| rvec(f)).collect(),
    }
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    match d {
        2 => vec![vec![0, 1], vec![1, 0]],
        3 => vec![
            vec![0, 1, 2],
            vec![0, 2, 1],
            vec![1, 0, 2],
            vec![1, 2, 0],
            vec![2, 0, 1],
            vec![2, 1, 0],
        ],
        _ => unreachable!(),
    }
}

fn sign_patterns(d: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    for mask in 0..(1u32 << d) {
        out.push((0..d).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect());
    }
    out
}

/// First nonzero entry positive; used to keep one representative per
/// +-pair when only the dyad xi (x) xi matters.
fn is_canonical(v: &[Rational64]) -> bool {
    for e in v {
        if *e.numer() > 0 {
            return true;
        }
        if *e.numer() < 0 {
            return false;
        }
    }
    false
}

/// Full signed-permutation orbit of the base vectors (deduplicated on xi).
/// With `half`, only canonical representatives are kept.
fn orbit(bases: &[Base], half: bool) -> Result<Vec<Direction>, GeomError> {
    let mut out: Vec<Direction> = Vec::new();
    for b in bases {
        let d = b.xi.len();
        for perm in permutations(d) {
            for signs in sign_patterns(d) {
                let xi = signed_permute(&b.xi, &perm, &signs);
                if half && !is_canonical(&xi) {
                    continue;
                }
                if out.iter().any(|dir| dir.xi() == xi.as_slice()) {
                    continue;
                }
                let frame = b
                    .frame
                    .iter()
                    .map(|f| signed_permute(f, &perm, &signs))
                    .collect();
                out.push(Direction::new(xi, frame)?);
            }
        }
    }
    Ok(out)
}

/// Listed directions taken verbatim (d=2 identity-ball sets, where the
/// chosen vectors avoid exactly-orthogonal pairs within each set).
fn listed(bases: &[Base]) -> Result<Vec<Direction>, GeomError> {
    bases
        .iter()
        .map(|b| Direction::new(b.xi.clone(), b.frame.clone()))
        .collect()
}

fn perp2(xi: &[(i64, i64)]) -> [(i64, i64); 2] {
    [(-xi[1].0, xi[1].1), (xi[0].0, xi[0].1)]
}

fn base2(xi: [(i64, i64); 2]) -> Base {
    let p = perp2(&xi);
    base(&xi, &[&p])
}

pub(crate) fn transport_odd(d: usize) -> Result<Vec<Direction>, GeomError> {
    match d {
        2 => orbit(&[base2([(1, 1), (0, 1)]), base2([(3, 5), (4, 5)])], false),
        3 => orbit(
            &[
                base(
                    &[(2, 3), (2, 3), (1, 3)],
                    &[&[(-2, 3), (1, 3), (2, 3)], &[(1, 3), (-2, 3), (2, 3)]],
                ),
                base(
                    &[(1, 9), (4, 9), (8, 9)],
                    &[&[(-4, 9), (-7, 9), (4, 9)], &[(8, 9), (-4, 9), (1, 9)]],
                ),
            ],
            false,
        ),
        _ => Err(GeomError::InvalidDimension(d)),
    }
}

pub(crate) fn transport_even(d: usize) -> Result<Vec<Direction>, GeomError> {
    match d {
        2 => orbit(&[base2([(5, 13), (12, 13)])], false),
        3 => orbit(
            &[
                base(
                    &[(3, 5), (4, 5), (0, 1)],
                    &[&[(-4, 5), (3, 5), (0, 1)], &[(0, 1), (0, 1), (1, 1)]],
                ),
                base(
                    &[(2, 7), (3, 7), (6, 7)],
                    &[&[(6, 7), (2, 7), (-3, 7)], &[(-3, 7), (6, 7), (-2, 7)]],
                ),
            ],
            false,
        ),
        _ => Err(GeomError::InvalidDimension(d)),
    }
}

pub(crate) fn euler_odd(d: usize) -> Result<Vec<Direction>, GeomError> {
    match d {
        2 => listed(&[
            base2([(40, 41), (9, 41)]),
            base2([(20, 29), (21, 29)]),
            base2([(7, 25), (24, 25)]),
            base2([(-12, 37), (35, 37)]),
            base2([(-45, 53), (28, 53)]),
            base2([(-60, 61), (11, 61)]),
        ]),
        3 => orbit(
            &[
                base(
                    &[(5, 13), (12, 13), (0, 1)],
                    &[&[(-12, 13), (5, 13), (0, 1)], &[(0, 1), (0, 1), (1, 1)]],
                ),
                base(
                    &[(12, 25), (15, 25), (16, 25)],
                    &[&[(4, 5), (0, 1), (-3, 5)], &[(-9, 25), (20, 25), (-12, 25)]],
                ),
            ],
            true,
        ),
        _ => Err(GeomError::InvalidDimension(d)),
    }
}

pub(crate) fn euler_even(d: usize) -> Result<Vec<Direction>, GeomError> {
    match d {
        2 => listed(&[
            base2([(24, 25), (7, 25)]),
            base2([(21, 29), (20, 29)]),
            base2([(9, 41), (40, 41)]),
            base2([(-11, 61), (60, 61)]),
            base2([(-28, 53), (45, 53)]),
            base2([(-35, 37), (12, 37)]),
        ]),
        3 => orbit(
            &[
                base(
                    &[(8, 17), (15, 17), (0, 1)],
                    &[&[(-15, 17), (8, 17), (0, 1)], &[(0, 1), (0, 1), (1, 1)]],
                ),
                base(
                    &[(2, 15), (10, 15), (11, 15)],
                    &[&[(1, 3), (2, 3), (-2, 3)], &[(-14, 15), (5, 15), (-2, 15)]],
                ),
            ],
            true,
        ),
        _ => Err(GeomError::InvalidDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orbit_sizes_match_the_family_combinatorics() {
        // d=2: signed perms of (1,0) give 4, of (3,4)/5 give 8
        assert_eq!(transport_odd(2).unwrap().len(), 12);
        assert_eq!(transport_even(2).unwrap().len(), 8);
        assert_eq!(euler_odd(2).unwrap().len(), 6);
        assert_eq!(euler_even(2).unwrap().len(), 6);
        // d=3: (2,2,1) has a repeated entry (24 distinct), (1,4,8) none (48)
        assert_eq!(transport_odd(3).unwrap().len(), 72);
        // (3,4,0): the zero entry halves the sign patterns (24); (2,3,6): 48
        assert_eq!(transport_even(3).unwrap().len(), 72);
        // canonical-mod-sign halves both families
        assert_eq!(euler_odd(3).unwrap().len(), 36);
        assert_eq!(euler_even(3).unwrap().len(), 36);
    }

    #[test]
    fn canonical_half_keeps_one_of_each_antipodal_pair() {
        let dirs = euler_odd(3).unwrap();
        for d in &dirs {
            assert!(is_canonical(d.xi()), "non-canonical {:?}", d.xi());
            let neg: Vec<_> = d.xi().iter().map(|x| -x).collect();
            assert!(
                !dirs.iter().any(|e| e.xi() == neg.as_slice()),
                "antipodal pair kept for {:?}",
                d.xi()
            );
        }
    }

    #[test]
    fn invalid_dimension_is_rejected() {
        assert!(matches!(transport_odd(4), Err(GeomError::InvalidDimension(4))));
        assert!(matches!(euler_even(1), Err(GeomError::InvalidDimension(1))));
    }
}
