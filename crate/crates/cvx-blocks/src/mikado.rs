//! Steady bundles of thin straight pipes along rational directions.
//!
//! A block carries a velocity `W = xi phi`, the same scalar `phi` as its
//! companion density `Theta`, and a vector potential `V` with `W = curl V`.
//! The scalar is a radial bump in the two frame coordinates perpendicular
//! to the axis, wrapped to the unit cell, so the support is a square grid
//! of pipes with spacing `1/(n lambda)`.  The map from the torus to the
//! wrapped frame coordinates is a measure-preserving group homomorphism
//! (an integer matrix of full rank), so every torus moment of a block
//! equals the plain planar moment of its profile: `int phi^2 = 1` gives
//! `int W (x) W = xi (x) xi` and `int W Theta = xi` with no grid involved.
//!
//! Different directions keep their pipes apart through rational offsets
//! handed out by a shared registry.  Each placement is certified in exact
//! rational arithmetic: crossing pairs reduce to the distance from a
//! rational point to a rational subgroup of the line (a gcd), antiparallel
//! pairs to a closest-vector search in a planar integer lattice.  When a
//! candidate list runs dry the registry halves the common pipe radius and
//! tries again, up to a fixed budget.

use std::sync::{Arc, Mutex};

use cvx_fields::{ScalarField, TorusGrid, VectorField};
use cvx_geom::Direction;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::BlocksError;
use crate::jets::{ns_shapes, NsShapes};
use crate::profile::radial_volume_integral;

/// Starting pipe radius in wrapped frame coordinates (pipe spacing is 1).
const EPSILON_START: (i64, i64) = (1, 4);
/// Radius halvings a registry may spend before reporting a collision.
const MAX_HALVINGS: u32 = 6;
/// Keeps every rational shift comfortably inside `i64`.
const LAMBDA_MAX: u64 = 1 << 30;

/// Offset candidates for the pipe grid, as dyadic fractions of the spacing.
/// Ordered coarse to fine so early directions take the roomy slots.
const OFFSET_CANDIDATES: &[(i64, i64, i64)] = &[
    (0, 0, 1),
    (1, 1, 2),
    (1, 0, 2),
    (0, 1, 2),
    (1, 1, 4),
    (3, 3, 4),
    (3, 1, 4),
    (1, 3, 4),
    (1, 0, 4),
    (0, 1, 4),
    (1, 2, 4),
    (2, 1, 4),
    (1, 1, 8),
    (5, 3, 8),
    (3, 7, 8),
    (7, 1, 8),
    (1, 5, 8),
    (5, 7, 8),
    (3, 0, 8),
    (0, 3, 8),
    (1, 3, 16),
    (9, 5, 16),
    (5, 13, 16),
    (13, 1, 16),
    (3, 9, 16),
    (11, 7, 16),
    (7, 15, 16),
    (15, 11, 16),
    (1, 9, 32),
    (17, 3, 32),
    (9, 25, 32),
    (25, 13, 32),
    (5, 19, 32),
    (21, 31, 32),
    (29, 7, 32),
    (13, 23, 32),
];

/// Wrap to the centered unit cell `[-1/2, 1/2)`.
fn wrap(x: f64) -> f64 {
    x - x.round()
}

fn big(r: Rational64) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

fn big_int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn dot3(a: &[Rational64], b: &[Rational64]) -> BigRational {
    let mut acc = BigRational::zero();
    for (x, y) in a.iter().zip(b) {
        acc += big(*x) * big(*y);
    }
    acc
}

fn cross3(a: &[Rational64], b: &[Rational64]) -> [BigRational; 3] {
    let g = |i: usize| big(a[i]);
    let h = |i: usize| big(b[i]);
    [
        g(1) * h(2) - g(2) * h(1),
        g(2) * h(0) - g(0) * h(2),
        g(0) * h(1) - g(1) * h(0),
    ]
}

/// Generator of the subgroup `a Z + b Z` of the rational line.
fn rat_gcd(a: &BigRational, b: &BigRational) -> BigRational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    BigRational::new(num, a.denom() * b.denom())
}

/// Distance from `s` to the subgroup `g Z` (with `g > 0`).
fn dist_to_multiples(s: &BigRational, g: &BigRational) -> BigRational {
    let k = (s / g).round();
    (s - g * k).abs()
}

fn norm_sq2(v: &[BigInt; 2]) -> BigInt {
    &v[0] * &v[0] + &v[1] * &v[1]
}

fn dot2(a: &[BigInt; 2], b: &[BigInt; 2]) -> BigInt {
    &a[0] * &b[0] + &a[1] * &b[1]
}

/// Basis of the planar lattice spanned by integer generators, upper
/// triangular: `b1 = (d1, y)`, `b2 = (0, d2)`.  Panics unless the
/// generators have rank two, which the callers guarantee by always
/// including a scaled copy of `Z^2`.
fn lattice_basis(gens: &[[BigInt; 2]]) -> ([BigInt; 2], [BigInt; 2]) {
    let mut b1: Option<[BigInt; 2]> = None;
    let mut ys: Vec<BigInt> = Vec::new();
    for v in gens {
        if v[0].is_zero() {
            if !v[1].is_zero() {
                ys.push(v[1].clone());
            }
            continue;
        }
        match &b1 {
            None => b1 = Some(v.clone()),
            Some(b) => {
                let e = b[0].extended_gcd(&v[0]);
                let nb = [e.gcd.clone(), &e.x * &b[1] + &e.y * &v[1]];
                // both b and v drop to the x = 0 line after subtracting
                // their multiple of the new first basis vector
                ys.push(&b[1] - (&b[0] / &e.gcd) * &nb[1]);
                ys.push(&v[1] - (&v[0] / &e.gcd) * &nb[1]);
                b1 = Some(nb);
            }
        }
    }
    let b1 = b1.expect("planar lattice generators must have rank two");
    let mut d2 = BigInt::zero();
    for y in &ys {
        d2 = d2.gcd(y);
    }
    assert!(!d2.is_zero(), "planar lattice generators must have rank two");
    (b1, [BigInt::zero(), d2])
}

/// Lagrange reduction of a planar basis: returns vectors with the mutual
/// projection coefficient at most 1/2, so a rounded coordinate solve is
/// within one step of the closest lattice vector.
fn gauss_reduce(mut a: [BigInt; 2], mut b: [BigInt; 2]) -> ([BigInt; 2], [BigInt; 2]) {
    for _ in 0..256 {
        if norm_sq2(&a) > norm_sq2(&b) {
            std::mem::swap(&mut a, &mut b);
        }
        let mu = BigRational::new(dot2(&a, &b), norm_sq2(&a)).round().to_integer();
        if mu.is_zero() {
            return (a, b);
        }
        b = [&b[0] - &mu * &a[0], &b[1] - &mu * &a[1]];
    }
    unreachable!("planar reduction did not settle");
}

/// Exact squared distance from the rational target to the lattice
/// `(b1 Z + b2 Z) / den`, via a rounded solve plus a neighbor sweep.
fn closest_vector_dist_sq(
    target: &[BigRational; 2],
    b1: &[BigInt; 2],
    b2: &[BigInt; 2],
    den: &BigInt,
) -> BigRational {
    let det = big_rat(&(&b1[0] * &b2[1] - &b1[1] * &b2[0]));
    let tx = target[0].clone() * big_rat(den);
    let ty = target[1].clone() * big_rat(den);
    let m1 = ((tx.clone() * big_rat(&b2[1]) - ty.clone() * big_rat(&b2[0])) / det.clone()).round();
    let m2 = ((big_rat(&b1[0]) * ty.clone() - big_rat(&b1[1]) * tx.clone()) / det).round();
    let mut best: Option<BigRational> = None;
    for i in -2i64..=2 {
        for j in -2i64..=2 {
            let c1 = m1.clone() + big_int(i);
            let c2 = m2.clone() + big_int(j);
            let lx = c1.clone() * big_rat(&b1[0]) + c2.clone() * big_rat(&b2[0]);
            let ly = c1 * big_rat(&b1[1]) + c2 * big_rat(&b2[1]);
            let dx = tx.clone() - lx;
            let dy = ty.clone() - ly;
            let d = (dx.clone() * dx + dy.clone() * dy) / (big_rat(den) * big_rat(den));
            if best.as_ref().map_or(true, |b| &d < b) {
                best = Some(d);
            }
        }
    }
    best.unwrap()
}

fn big_rat(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

/// Pipe-family pair geometry that does not depend on the candidate offset.
enum PairGeom {
    /// Crossing axes: every axis gap lies in `k + g Z` along the common
    /// normal `c`, where only `k` moves with the new family's offset.
    Skew {
        g: BigRational,
        c_norm_sq: BigRational,
        /// Contribution of the two offset coordinates to the gap.
        p: [BigRational; 2],
        /// Fixed contribution of the placed family's shift.
        base: BigRational,
    },
    /// Antiparallel axes: gaps live in a planar lattice in the shared
    /// perpendicular plane, written in the new direction's frame.
    Parallel {
        q: [[BigRational; 2]; 2],
        base: [BigRational; 2],
        b1: [BigInt; 2],
        b2: [BigInt; 2],
        den: BigInt,
    },
}

fn pair_geometry(new: &Direction, placed: &PlacedPipes, lambda: u64) -> PairGeom {
    let n_new = big_int(new.n_star()) * big_int(lambda as i64);
    let n_old = big_int(placed.dir.n_star()) * big_int(lambda as i64);
    let c = cross3(new.xi(), placed.dir.xi());
    if c.iter().any(|e| !e.is_zero()) {
        let mut g = BigRational::zero();
        for e in &c {
            g = rat_gcd(&g, e);
        }
        for i in 0..2 {
            g = rat_gcd(&g, &(dot3c(new.frame(i), &c) / n_new.clone()));
            g = rat_gcd(&g, &(dot3c(placed.dir.frame(i), &c) / n_old.clone()));
        }
        let c_norm_sq = c.iter().map(|e| e.clone() * e.clone()).sum();
        let p = [
            dot3c(new.frame(0), &c) / n_new.clone(),
            dot3c(new.frame(1), &c) / n_new,
        ];
        let mut base = BigRational::zero();
        for (a, e) in placed.shift.iter().zip(&c) {
            base += big(*a) * e.clone();
        }
        PairGeom::Skew { g, c_norm_sq, p, base }
    } else {
        // same or opposite axis: work in the new direction's frame
        let u = |v: &[Rational64]| -> [BigRational; 2] {
            [dot3(v, new.frame(0)), dot3(v, new.frame(1))]
        };
        let mut gens: Vec<[BigRational; 2]> = Vec::new();
        for j in 0..3 {
            let e: Vec<Rational64> = (0..3)
                .map(|i| Rational64::from_integer((i == j) as i64))
                .collect();
            gens.push(u(&e));
        }
        gens.push([n_new.recip(), BigRational::zero()]);
        gens.push([BigRational::zero(), n_new.recip()]);
        for i in 0..2 {
            let w = u(placed.dir.frame(i));
            gens.push([w[0].clone() / n_old.clone(), w[1].clone() / n_old.clone()]);
        }
        let mut den = BigInt::from(1);
        for gpair in &gens {
            for e in gpair {
                den = den.lcm(e.denom());
            }
        }
        let ints: Vec<[BigInt; 2]> = gens
            .iter()
            .map(|gpair| {
                [
                    gpair[0].numer() * (&den / gpair[0].denom()),
                    gpair[1].numer() * (&den / gpair[1].denom()),
                ]
            })
            .collect();
        let (raw1, raw2) = lattice_basis(&ints);
        let (b1, b2) = gauss_reduce(raw1, raw2);
        let q = [
            [
                dot3(new.frame(0), new.frame(0)) / n_new.clone(),
                dot3(new.frame(0), new.frame(1)) / n_new.clone(),
            ],
            [
                dot3(new.frame(1), new.frame(0)) / n_new.clone(),
                dot3(new.frame(1), new.frame(1)) / n_new.clone(),
            ],
        ];
        let alpha: Vec<Rational64> = placed.shift.to_vec();
        let base = u(&alpha);
        PairGeom::Parallel { q, base, b1, b2, den }
    }
}

fn dot3c(a: &[Rational64], c: &[BigRational; 3]) -> BigRational {
    let mut acc = BigRational::zero();
    for (x, e) in a.iter().zip(c) {
        acc += big(*x) * e.clone();
    }
    acc
}

/// Verdict of one exact pair check, kept for error reporting.
struct PairVerdict {
    ok: bool,
    gap: f64,
    needed: f64,
}

fn check_pair(
    geom: &PairGeom,
    t: (Rational64, Rational64),
    r_new: &BigRational,
    r_old: &BigRational,
) -> PairVerdict {
    let needed = r_new.clone() + r_old.clone();
    match geom {
        PairGeom::Skew { g, c_norm_sq, p, base } => {
            let s = big(t.0) * p[0].clone() + big(t.1) * p[1].clone() - base.clone();
            let q = dist_to_multiples(&s, g);
            let ok = q.clone() * q.clone() >= needed.clone() * needed.clone() * c_norm_sq.clone();
            let scale = c_norm_sq.to_f64().unwrap_or(1.0).sqrt();
            PairVerdict {
                ok,
                gap: q.to_f64().unwrap_or(0.0) / scale,
                needed: needed.to_f64().unwrap_or(0.0),
            }
        }
        PairGeom::Parallel { q, base, b1, b2, den } => {
            let tau = [
                big(t.0) * q[0][0].clone() + big(t.1) * q[1][0].clone() - base[0].clone(),
                big(t.0) * q[0][1].clone() + big(t.1) * q[1][1].clone() - base[1].clone(),
            ];
            let d_sq = closest_vector_dist_sq(&tau, b1, b2, den);
            let ok = d_sq >= needed.clone() * needed.clone();
            PairVerdict {
                ok,
                gap: d_sq.to_f64().unwrap_or(0.0).sqrt(),
                needed: needed.to_f64().unwrap_or(0.0),
            }
        }
    }
}

/// One direction's pipes as the registry remembers them.
#[derive(Debug, Clone)]
struct PlacedPipes {
    dir: Direction,
    offsets: (Rational64, Rational64),
    shift: [Rational64; 3],
    epsilon: Rational64,
}

/// Shift granted to one direction: the rational offsets of its pipe grid,
/// the ambient shift they induce, and the radius in force at placement.
#[derive(Debug, Clone)]
pub struct Placement {
    offsets: (Rational64, Rational64),
    shift: [Rational64; 3],
    epsilon: Rational64,
}

impl Placement {
    pub fn offsets(&self) -> (Rational64, Rational64) {
        self.offsets
    }

    pub fn shift(&self) -> &[Rational64; 3] {
        &self.shift
    }

    pub fn epsilon(&self) -> Rational64 {
        self.epsilon
    }
}

#[derive(Debug)]
struct RegistryInner {
    epsilon: Rational64,
    halvings_left: u32,
    placed: Vec<PlacedPipes>,
}

/// Hands out pipe offsets for one frequency `lambda`, keeping every placed
/// direction's support disjoint from every other.  All placements for one
/// perturbation level go through a single registry; the structure is
/// internally locked so shared references can place concurrently.
#[derive(Debug)]
pub struct ShiftRegistry {
    lambda: u64,
    inner: Mutex<RegistryInner>,
}

impl ShiftRegistry {
    pub fn new(lambda: u64) -> Result<ShiftRegistry, BlocksError> {
        ShiftRegistry::with_budget(
            lambda,
            Rational64::new(EPSILON_START.0, EPSILON_START.1),
            MAX_HALVINGS,
        )
    }

    /// Registry with a custom starting radius and halving budget.
    pub fn with_budget(
        lambda: u64,
        epsilon: Rational64,
        halvings: u32,
    ) -> Result<ShiftRegistry, BlocksError> {
        if lambda == 0 || lambda > LAMBDA_MAX {
            return Err(BlocksError::InvalidParams(format!(
                "pipe frequency lambda must be in 1..={LAMBDA_MAX}, got {lambda}"
            )));
        }
        if epsilon <= Rational64::new(0, 1) || epsilon > Rational64::new(1, 2) {
            return Err(BlocksError::InvalidParams(format!(
                "pipe radius must sit in (0, 1/2], got {epsilon}"
            )));
        }
        Ok(ShiftRegistry {
            lambda,
            inner: Mutex::new(RegistryInner {
                epsilon,
                halvings_left: halvings,
                placed: Vec::new(),
            }),
        })
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    /// Current pipe radius in frame coordinates (may have shrunk).
    pub fn epsilon(&self) -> Rational64 {
        self.inner.lock().unwrap().epsilon
    }

    pub fn placed_count(&self) -> usize {
        self.inner.lock().unwrap().placed.len()
    }

    /// Grant offsets for a direction, certifying disjointness against every
    /// earlier placement.  Placing the same direction again returns the
    /// original grant.
    pub fn place(&self, dir: &Direction) -> Result<Placement, BlocksError> {
        let mut inner = self.inner.lock().unwrap();
        if let Some(p) = inner.placed.iter().find(|p| p.dir.xi() == dir.xi()) {
            return Ok(Placement {
                offsets: p.offsets,
                shift: p.shift,
                epsilon: p.epsilon,
            });
        }
        let n_scale = Rational64::new(dir.n_star() * self.lambda as i64, 1);
        let geoms: Vec<(PairGeom, BigRational)> = inner
            .placed
            .iter()
            .map(|p| {
                let r_old = big(p.epsilon)
                    / (big_int(p.dir.n_star()) * big_int(self.lambda as i64));
                (pair_geometry(dir, p, self.lambda), r_old)
            })
            .collect();
        let mut last_fail: Option<(usize, PairVerdict)> = None;
        loop {
            let r_new = big(inner.epsilon) / big(n_scale);
            for &(tn1, tn2, td) in OFFSET_CANDIDATES {
                let t = (Rational64::new(tn1, td), Rational64::new(tn2, td));
                let mut ok = true;
                for (idx, (geom, r_old)) in geoms.iter().enumerate() {
                    let v = check_pair(geom, t, &r_new, r_old);
                    if !v.ok {
                        last_fail = Some((idx, v));
                        ok = false;
                        break;
                    }
                }
                if ok {
                    let shift = ambient_shift(dir, t, self.lambda);
                    let grant = PlacedPipes {
                        dir: dir.clone(),
                        offsets: t,
                        shift,
                        epsilon: inner.epsilon,
                    };
                    inner.placed.push(grant);
                    return Ok(Placement {
                        offsets: t,
                        shift,
                        epsilon: inner.epsilon,
                    });
                }
            }
            if inner.halvings_left == 0 {
                let (idx, v) = last_fail.expect("a candidate must have failed");
                let other = &inner.placed[idx].dir;
                return Err(BlocksError::SupportCollision {
                    first: format!("{:?}", dir.xi()),
                    second: format!("{:?}", other.xi()),
                    gap: v.gap,
                    needed: v.needed,
                });
            }
            inner.halvings_left -= 1;
            inner.epsilon = inner.epsilon / 2;
        }
    }
}

/// Ambient shift induced by frame offsets: `(t1 A1 + t2 A2) / (n lambda)`.
fn ambient_shift(dir: &Direction, t: (Rational64, Rational64), lambda: u64) -> [Rational64; 3] {
    let scale = Rational64::new(1, dir.n_star() * lambda as i64);
    let mut out = [Rational64::new(0, 1); 3];
    for j in 0..3 {
        out[j] = (t.0 * dir.frame(0)[j] + t.1 * dir.frame(1)[j]) * scale;
    }
    out
}

/// One pipe bundle: velocity `W = xi phi`, density `Theta = phi`, potential
/// `V = (n lambda)^{-2} grad Phi x xi`, all steady, `(T/lambda)^3`-periodic
/// and constant along the axis.
#[derive(Debug, Clone)]
pub struct MikadoBlock {
    xi: Direction,
    lambda: u64,
    n_star: i64,
    placement: Placement,
    xi_f: [f64; 3],
    rows: [[f64; 3]; 2],
    offs: [f64; 2],
    eps: f64,
    shapes: Arc<NsShapes>,
}

/// Build the pipe bundle for one direction, drawing its offsets from the
/// registry.  The direction must be three-dimensional and the registry must
/// have been created for the same `lambda`.
pub fn build_mikado(
    xi: &Direction,
    lambda: u64,
    registry: &ShiftRegistry,
) -> Result<MikadoBlock, BlocksError> {
    if xi.dim() != 3 {
        return Err(BlocksError::InvalidDimension(xi.dim()));
    }
    if lambda != registry.lambda() {
        return Err(BlocksError::InvalidParams(format!(
            "registry was created for lambda {}, block asked for {}",
            registry.lambda(),
            lambda
        )));
    }
    let placement = registry.place(xi)?;
    let shapes = ns_shapes(2)?;
    let n_star = xi.n_star();
    let freq = (n_star * lambda as i64) as f64;
    let xi_v = xi.xi_f64();
    let mut rows = [[0.0; 3]; 2];
    for i in 0..2 {
        let f = xi.frame_f64(i);
        for j in 0..3 {
            rows[i][j] = freq * f[j];
        }
    }
    let offs = [
        *placement.offsets().0.numer() as f64 / *placement.offsets().0.denom() as f64,
        *placement.offsets().1.numer() as f64 / *placement.offsets().1.denom() as f64,
    ];
    Ok(MikadoBlock {
        xi: xi.clone(),
        lambda,
        n_star,
        eps: *placement.epsilon().numer() as f64 / *placement.epsilon().denom() as f64,
        placement,
        xi_f: [xi_v[0], xi_v[1], xi_v[2]],
        rows,
        offs,
        shapes,
    })
}

impl MikadoBlock {
    pub fn xi(&self) -> &Direction {
        &self.xi
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn n_star(&self) -> i64 {
        self.n_star
    }

    /// Ambient rational shift of the pipe grid.
    pub fn shift(&self) -> &[Rational64; 3] {
        self.placement.shift()
    }

    /// Pipe radius in frame coordinates, as granted by the registry.
    pub fn epsilon(&self) -> f64 {
        self.eps
    }

    pub fn epsilon_exact(&self) -> Rational64 {
        self.placement.epsilon()
    }

    /// Wrapped frame coordinates of a point: distance to the nearest pipe
    /// axis is `|y|/(n lambda)`.
    fn frame_y(&self, x: &[f64]) -> [f64; 2] {
        let mut y = [0.0; 2];
        for i in 0..2 {
            let mut acc = -self.offs[i];
            for j in 0..3 {
                acc += self.rows[i][j] * x[j];
            }
            y[i] = wrap(acc);
        }
        y
    }

    /// Perpendicular profile `eps^{-1} phi(|y|/eps)`: the rescaling keeps
    /// the planar square integral at exactly 1.
    pub fn phi_at(&self, x: &[f64]) -> f64 {
        let y = self.frame_y(x);
        let rho = y[0].hypot(y[1]) / self.eps;
        if rho >= 1.0 {
            return 0.0;
        }
        self.shapes.phi(rho) / self.eps
    }

    /// Companion density: the same scalar as the perpendicular profile.
    pub fn theta_at(&self, x: &[f64]) -> f64 {
        self.phi_at(x)
    }

    pub fn w_at(&self, x: &[f64]) -> [f64; 3] {
        let p = self.phi_at(x);
        [self.xi_f[0] * p, self.xi_f[1] * p, self.xi_f[2] * p]
    }

    /// Potential scalar `eps Phi(|y|/eps)`, with `phi = -lap Phi` planar.
    pub fn big_phi_at(&self, x: &[f64]) -> f64 {
        let y = self.frame_y(x);
        let rho = y[0].hypot(y[1]) / self.eps;
        self.eps * self.shapes.big_phi(rho)
    }

    pub fn grad_big_phi_at(&self, x: &[f64]) -> [f64; 3] {
        let y = self.frame_y(x);
        let r = y[0].hypot(y[1]);
        if r == 0.0 {
            return [0.0; 3];
        }
        // d/dx [eps Phi(|y|/eps)] = Phi'(|y|/eps) (y_i/|y|) rows_i; the
        // eps factors cancel and rows already carry n lambda
        let mag = self.shapes.big_phi_d1(r / self.eps);
        let mut out = [0.0; 3];
        for i in 0..2 {
            let w = mag * y[i] / r;
            for j in 0..3 {
                out[j] += w * self.rows[i][j];
            }
        }
        out
    }

    /// Vector potential `V = (n lambda)^{-2} grad Phi x xi` with
    /// `curl V = W`.
    pub fn v_at(&self, x: &[f64]) -> [f64; 3] {
        let g = self.grad_big_phi_at(x);
        let s = 1.0 / ((self.n_star * self.lambda as i64) as f64).powi(2);
        [
            s * (g[1] * self.xi_f[2] - g[2] * self.xi_f[1]),
            s * (g[2] * self.xi_f[0] - g[0] * self.xi_f[2]),
            s * (g[0] * self.xi_f[1] - g[1] * self.xi_f[0]),
        ]
    }

    pub fn sample_w(&self, grid: &TorusGrid) -> VectorField {
        VectorField::from_fns(grid.clone(), |x, c| self.w_at(x)[c])
    }

    pub fn sample_theta(&self, grid: &TorusGrid) -> ScalarField {
        ScalarField::from_fn(grid.clone(), |x| self.theta_at(x))
    }

    pub fn sample_v(&self, grid: &TorusGrid) -> VectorField {
        VectorField::from_fns(grid.clone(), |x, c| self.v_at(x)[c])
    }

    /// Planar square integral of the profile, which by the measure
    /// preservation of the frame map equals the torus mean of `phi^2`; the
    /// first moments follow as `int W (x) W = coeff xi (x) xi` and
    /// `int W Theta = coeff xi`.
    pub fn w_outer_mean_coeff(&self) -> f64 {
        radial_volume_integral(self.shapes.phi_profile(), 2, |v| v * v)
    }

    pub fn mean_w_theta(&self) -> [f64; 3] {
        let c = self.w_outer_mean_coeff();
        [self.xi_f[0] * c, self.xi_f[1] * c, self.xi_f[2] * c]
    }
}
