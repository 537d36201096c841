//! Direction sets with their decomposition charts.
//!
//! A set is built in three passes: a greedy pass walks a deterministic
//! sample grid of the domain and anchors a chart wherever no existing chart
//! already covers the sample comfortably; a gap pass probes the domain with
//! a seeded random sweep and patches any point the greedy grid missed; a
//! final sweep must come back clean or the build fails.  Charts are never
//! serialized — only the rational direction tables are — so a reloaded set
//! rebuilds its charts by the same deterministic procedure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::chart::Chart;
use crate::direction::Direction;
use crate::error::GeomError;
use crate::linalg::{matvec, right_inverse};
use crate::tables;

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// The four families: transport sets decompose annulus vectors into
/// positive combinations of directions, identity-ball sets decompose
/// near-identity symmetric matrices into dyad combinations.  Odd/even pairs
/// exist so that two interleaved perturbation steps never share directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SetKind {
    TransportOdd,
    TransportEven,
    EulerOdd,
    EulerEven,
}

impl SetKind {
    pub const ALL: [SetKind; 4] = [
        SetKind::TransportOdd,
        SetKind::TransportEven,
        SetKind::EulerOdd,
        SetKind::EulerEven,
    ];

    pub fn is_transport(self) -> bool {
        matches!(self, SetKind::TransportOdd | SetKind::TransportEven)
    }

    pub fn label(self) -> &'static str {
        match self {
            SetKind::TransportOdd => "transport_odd",
            SetKind::TransportEven => "transport_even",
            SetKind::EulerOdd => "euler_odd",
            SetKind::EulerEven => "euler_even",
        }
    }

    pub fn parse(s: &str) -> Result<SetKind, GeomError> {
        SetKind::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| GeomError::Parse(format!("unknown set kind {s:?}")))
    }
}

impl std::fmt::Display for SetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Packed coordinates for symmetric d x d matrices: upper triangle row-major
/// with off-diagonal entries scaled by sqrt(2), so that the Euclidean inner
/// product of packed vectors equals the Frobenius inner product.
pub(crate) fn sym_len(d: usize) -> usize {
    d * (d + 1) / 2
}

/// Packed coordinates of the dyad xi (x) xi.
pub(crate) fn pack_dyad(xi: &[f64]) -> Vec<f64> {
    let d = xi.len();
    let mut out = Vec::with_capacity(sym_len(d));
    for i in 0..d {
        for j in i..d {
            let w = if i == j { 1.0 } else { SQRT2 };
            out.push(w * xi[i] * xi[j]);
        }
    }
    out
}

/// Packed coordinates of a symmetric matrix given as its plain upper
/// triangle (row-major, no scaling), the storage convention used by the
/// field crates.
pub(crate) fn pack_sym(upper: &[f64], d: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(sym_len(d));
    let mut idx = 0;
    for i in 0..d {
        for j in i..d {
            let w = if i == j { 1.0 } else { SQRT2 };
            out.push(w * upper[idx]);
            idx += 1;
        }
    }
    out
}

pub(crate) fn pack_identity(d: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(sym_len(d));
    for i in 0..d {
        for j in i..d {
            out.push(if i == j { 1.0 } else { 0.0 });
        }
    }
    out
}

struct BuildParams {
    radius: f64,
    /// Accept a chart when its anchor margin reaches this fraction of the
    /// uniform coefficient share (see `share` below).
    accept_rel: f64,
    /// Keep a below-target chart anyway if it reaches this fraction.
    floor_rel: f64,
    wide_m: usize,
    /// A sample is skipped when an existing chart covers it this well
    /// (relative to that chart's own margin).
    skip_u: f64,
    skip_factor: f64,
    prefer_wide: bool,
    /// The random sweep calls a point covered under these looser bounds.
    sweep_u: f64,
    sweep_factor: f64,
    sweep_len: usize,
}

fn build_params(kind: SetKind, d: usize) -> BuildParams {
    BuildParams {
        radius: match (kind.is_transport(), d) {
            (true, 2) => 0.4,
            (false, 2) => 0.35,
            (true, _) => 0.7,
            (false, _) => 0.8,
        },
        accept_rel: 0.3,
        floor_rel: 0.08,
        wide_m: if d == 2 { 8 } else { 12 },
        // in three dimensions the domains are too roomy for simplices to
        // tile economically, so wide charts carry the coverage there
        prefer_wide: d == 3,
        skip_u: if d == 2 { 0.5 } else { 0.75 },
        skip_factor: if d == 2 { 0.5 } else { 0.3 },
        sweep_u: 0.95,
        sweep_factor: 0.2,
        sweep_len: 4000,
    }
}

pub struct DirectionSet {
    kind: SetKind,
    dim: usize,
    directions: Vec<Direction>,
    pub(crate) atoms: Vec<Vec<f64>>,
    pub(crate) coeff_dim: usize,
    pub(crate) charts: Vec<Chart>,
}

impl DirectionSet {
    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn directions(&self) -> &[Direction] {
        &self.directions
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    /// Chart membership sizes, for diagnostics.
    pub fn chart_member_counts(&self) -> Vec<usize> {
        self.charts.iter().map(|c| c.members.len()).collect()
    }

    pub fn build(kind: SetKind, d: usize) -> Result<DirectionSet, GeomError> {
        let directions = match kind {
            SetKind::TransportOdd => tables::transport_odd(d)?,
            SetKind::TransportEven => tables::transport_even(d)?,
            SetKind::EulerOdd => tables::euler_odd(d)?,
            SetKind::EulerEven => tables::euler_even(d)?,
        };
        DirectionSet::from_directions(kind, d, directions)
    }

    fn from_directions(
        kind: SetKind,
        d: usize,
        directions: Vec<Direction>,
    ) -> Result<DirectionSet, GeomError> {
        if d != 2 && d != 3 {
            return Err(GeomError::InvalidDimension(d));
        }
        let atoms: Vec<Vec<f64>> = directions
            .iter()
            .map(|dir| {
                let xi = dir.xi_f64();
                if kind.is_transport() {
                    xi
                } else {
                    pack_dyad(&xi)
                }
            })
            .collect();
        let coeff_dim = if kind.is_transport() { d } else { sym_len(d) };
        let mut set = DirectionSet {
            kind,
            dim: d,
            directions,
            atoms,
            coeff_dim,
            charts: Vec::new(),
        };
        set.build_charts()?;
        Ok(set)
    }

    fn full_ranking_map(&self) -> Result<Vec<f64>, GeomError> {
        let t = self.coeff_dim;
        let m = self.atoms.len();
        let mut dmat = vec![0.0; t * m];
        for (col, atom) in self.atoms.iter().enumerate() {
            for row in 0..t {
                dmat[row * m + col] = atom[row];
            }
        }
        right_inverse(&dmat, t, m, 1e-10).ok_or_else(|| {
            GeomError::BadTable(format!(
                "{} directions do not span the coefficient space",
                self.kind
            ))
        })
    }

    fn covered(&self, q: &[f64], u_max: f64, factor: f64) -> bool {
        self.charts.iter().any(|c| c.covers(q, u_max, factor))
    }

    /// Uniform coefficient share at an anchor: the scale a "perfectly
    /// balanced" m-member chart could give every coefficient.  For dyads the
    /// coefficients of any exact representation sum to the trace, so the
    /// share shrinks with the member count; for vectors there is no such
    /// budget (antipodal pairs can carry extra mass) and a fixed scale works.
    fn share(&self, q: &[f64], m: usize) -> f64 {
        if self.kind.is_transport() {
            0.5
        } else {
            let mut tr = 0.0;
            let mut idx = 0;
            for i in 0..self.dim {
                for j in i..self.dim {
                    if i == j {
                        tr += q[idx];
                    }
                    idx += 1;
                }
            }
            tr / m as f64
        }
    }

    /// Build one chart covering q, preferring an exact-inverse chart on the
    /// best-ranked members and falling back to progressively wider
    /// right-inverse charts.
    fn cover_sample(
        &self,
        q: &[f64],
        ri_full: &[f64],
        p: &BuildParams,
    ) -> Option<Chart> {
        let t = self.coeff_dim;
        let n = self.atoms.len();
        let scores = matvec(ri_full, n, t, q);
        let mut ranked: Vec<usize> = (0..n).collect();
        ranked.sort_by(|&a, &b| scores[b].partial_cmp(&scores[a]).unwrap());

        let simplex_candidate = || -> Option<Chart> {
            let top_k = (t + 4).min(n);
            let mut best: Option<(Chart, f64)> = None;
            for combo in combinations(top_k, t) {
                let members: Vec<usize> = combo.iter().map(|&i| ranked[i]).collect();
                if let Some((chart, margin)) =
                    Chart::simplex(members, &self.atoms, q, p.radius)
                {
                    if margin >= p.accept_rel * self.share(q, t)
                        && best.as_ref().map_or(true, |(_, bm)| margin > *bm)
                    {
                        best = Some((chart, margin));
                    }
                }
            }
            best.map(|(chart, _)| chart)
        };

        // returns (accepted, best below-target fallback)
        let wide_candidates = || -> (Option<Chart>, Option<Chart>) {
            let mut fallback: Option<(Chart, f64)> = None;
            let mut m = p.wide_m.min(n);
            loop {
                let members: Vec<usize> = ranked[..m].to_vec();
                let share = self.share(q, m);
                if let Some((chart, margin)) =
                    Chart::wide(members, &self.atoms, q, p.radius, share)
                {
                    let rel = margin / share;
                    if rel >= p.accept_rel {
                        return (Some(chart), None);
                    }
                    if rel >= p.floor_rel
                        && fallback.as_ref().map_or(true, |(_, brel)| rel > *brel)
                    {
                        fallback = Some((chart, rel));
                    }
                }
                if m == n {
                    break;
                }
                m = (2 * m).min(n);
            }
            (None, fallback.map(|(chart, _)| chart))
        };

        if p.prefer_wide {
            let (accepted, fallback) = wide_candidates();
            accepted.or_else(simplex_candidate).or(fallback)
        } else {
            match simplex_candidate() {
                Some(chart) => Some(chart),
                None => {
                    let (accepted, fallback) = wide_candidates();
                    accepted.or(fallback)
                }
            }
        }
    }

    fn build_charts(&mut self) -> Result<(), GeomError> {
        let p = build_params(self.kind, self.dim);
        let ri_full = self.full_ranking_map()?;

        for q in self.sample_grid() {
            if self.covered(&q, p.skip_u, p.skip_factor) {
                continue;
            }
            let chart = self.cover_sample(&q, &ri_full, &p).ok_or_else(|| {
                GeomError::ChartConstruction(format!(
                    "{}: no chart with acceptable margin at {q:?}",
                    self.kind
                ))
            })?;
            self.charts.push(chart);
        }

        // Random sweeps patch anything the structured grid missed; the last
        // sweep must come back clean.
        let mut rng = ChaCha8Rng::seed_from_u64(0x6765_6f6d_5f31);
        for _round in 0..8 {
            let mut gaps = Vec::new();
            for _ in 0..p.sweep_len {
                let q = self.random_domain_point(&mut rng);
                if !self.covered(&q, p.sweep_u, p.sweep_factor) {
                    gaps.push(q);
                }
            }
            if gaps.is_empty() {
                return Ok(());
            }
            for q in gaps {
                if self.covered(&q, p.sweep_u, p.sweep_factor) {
                    continue;
                }
                let chart = self
                    .cover_sample(&q, &ri_full, &p)
                    .ok_or(GeomError::CoverageGap(q))?;
                self.charts.push(chart);
            }
        }
        Err(GeomError::ChartConstruction(format!(
            "{}: coverage sweeps did not converge",
            self.kind
        )))
    }

    /// Deterministic structured samples of the domain, ordered inside-out.
    fn sample_grid(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        if self.kind.is_transport() {
            let radii = [0.75, 0.5, 0.625, 0.875, 1.0];
            if self.dim == 2 {
                for &r in &radii {
                    for k in 0..96 {
                        let a = 2.0 * std::f64::consts::PI * k as f64 / 96.0;
                        out.push(vec![r * a.cos(), r * a.sin()]);
                    }
                }
            } else {
                for &r in &radii {
                    for v in fibonacci_sphere(350) {
                        out.push(v.iter().map(|x| r * x).collect());
                    }
                }
            }
            // every table direction at mid-radius, so pure-direction inputs
            // always sit at a chart anchor
            for atom in &self.atoms {
                out.push(atom.iter().map(|x| 0.75 * x).collect());
            }
        } else {
            let t = self.coeff_dim;
            let id = pack_identity(self.dim);
            out.push(id.clone());
            let radii = [0.125, 0.25, 0.375, 0.5];
            for &r in &radii {
                for a in 0..t {
                    for sign in [1.0, -1.0] {
                        let mut q = id.clone();
                        q[a] += sign * r;
                        out.push(q);
                    }
                }
            }
            if t == 3 {
                for &r in &radii {
                    for v in fibonacci_sphere(140) {
                        let q: Vec<f64> =
                            id.iter().zip(&v).map(|(c, x)| c + r * x).collect();
                        out.push(q);
                    }
                }
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(0x6765_6f6d_5f30);
                let mut pts: Vec<Vec<f64>> =
                    (0..3000).map(|_| ball_point(&mut rng, t, 0.5)).collect();
                pts.sort_by(|a, b| norm(a).partial_cmp(&norm(b)).unwrap());
                for v in pts {
                    out.push(id.iter().zip(&v).map(|(c, x)| c + x).collect());
                }
            }
        }
        out
    }

    pub(crate) fn random_domain_point(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        if self.kind.is_transport() {
            let d = self.dim;
            let dir = gaussian_direction(rng, d);
            // uniform in the annulus by volume
            let u: f64 = rng.gen();
            let r = (0.5f64.powi(d as i32) + u * (1.0 - 0.5f64.powi(d as i32)))
                .powf(1.0 / d as f64);
            dir.iter().map(|x| r * x).collect()
        } else {
            let t = self.coeff_dim;
            let id = pack_identity(self.dim);
            let v = ball_point(rng, t, 0.5);
            id.iter().zip(&v).map(|(c, x)| c + x).collect()
        }
    }

    /// Plain-text fixture format: a small header, then one line per
    /// direction with rational entries (xi, then each frame vector,
    /// separated by '|').
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        s.push_str("cvx-geom-set v1\n");
        s.push_str(&format!("kind {}\n", self.kind.label()));
        s.push_str(&format!("dim {}\n", self.dim));
        s.push_str(&format!("count {}\n", self.directions.len()));
        for dir in &self.directions {
            let mut groups = Vec::with_capacity(self.dim);
            let fmt = |v: &[num_rational::Rational64]| {
                v.iter()
                    .map(|r| format!("{}/{}", r.numer(), r.denom()))
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            groups.push(fmt(dir.xi()));
            for i in 0..self.dim - 1 {
                groups.push(fmt(dir.frame(i)));
            }
            s.push_str(&groups.join(" | "));
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<DirectionSet, GeomError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| GeomError::Parse("empty input".into()))?;
        if header.trim() != "cvx-geom-set v1" {
            return Err(GeomError::Parse(format!("bad header {header:?}")));
        }
        let mut kind = None;
        let mut dim = None;
        let mut count = None;
        for _ in 0..3 {
            let line = lines.next().ok_or_else(|| GeomError::Parse("truncated header".into()))?;
            let mut parts = line.split_whitespace();
            let key = parts.next().unwrap_or("");
            let val = parts.next().ok_or_else(|| GeomError::Parse(format!("bad line {line:?}")))?;
            match key {
                "kind" => kind = Some(SetKind::parse(val)?),
                "dim" => {
                    dim = Some(val.parse::<usize>().map_err(|e| {
                        GeomError::Parse(format!("bad dim {val:?}: {e}"))
                    })?)
                }
                "count" => {
                    count = Some(val.parse::<usize>().map_err(|e| {
                        GeomError::Parse(format!("bad count {val:?}: {e}"))
                    })?)
                }
                _ => return Err(GeomError::Parse(format!("unknown key {key:?}"))),
            }
        }
        let kind = kind.ok_or_else(|| GeomError::Parse("missing kind".into()))?;
        let dim = dim.ok_or_else(|| GeomError::Parse("missing dim".into()))?;
        let count = count.ok_or_else(|| GeomError::Parse("missing count".into()))?;

        let parse_rat = |tok: &str| -> Result<num_rational::Rational64, GeomError> {
            let (n, d) = tok
                .split_once('/')
                .ok_or_else(|| GeomError::Parse(format!("bad rational {tok:?}")))?;
            let n: i64 = n.parse().map_err(|e| GeomError::Parse(format!("{tok:?}: {e}")))?;
            let d: i64 = d.parse().map_err(|e| GeomError::Parse(format!("{tok:?}: {e}")))?;
            if d == 0 {
                return Err(GeomError::Parse(format!("zero denominator in {tok:?}")));
            }
            Ok(num_rational::Rational64::new(n, d))
        };

        let mut directions = Vec::with_capacity(count);
        for _ in 0..count {
            let line = lines.next().ok_or_else(|| GeomError::Parse("truncated table".into()))?;
            let groups: Vec<&str> = line.split('|').collect();
            if groups.len() != dim {
                return Err(GeomError::Parse(format!(
                    "expected {dim} groups, got {} in {line:?}",
                    groups.len()
                )));
            }
            let mut parsed: Vec<Vec<num_rational::Rational64>> = Vec::with_capacity(dim);
            for g in groups {
                let v: Result<Vec<_>, _> = g.split_whitespace().map(parse_rat).collect();
                let v = v?;
                if v.len() != dim {
                    return Err(GeomError::Parse(format!(
                        "expected {dim} entries per group in {line:?}"
                    )));
                }
                parsed.push(v);
            }
            let xi = parsed.remove(0);
            directions.push(Direction::new(xi, parsed)?);
        }
        if lines.next().is_some() {
            return Err(GeomError::Parse("trailing content after table".into()));
        }
        DirectionSet::from_directions(kind, dim, directions)
    }
}

pub fn build_direction_sets(d: usize) -> Result<[DirectionSet; 4], GeomError> {
    Ok([
        DirectionSet::build(SetKind::TransportOdd, d)?,
        DirectionSet::build(SetKind::TransportEven, d)?,
        DirectionSet::build(SetKind::EulerOdd, d)?,
        DirectionSet::build(SetKind::EulerEven, d)?,
    ])
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        // advance the rightmost index that still has room
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        if idx[i] == i + n - k {
            return out;
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Evenly spread points on the unit 2-sphere (golden-angle lattice).
fn fibonacci_sphere(n: usize) -> Vec<Vec<f64>> {
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let a = golden * i as f64;
            vec![r * a.cos(), r * a.sin(), z]
        })
        .collect()
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; u1 is kept away from zero
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

fn gaussian_direction(rng: &mut ChaCha8Rng, t: usize) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..t).map(|_| gaussian(rng)).collect();
        let n = norm(&v);
        if n > 1e-6 {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

/// Uniform-by-volume point in the t-ball of the given radius.
fn ball_point(rng: &mut ChaCha8Rng, t: usize, radius: f64) -> Vec<f64> {
    let dir = gaussian_direction(rng, t);
    let u: f64 = rng.gen();
    let r = radius * u.powf(1.0 / t as f64);
    dir.iter().map(|x| r * x).collect()
}
