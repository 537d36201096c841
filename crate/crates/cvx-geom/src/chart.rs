//! Affine coordinate charts blended by a smooth partition of unity.
//!
//! A chart is a subset of the set's directions together with an affine map
//! `b(q) = M q + c` chosen so that `D b(q) = q` exactly, where the columns of
//! `D` are the chart members' atoms (the direction vectors themselves, or
//! packed dyads).  Simplicial charts use the exact inverse of a square `D`.
//! Wide charts use the minimum-norm right-inverse for the linear part and an
//! anchor solution found by alternating projections between the affine
//! solution set and the positive box, which pushes the smallest anchor
//! coefficient as high as the member geometry allows.  Because every chart
//! reproduces `q` exactly, any convex blend of charts does too, so the
//! reconstruction identity holds to rounding error wherever at least one
//! chart is active.
//!
//! Positivity comes from the weights, not the maps: a chart's weight carries
//! a factor that vanishes smoothly as any coefficient drops to the chart's
//! floor (a fixed fraction of its anchor margin), so an active chart always
//! has all coefficients strictly positive.

use crate::error::GeomError;
use crate::linalg::{invert, matvec, right_inverse};

const PIVOT_TOL: f64 = 1e-10;
/// Gate floor as a fraction of the anchor margin.
const FLOOR_FRACTION: f64 = 0.15;

/// Smooth gate: 0 for s <= s0, approaches 1 for s >> s0.
fn gate(s: f64, s0: f64) -> f64 {
    if s <= s0 {
        0.0
    } else {
        (-s0 / (s - s0)).exp()
    }
}

/// Smooth localizer in the squared relative distance u2 = |q-a|^2/r^2;
/// equals 1 at the anchor and vanishes at u2 = 1.
fn localizer(u2: f64) -> f64 {
    if u2 >= 1.0 {
        0.0
    } else {
        (-u2 / (1.0 - u2)).exp()
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Chart {
    pub(crate) members: Vec<usize>,
    /// m x t row-major affine map, b(q) = map q + offset.
    map: Vec<f64>,
    offset: Vec<f64>,
    anchor: Vec<f64>,
    radius: f64,
    /// Smallest coefficient at the anchor.
    pub(crate) margin: f64,
    /// Gate floor; coefficients fade out as they approach it.
    s0: f64,
}

impl Chart {
    fn assemble(
        members: Vec<usize>,
        map: Vec<f64>,
        offset: Vec<f64>,
        anchor: &[f64],
        radius: f64,
        margin: f64,
    ) -> Chart {
        Chart {
            members,
            map,
            offset,
            anchor: anchor.to_vec(),
            radius,
            margin,
            s0: FLOOR_FRACTION * margin,
        }
    }

    /// Exact-inverse chart on exactly t members; returns the chart and its
    /// anchor margin, or None when the member atoms are near degenerate.
    pub(crate) fn simplex(
        members: Vec<usize>,
        atoms: &[Vec<f64>],
        anchor: &[f64],
        radius: f64,
    ) -> Option<(Chart, f64)> {
        let t = anchor.len();
        debug_assert_eq!(members.len(), t);
        let mut d = vec![0.0; t * t];
        for (col, &mi) in members.iter().enumerate() {
            for row in 0..t {
                d[row * t + col] = atoms[mi][row];
            }
        }
        let map = invert(&d, t, PIVOT_TOL)?;
        let base = matvec(&map, t, t, anchor);
        let margin = base.iter().cloned().fold(f64::INFINITY, f64::min);
        if margin <= 0.0 {
            return None;
        }
        Some((
            Chart::assemble(members, map, vec![0.0; t], anchor, radius, margin),
            margin,
        ))
    }

    /// Right-inverse chart on m >= t members.  The anchor coefficients are
    /// improved by alternating projections between `{b : D b = anchor}` and
    /// `{b >= tau}`, bisecting tau up to `tau_hi`.
    pub(crate) fn wide(
        members: Vec<usize>,
        atoms: &[Vec<f64>],
        anchor: &[f64],
        radius: f64,
        tau_hi: f64,
    ) -> Option<(Chart, f64)> {
        let t = anchor.len();
        let m = members.len();
        debug_assert!(m >= t);
        let mut d = vec![0.0; t * m];
        for (col, &mi) in members.iter().enumerate() {
            for row in 0..t {
                d[row * m + col] = atoms[mi][row];
            }
        }
        let ri = right_inverse(&d, t, m, PIVOT_TOL)?;

        let project = |x: &[f64]| -> Vec<f64> {
            // x - RI (D x - anchor): nearest point with D b = anchor
            let dx = matvec(&d, t, m, x);
            let resid: Vec<f64> = dx.iter().zip(anchor).map(|(a, b)| a - b).collect();
            let corr = matvec(&ri, m, t, &resid);
            x.iter().zip(&corr).map(|(a, c)| a - c).collect()
        };
        let run_pocs = |start: &[f64], tau: f64| -> Vec<f64> {
            let mut x = start.to_vec();
            for _ in 0..80 {
                let clamped: Vec<f64> = x.iter().map(|&v| v.max(tau)).collect();
                x = project(&clamped);
                let lowest = x.iter().cloned().fold(f64::INFINITY, f64::min);
                if lowest >= tau - 1e-12 {
                    break;
                }
            }
            x
        };

        let min_norm = matvec(&ri, m, t, anchor);
        let mut best = min_norm.clone();
        let mut best_margin = best.iter().cloned().fold(f64::INFINITY, f64::min);
        let mut lo = best_margin.max(0.0);
        let mut hi = tau_hi;
        for _ in 0..7 {
            if hi - lo < 1e-4 {
                break;
            }
            let tau = 0.5 * (lo + hi);
            let x = run_pocs(&best, tau);
            let margin = x.iter().cloned().fold(f64::INFINITY, f64::min);
            if margin >= 0.98 * tau {
                lo = tau;
                best = x;
                best_margin = margin;
            } else {
                hi = tau;
                if margin > best_margin {
                    best = x;
                    best_margin = margin;
                }
            }
        }
        if best_margin <= 0.0 {
            return None;
        }
        let ri_anchor = matvec(&ri, m, t, anchor);
        let offset: Vec<f64> = best.iter().zip(&ri_anchor).map(|(b, r)| b - r).collect();
        Some((
            Chart::assemble(members, ri, offset, anchor, radius, best_margin),
            best_margin,
        ))
    }

    fn rel_dist_sq(&self, q: &[f64]) -> f64 {
        let mut s = 0.0;
        for (a, b) in self.anchor.iter().zip(q) {
            s += (a - b) * (a - b);
        }
        s / (self.radius * self.radius)
    }

    fn coefficients_into(&self, q: &[f64], buf: &mut Vec<f64>) {
        let m = self.members.len();
        let t = q.len();
        buf.clear();
        buf.extend_from_slice(&self.offset);
        for i in 0..m {
            let row = &self.map[i * t..(i + 1) * t];
            let mut acc = buf[i];
            for k in 0..t {
                acc += row[k] * q[k];
            }
            buf[i] = acc;
        }
    }

    pub(crate) fn coefficients(&self, q: &[f64]) -> Vec<f64> {
        let mut b = Vec::new();
        self.coefficients_into(q, &mut b);
        b
    }

    /// Weight at q with coefficients left in `buf`, or None where the chart
    /// is inactive.  `buf` is scratch space reused across calls.  The floor
    /// test runs before any exponential so inactive charts cost only the
    /// affine map.
    pub(crate) fn eval_into(&self, q: &[f64], buf: &mut Vec<f64>) -> Option<f64> {
        let u2 = self.rel_dist_sq(q);
        if u2 >= 1.0 {
            return None;
        }
        self.coefficients_into(q, buf);
        let mut lowest = f64::INFINITY;
        for &bi in buf.iter() {
            if bi < lowest {
                lowest = bi;
            }
        }
        if lowest <= self.s0 {
            return None;
        }
        let mut w = localizer(u2);
        for &bi in buf.iter() {
            w *= gate(bi, self.s0);
        }
        Some(w)
    }

    /// True when q is well inside this chart's reliable region: within
    /// `u_max` of the anchor and with every coefficient at least
    /// `factor * margin` (factor should stay above the floor fraction).
    pub(crate) fn covers(&self, q: &[f64], u_max: f64, factor: f64) -> bool {
        if self.rel_dist_sq(q) > u_max * u_max {
            return false;
        }
        let floor = factor * self.margin;
        self.coefficients(q).into_iter().all(|b| b >= floor)
    }
}

/// Blend the active charts at q into per-direction coefficients, writing
/// them to `out` (sized to the direction count).  `buf` is scratch space.
pub(crate) fn blend_into(
    charts: &[Chart],
    q: &[f64],
    out: &mut [f64],
    buf: &mut Vec<f64>,
) -> Result<(), GeomError> {
    out.fill(0.0);
    let mut wsum = 0.0;
    for chart in charts {
        if let Some(w) = chart.eval_into(q, buf) {
            wsum += w;
            for (i, &mi) in chart.members.iter().enumerate() {
                out[mi] += w * buf[i];
            }
        }
    }
    if wsum <= 0.0 {
        return Err(GeomError::CoverageGap(q.to_vec()));
    }
    for v in out.iter_mut() {
        *v /= wsum;
    }
    Ok(())
}

/// Blend the active charts at q into per-direction coefficients.
pub(crate) fn blend(charts: &[Chart], n_directions: usize, q: &[f64]) -> Result<Vec<f64>, GeomError> {
    let mut out = vec![0.0; n_directions];
    let mut buf = Vec::new();
    blend_into(charts, q, &mut out, &mut buf)?;
    Ok(out)
}
