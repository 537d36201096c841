use crate::{FieldError, ScalarField, SpaceTimeField, TimeSlice, TorusGrid, VectorField};

/// Which norm was requested.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormTag {
    /// Spatial L^p (p may be infinite).
    Lp(f64),
    /// L^r in time of spatial L^p.
    LrLp { r: f64, p: f64 },
    /// C^N: sum over orders <= N of the largest sup-norm partial derivative.
    CN(usize),
    /// Hoelder seminorm of exponent beta in (0,1), by sampled difference
    /// quotients.
    Hoelder(f64),
    /// L^1 in time of W^{1,s}.
    L1W1s(f64),
}

/// Result of a norm computation, carrying enough context to reproduce it.
#[derive(Clone, Copy, Debug)]
pub struct NormReport {
    pub tag: NormTag,
    pub value: f64,
    /// Spatial grid resolution the quadrature ran on.
    pub grid_n: usize,
    /// Number of time slices, for space-time norms.
    pub n_t: Option<usize>,
    /// Number of point pairs sampled, for Hoelder seminorms.
    pub pairs: Option<usize>,
}

/// Deterministic point-pair sample for Hoelder difference quotients:
/// `HOELDER_PAIRS/2` pseudo-random index pairs from a fixed-seed SplitMix64
/// stream, plus the same count of nearest-neighbor pairs (a point and its
/// +1 neighbor along a cycling axis). Fixed scheme, so repeated runs agree.
pub const HOELDER_PAIRS: usize = 4096;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

fn random_index(state: &mut u64, grid: TorusGrid) -> Vec<usize> {
    (0..grid.dim())
        .map(|_| (splitmix64(state) % grid.n() as u64) as usize)
        .collect()
}

/// The sampled pairs for a grid, as (a, b) index tuples.
pub fn hoelder_pairs(grid: TorusGrid) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut state: u64 = 0x5C3A_9E1F_0000_0001;
    let half = HOELDER_PAIRS / 2;
    let mut pairs = Vec::with_capacity(HOELDER_PAIRS);
    for _ in 0..half {
        let a = random_index(&mut state, grid);
        let b = random_index(&mut state, grid);
        pairs.push((a, b));
    }
    for i in 0..half {
        let a = random_index(&mut state, grid);
        let axis = i % grid.dim();
        let mut b = a.clone();
        b[axis] = (b[axis] + 1) % grid.n();
        pairs.push((a, b));
    }
    pairs
}

fn hoelder_seminorm(
    grid: TorusGrid,
    beta: f64,
    value_at: impl Fn(&[usize]) -> Vec<f64>,
) -> Result<(f64, usize), FieldError> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(FieldError::InvalidNorm(format!(
            "Hoelder exponent must lie in (0,1), got {beta}"
        )));
    }
    let pairs = hoelder_pairs(grid);
    let count = pairs.len();
    let mut best = 0.0f64;
    for (a, b) in &pairs {
        let xa: Vec<f64> = a.iter().map(|&j| j as f64 / grid.n() as f64).collect();
        let xb: Vec<f64> = b.iter().map(|&j| j as f64 / grid.n() as f64).collect();
        let dist = grid.torus_distance(&xa, &xb);
        if dist < 1e-15 {
            continue;
        }
        let va = value_at(a);
        let vb = value_at(b);
        let diff: f64 = va
            .iter()
            .zip(&vb)
            .map(|(p, q)| (p - q) * (p - q))
            .sum::<f64>()
            .sqrt();
        best = best.max(diff / dist.powf(beta));
    }
    Ok((best, count))
}

impl ScalarField {
    pub fn norm(&self, tag: NormTag) -> Result<NormReport, FieldError> {
        let value = match tag {
            NormTag::Lp(p) => {
                if !(p >= 1.0) {
                    return Err(FieldError::InvalidNorm(format!("Lp needs p >= 1, got {p}")));
                }
                self.lp(p)
            }
            NormTag::CN(k) => self.cn(k),
            NormTag::Hoelder(beta) => {
                let (v, pairs) = hoelder_seminorm(self.grid(), beta, |idx| {
                    vec![self.grid_value(idx)]
                })?;
                return Ok(NormReport {
                    tag,
                    value: v,
                    grid_n: self.grid().n(),
                    n_t: None,
                    pairs: Some(pairs),
                });
            }
            NormTag::LrLp { .. } | NormTag::L1W1s(_) => {
                return Err(FieldError::InvalidNorm(
                    "time-axis norm requested on a static field".into(),
                ))
            }
        };
        Ok(NormReport {
            tag,
            value,
            grid_n: self.grid().n(),
            n_t: None,
            pairs: None,
        })
    }
}

impl VectorField {
    pub fn norm(&self, tag: NormTag) -> Result<NormReport, FieldError> {
        let value = match tag {
            NormTag::Lp(p) => {
                if !(p >= 1.0) {
                    return Err(FieldError::InvalidNorm(format!("Lp needs p >= 1, got {p}")));
                }
                self.lp(p)
            }
            NormTag::CN(k) => self.cn(k),
            NormTag::Hoelder(beta) => {
                let (v, pairs) =
                    hoelder_seminorm(self.grid(), beta, |idx| self.value_at(idx))?;
                return Ok(NormReport {
                    tag,
                    value: v,
                    grid_n: self.grid().n(),
                    n_t: None,
                    pairs: Some(pairs),
                });
            }
            NormTag::LrLp { .. } | NormTag::L1W1s(_) => {
                return Err(FieldError::InvalidNorm(
                    "time-axis norm requested on a static field".into(),
                ))
            }
        };
        Ok(NormReport {
            tag,
            value,
            grid_n: self.grid().n(),
            n_t: None,
            pairs: None,
        })
    }
}

impl<T: TimeSlice> SpaceTimeField<T> {
    pub fn norm(&self, tag: NormTag) -> Result<NormReport, FieldError> {
        let value = match tag {
            NormTag::LrLp { r, p } => {
                if !(p >= 1.0) || (!r.is_infinite() && !(r >= 1.0)) {
                    return Err(FieldError::InvalidNorm(format!(
                        "LrLp needs r, p >= 1, got r={r}, p={p}"
                    )));
                }
                self.lr_lp(r, p)
            }
            NormTag::L1W1s(s) => {
                if !(s >= 1.0) || s.is_infinite() {
                    return Err(FieldError::InvalidNorm(format!(
                        "L1W1s needs finite s >= 1, got {s}"
                    )));
                }
                self.l1_w1s(s)
            }
            NormTag::Lp(p) => self.lr_lp(f64::INFINITY, p),
            NormTag::CN(_) | NormTag::Hoelder(_) => {
                return Err(FieldError::InvalidNorm(
                    "pointwise-derivative norm on a space-time field: take it per slice".into(),
                ))
            }
        };
        Ok(NormReport {
            tag,
            value,
            grid_n: self.grid().n(),
            n_t: Some(self.n_t()),
            pairs: None,
        })
    }
}
