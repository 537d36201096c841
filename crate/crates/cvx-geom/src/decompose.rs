//! Decomposition of domain points into nonnegative combinations over a
//! direction set.

use rand_chacha::ChaCha8Rng;

use crate::chart::{blend, blend_into};
use crate::error::GeomError;
use crate::sets::{pack_identity, pack_sym, sym_len, DirectionSet};

/// Slack applied to the closed-domain boundary checks so that points sitting
/// exactly on the boundary (up to rounding) are accepted.
const DOMAIN_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct Decomposition {
    /// One coefficient per set direction: the combination weight for
    /// transport sets, the dyad amplitude (so its square is the weight) for
    /// identity-ball sets.  Always nonnegative.
    pub coefficients: Vec<f64>,
    /// Euclidean (vectors) or Frobenius (matrices) distance between the
    /// input and its reconstruction from the coefficients.
    pub reconstruction_error: f64,
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn reconstruction_error(set: &DirectionSet, weights: &[f64], q: &[f64]) -> f64 {
    let mut recon = vec![0.0; q.len()];
    for (w, atom) in weights.iter().zip(&set.atoms) {
        for (r, a) in recon.iter_mut().zip(atom) {
            *r += w * a;
        }
    }
    let diff: Vec<f64> = recon.iter().zip(q).map(|(r, x)| r - x).collect();
    norm(&diff)
}

/// Write `r = sum_xi c_xi xi` with smooth nonnegative coefficients, for r in
/// the annulus 1/2 <= |r| <= 1.
pub fn decompose_vector(r: &[f64], set: &DirectionSet) -> Result<Decomposition, GeomError> {
    if !set.kind().is_transport() {
        return Err(GeomError::Domain(format!(
            "vector decomposition needs a transport set, got {}",
            set.kind()
        )));
    }
    if r.len() != set.dim() {
        return Err(GeomError::Domain(format!(
            "expected a {}-vector, got length {}",
            set.dim(),
            r.len()
        )));
    }
    let n = norm(r);
    if !(0.5 - DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&n) {
        return Err(GeomError::Domain(format!(
            "|r| = {n:.6} outside the annulus [1/2, 1]"
        )));
    }
    let coefficients = blend(&set.charts, set.len(), r)?;
    let reconstruction_error = reconstruction_error(set, &coefficients, r);
    Ok(Decomposition {
        coefficients,
        reconstruction_error,
    })
}

/// Write `r = sum_xi c_xi^2 (xi (x) xi)` for a symmetric matrix r within
/// Frobenius distance 1/2 of the identity.  `r_upper` is the plain upper
/// triangle, row-major (length d(d+1)/2).
pub fn decompose_matrix(r_upper: &[f64], set: &DirectionSet) -> Result<Decomposition, GeomError> {
    if set.kind().is_transport() {
        return Err(GeomError::Domain(format!(
            "matrix decomposition needs an identity-ball set, got {}",
            set.kind()
        )));
    }
    let d = set.dim();
    if r_upper.len() != sym_len(d) {
        return Err(GeomError::Domain(format!(
            "expected {} upper-triangle entries, got {}",
            sym_len(d),
            r_upper.len()
        )));
    }
    let q = pack_sym(r_upper, d);
    let id = pack_identity(d);
    let dev: Vec<f64> = q.iter().zip(&id).map(|(a, b)| a - b).collect();
    let dist = norm(&dev);
    if dist > 0.5 + DOMAIN_SLACK {
        return Err(GeomError::Domain(format!(
            "|r - id|_F = {dist:.6} outside the ball of radius 1/2"
        )));
    }
    let weights = blend(&set.charts, set.len(), &q)?;
    let reconstruction_error = reconstruction_error(set, &weights, &q);
    let coefficients = weights.iter().map(|w| w.max(0.0).sqrt()).collect();
    Ok(Decomposition {
        coefficients,
        reconstruction_error,
    })
}

/// The coefficient functions the decompositions return (amplitudes for
/// identity-ball sets), evaluated at a packed domain point.
fn coefficient_fn(set: &DirectionSet, q: &[f64]) -> Result<Vec<f64>, GeomError> {
    let w = blend(&set.charts, set.len(), q)?;
    if set.kind().is_transport() {
        Ok(w)
    } else {
        Ok(w.iter().map(|x| x.max(0.0).sqrt()).collect())
    }
}

/// Allocation-free repeated decomposition against one set, for callers that
/// evaluate coefficients over a whole grid.  Domain checks are unchanged;
/// what is skipped relative to the one-shot functions is only the
/// reconstruction-error report.
pub struct Decomposer<'a> {
    set: &'a DirectionSet,
    out: Vec<f64>,
    buf: Vec<f64>,
    packed: Vec<f64>,
}

impl<'a> Decomposer<'a> {
    pub fn new(set: &'a DirectionSet) -> Decomposer<'a> {
        Decomposer {
            set,
            out: vec![0.0; set.len()],
            buf: Vec::new(),
            packed: vec![0.0; set.coeff_dim],
        }
    }

    pub fn set(&self) -> &'a DirectionSet {
        self.set
    }

    /// Coefficients of `r = sum c_xi xi`; the returned slice is valid until
    /// the next call.
    pub fn vector_coefficients(&mut self, r: &[f64]) -> Result<&[f64], GeomError> {
        if !self.set.kind().is_transport() || r.len() != self.set.dim() {
            return Err(GeomError::Domain(format!(
                "expected a {}-vector against a transport set",
                self.set.dim()
            )));
        }
        let n = norm(r);
        if !(0.5 - DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&n) {
            return Err(GeomError::Domain(format!(
                "|r| = {n:.6} outside the annulus [1/2, 1]"
            )));
        }
        blend_into(&self.set.charts, r, &mut self.out, &mut self.buf)?;
        Ok(&self.out)
    }

    /// Amplitudes of `r = sum c_xi^2 (xi (x) xi)` for a plain upper-triangle
    /// symmetric matrix; the returned slice is valid until the next call.
    pub fn matrix_coefficients(&mut self, r_upper: &[f64]) -> Result<&[f64], GeomError> {
        let d = self.set.dim();
        if self.set.kind().is_transport() || r_upper.len() != sym_len(d) {
            return Err(GeomError::Domain(format!(
                "expected {} upper-triangle entries against an identity-ball set",
                sym_len(d)
            )));
        }
        let mut idx = 0;
        let mut dist_sq = 0.0;
        let mut p = 0;
        for i in 0..d {
            for j in i..d {
                let w = if i == j { 1.0 } else { std::f64::consts::SQRT_2 };
                let v = w * r_upper[idx];
                self.packed[p] = v;
                let dev = if i == j { v - 1.0 } else { v };
                dist_sq += dev * dev;
                idx += 1;
                p += 1;
            }
        }
        if dist_sq.sqrt() > 0.5 + DOMAIN_SLACK {
            return Err(GeomError::Domain(format!(
                "|r - id|_F = {:.6} outside the ball of radius 1/2",
                dist_sq.sqrt()
            )));
        }
        blend_into(&self.set.charts, &self.packed, &mut self.out, &mut self.buf)?;
        for v in self.out.iter_mut() {
            *v = v.max(0.0).sqrt();
        }
        Ok(&self.out)
    }
}

/// Largest centered finite-difference gradient of any coefficient function
/// over a deterministic interior lattice; a crude smoothness certificate
/// used by amplitude-estimate probes.
pub fn smoothness_constant(set: &DirectionSet) -> Result<f64, GeomError> {
    use rand::SeedableRng;
    let h = 1e-4;
    let lattice: Vec<Vec<f64>> = if set.kind().is_transport() {
        let radii = [0.52, 0.635, 0.75, 0.865, 0.98];
        let mut pts = Vec::new();
        if set.dim() == 2 {
            for &r in &radii {
                for k in 0..48 {
                    let a = 2.0 * std::f64::consts::PI * k as f64 / 48.0;
                    pts.push(vec![r * a.cos(), r * a.sin()]);
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6765_6f6d_5f32);
            for _ in 0..240 {
                pts.push(set.random_domain_point(&mut rng));
            }
            // keep the finite-difference stencil inside the annulus
            pts.retain(|q| {
                let n = norm(q);
                (0.52..=0.98).contains(&n)
            });
        }
        pts
    } else {
        let id = pack_identity(set.dim());
        let mut rng = ChaCha8Rng::seed_from_u64(0x6765_6f6d_5f33);
        let mut pts = vec![id.clone()];
        for _ in 0..240 {
            let q = set.random_domain_point(&mut rng);
            let dev: Vec<f64> = q.iter().zip(&id).map(|(a, b)| a - b).collect();
            if norm(&dev) <= 0.47 {
                pts.push(q);
            }
        }
        pts
    };

    let mut worst: f64 = 0.0;
    for q in &lattice {
        let t = q.len();
        let n = set.len();
        let mut grad_sq = vec![0.0; n];
        for a in 0..t {
            let mut qp = q.clone();
            let mut qm = q.clone();
            qp[a] += h;
            qm[a] -= h;
            let cp = coefficient_fn(set, &qp)?;
            let cm = coefficient_fn(set, &qm)?;
            for i in 0..n {
                let g = (cp[i] - cm[i]) / (2.0 * h);
                grad_sq[i] += g * g;
            }
        }
        for g in grad_sq {
            worst = worst.max(g.sqrt());
        }
    }
    Ok(worst)
}
