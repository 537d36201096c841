//! Temporal concentrators: sharply supported time profiles that switch the
//! spatial blocks on one direction at a time.

use std::sync::Arc;

use cvx_geom::DirectionSet;
use num_rational::Rational64;

use crate::error::BlocksError;
use crate::profile::{bump, Profile, FINE_N};

/// The master profile `G` on `[0,1]` with its running integrals, shared by
/// every jet from one build call.
#[derive(Debug)]
pub struct TemporalShape {
    g: Profile,
    cum_g: Profile,
    cum_g2: Profile,
}

impl TemporalShape {
    /// A nonnegative bump supported strictly inside `(0,1)`, scaled so the
    /// square integrates to one.
    pub fn new() -> TemporalShape {
        let raw = Profile::from_fn(0.0, 1.0, FINE_N, |t| bump((t - 0.5) / 0.45));
        let norm = raw.quad(|_, v| v * v).sqrt();
        let g = raw.scale(1.0 / norm);
        let cum_g = g.cumulative();
        let cum_g2 = g.map(|v| v * v).cumulative();
        TemporalShape { g, cum_g, cum_g2 }
    }

    pub fn g(&self, t: f64) -> f64 {
        self.g.eval(t)
    }

    /// Running integral of `G`, clamped to its final value past the support.
    fn cum_g(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            self.cum_g.values()[self.cum_g.nodes() - 1]
        } else {
            self.cum_g.eval(t)
        }
    }

    /// Running integral of `G^2`, clamped the same way (it ends at 1).
    fn cum_g2(&self, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t >= 1.0 {
            self.cum_g2.values()[self.cum_g2.nodes() - 1]
        } else {
            self.cum_g2.eval(t)
        }
    }
}

impl Default for TemporalShape {
    fn default() -> Self {
        TemporalShape::new()
    }
}

/// One direction's time oscillator: `g` is the 1-periodic spike train at
/// frequency `sigma`, `big_h` its running integral, and `h` the mean-free
/// running integral of `g^2 - 1` used as a corrector phase.
#[derive(Debug, Clone)]
pub struct TemporalJet {
    shape: Arc<TemporalShape>,
    pub xi: Vec<Rational64>,
    pub t_offset: f64,
    pub sigma: u64,
    pub eta: f64,
}

impl TemporalJet {
    /// `g(t) = eta^{-1/2} G((frac(sigma t) - t_offset)/eta)`.
    pub fn g(&self, t: f64) -> f64 {
        let tau = (self.sigma as f64 * t).rem_euclid(1.0);
        self.shape.g((tau - self.t_offset) / self.eta) / self.eta.sqrt()
    }

    /// `H(t) = int_0^t g`.
    pub fn big_h(&self, t: f64) -> f64 {
        let s = self.sigma as f64 * t;
        let whole = s.floor();
        let tau = s - whole;
        let per_period = self.eta.sqrt() * self.shape.cum_g(1.0);
        let partial = self.eta.sqrt() * self.shape.cum_g((tau - self.t_offset) / self.eta);
        (whole * per_period + partial) / self.sigma as f64
    }

    /// `h(t) = int_0^{sigma t} (g_tilde^2 - 1)`, periodic with period `1/sigma`.
    pub fn h(&self, t: f64) -> f64 {
        let s = self.sigma as f64 * t;
        let tau = s - s.floor();
        self.shape.cum_g2((tau - self.t_offset) / self.eta) - tau
    }

    /// Support of `g` within one period `[0, 1/sigma)`, as a closed interval
    /// in the rescaled variable `frac(sigma t)`.
    pub fn support_in_period(&self) -> (f64, f64) {
        (self.t_offset, self.t_offset + self.eta)
    }
}

/// Lay out one oscillator per direction across the given sets, packing their
/// supports into disjoint slots of width `eta` at the start of the period.
pub fn build_temporal_jets(
    sets: &[&DirectionSet],
    sigma: u64,
    eta: f64,
) -> Result<Vec<TemporalJet>, BlocksError> {
    if sigma == 0 {
        return Err(BlocksError::InvalidParams("sigma must be positive".into()));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(BlocksError::InvalidParams(format!(
            "temporal width eta = {eta} must lie in (0,1)"
        )));
    }
    let members: usize = sets.iter().map(|s| s.len()).sum();
    if members == 0 {
        return Err(BlocksError::InvalidParams(
            "no directions to assign time slots to".into(),
        ));
    }
    if eta * members as f64 >= 0.25 {
        return Err(BlocksError::SlotsDontFit { members, eta });
    }
    let shape = Arc::new(TemporalShape::new());
    let mut jets = Vec::with_capacity(members);
    let mut slot = 0usize;
    for set in sets {
        for dir in set.directions() {
            jets.push(TemporalJet {
                shape: Arc::clone(&shape),
                xi: dir.xi().to_vec(),
                t_offset: slot as f64 * eta,
                sigma,
                eta,
            });
            slot += 1;
        }
    }
    Ok(jets)
}
