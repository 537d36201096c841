//! Travelling concentrated jets: thin tube-supported velocity fields moving
//! along rational directions, with the mass and corrector fields that make
//! their transport and momentum identities exact.
//!
//! Two families share the machinery. The transport family pairs a velocity
//! `W = xi psi phi` with a mass density `Theta = psi' phi'` whose profiles sit
//! inside the plateau of `psi`/`phi`, so products like `psi psi' = psi'`
//! hold to the bit. The dissipative family squares its profiles instead and
//! normalizes in L^2. Both carry a skew matrix potential `V` built from the
//! perpendicular potential `Phi`; with `phi = -lap Phi` the row divergence
//! satisfies `div V = -W - corrector`, the corrector being
//! `(n lambda)^{-2} grad Phi (xi . grad psi)`.

use std::sync::{Arc, OnceLock};

use cvx_fields::{MatrixField, ScalarField, TorusGrid, VectorField};
use cvx_geom::{build_direction_sets, Direction};
use num_integer::Integer;
use num_rational::Rational64;

use crate::error::BlocksError;
use crate::params::JetParams;
use crate::profile::{
    bump, bump_d1, bump_d2, plateau, plateau_d1, radial_potential, radial_volume_integral,
    Profile, FINE_N,
};

/// Radius where the axial and perpendicular cutoffs are identically 1.
pub const CORE: f64 = 1.0 / 3.0;
/// Support radius of the mass profiles, strictly inside the plateau core.
pub const MASS_RADIUS: f64 = 0.32;
const PSI_OUTER: f64 = 0.6;
const LOBE_CENTER: f64 = 0.8;
const LOBE_RADIUS: f64 = 0.19;
const PHI0_OUTER: f64 = 0.9;
const GRID_PAD: f64 = 1.05;

fn lobe(x: f64) -> f64 {
    bump((x.abs() - LOBE_CENTER) / LOBE_RADIUS)
}

fn lobe_d1(x: f64) -> f64 {
    bump_d1((x.abs() - LOBE_CENTER) / LOBE_RADIUS) * x.signum() / LOBE_RADIUS
}

/// Wrap to the centered unit cell `[-1/2, 1/2)`.
fn wrap(x: f64) -> f64 {
    x - x.round()
}

/// Profile bundle for the transport family in `m = d - 1` perpendicular
/// dimensions. Everything is parameter-free; jets scale these shapes.
#[derive(Debug)]
pub struct TransportShapes {
    m: usize,
    lobe_coeff: f64,
    psi_mass_coeff: f64,
    phi_mass_coeff: f64,
    psi_prof: Profile,
    psi_mass_prof: Profile,
    phi_prof: Profile,
    phi_mass_prof: Profile,
    big_phi_prof: Profile,
    big_phi_d1_prof: Profile,
}

impl TransportShapes {
    fn build(m: usize) -> TransportShapes {
        assert!(m == 1 || m == 2);
        let n = FINE_N;
        // plateau cutoff whose potential supplies the perpendicular shape
        let phi0 = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |x| plateau(x, CORE, PHI0_OUTER));
        let phi0_d1 = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |x| plateau_d1(x, CORE, PHI0_OUTER));
        let phi0_dd = phi0_d1.derivative();
        // the second derivative is known to vanish off the ramp annulus
        let phi0_dd = phi0_dd.zip(&phi0, |x, v, _| {
            if x.abs() <= CORE || x.abs() >= PHI0_OUTER {
                0.0
            } else {
                v
            }
        });
        let (big_phi0, big_phi0_d1) = radial_potential(&phi0, m);

        // phi = -lap(Phi0 phi0)
        //     = phi0^2 - 2 Phi0' phi0' - Phi0 (phi0'' + (m-1) phi0'/r)
        let mut phi_vals = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let r = -GRID_PAD + 2.0 * GRID_PAD * i as f64 / n as f64;
            let p0 = phi0.values()[i];
            let p1 = phi0_d1.values()[i];
            let p2 = phi0_dd.values()[i];
            let q0 = big_phi0.values()[i];
            let q1 = big_phi0_d1.values()[i];
            let radial = if m == 2 && p1 != 0.0 { q0 * p1 / r } else { 0.0 };
            phi_vals.push(p0 * p0 - 2.0 * q1 * p1 - q0 * p2 - radial);
        }
        let phi_prof = Profile::from_values(-GRID_PAD, 2.0 * GRID_PAD / n as f64, phi_vals);

        let big_phi_prof = big_phi0.zip(&phi0, |_, a, b| a * b);
        let big_phi_d1_prof = big_phi0_d1.zip(&phi0, |_, a, b| a * b).zip(
            &big_phi0.zip(&phi0_d1, |_, a, b| a * b),
            |_, a, b| a + b,
        );

        let base = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |x| plateau(x, CORE, PSI_OUTER));
        let lobe_prof = Profile::from_fn(-GRID_PAD, GRID_PAD, n, lobe);
        let lobe_coeff = base.integral() / lobe_prof.integral();
        let psi_prof = base.zip(&lobe_prof, |_, a, b| a - lobe_coeff * b);

        let mass_raw = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |x| bump(x / MASS_RADIUS));
        let psi_mass_coeff = 1.0 / mass_raw.integral();
        let phi_mass_coeff = 1.0 / radial_volume_integral(&mass_raw, m, |v| v);
        let psi_mass_prof = mass_raw.scale(psi_mass_coeff);
        let phi_mass_prof = mass_raw.scale(phi_mass_coeff);

        TransportShapes {
            m,
            lobe_coeff,
            psi_mass_coeff,
            phi_mass_coeff,
            psi_prof,
            psi_mass_prof,
            phi_prof,
            phi_mass_prof,
            big_phi_prof,
            big_phi_d1_prof,
        }
    }

    /// Axial cutoff: exactly 1 on `|x| <= CORE`, mean-zero over the line.
    pub fn psi(&self, x: f64) -> f64 {
        plateau(x, CORE, PSI_OUTER) - self.lobe_coeff * lobe(x)
    }

    pub fn psi_d1(&self, x: f64) -> f64 {
        plateau_d1(x, CORE, PSI_OUTER) - self.lobe_coeff * lobe_d1(x)
    }

    /// Axial mass profile: nonnegative, unit integral, supported inside the
    /// plateau core so that `psi * psi_mass == psi_mass` exactly.
    pub fn psi_mass(&self, x: f64) -> f64 {
        self.psi_mass_coeff * bump(x / MASS_RADIUS)
    }

    pub fn psi_mass_d1(&self, x: f64) -> f64 {
        self.psi_mass_coeff * bump_d1(x / MASS_RADIUS) / MASS_RADIUS
    }

    /// Perpendicular cutoff: exactly 1 on the core ball, mean-zero over R^m.
    pub fn phi(&self, r: f64) -> f64 {
        if r.abs() <= CORE {
            1.0
        } else {
            self.phi_prof.eval(r)
        }
    }

    /// Perpendicular mass profile: nonnegative with unit volume integral.
    pub fn phi_mass(&self, r: f64) -> f64 {
        self.phi_mass_coeff * bump(r / MASS_RADIUS)
    }

    pub fn phi_mass_d1(&self, r: f64) -> f64 {
        self.phi_mass_coeff * bump_d1(r / MASS_RADIUS) / MASS_RADIUS
    }

    pub fn big_phi(&self, r: f64) -> f64 {
        self.big_phi_prof.eval(r)
    }

    pub fn big_phi_d1(&self, r: f64) -> f64 {
        self.big_phi_d1_prof.eval(r)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn psi_profile(&self) -> &Profile {
        &self.psi_prof
    }

    pub fn psi_mass_profile(&self) -> &Profile {
        &self.psi_mass_prof
    }

    pub fn phi_profile(&self) -> &Profile {
        &self.phi_prof
    }

    pub fn phi_mass_profile(&self) -> &Profile {
        &self.phi_mass_prof
    }

    pub fn big_phi_profile(&self) -> &Profile {
        &self.big_phi_prof
    }

    pub fn big_phi_d1_profile(&self) -> &Profile {
        &self.big_phi_d1_prof
    }
}

/// Profile bundle for the dissipative family: squared-profile mass, so the
/// shapes are normalized in L^2 instead of carrying plateau identities.
#[derive(Debug)]
pub struct NsShapes {
    m: usize,
    psi_coeff: f64,
    big_coeff: f64,
    psi_prof: Profile,
    phi_prof: Profile,
    big_phi_prof: Profile,
    big_phi_d1_prof: Profile,
}

impl NsShapes {
    fn build(m: usize) -> NsShapes {
        assert!(m == 1 || m == 2);
        let n = FINE_N;
        // odd axial shape, L^2-normalized
        let psi_raw = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |x| x * bump(x));
        let psi_coeff = 1.0 / psi_raw.quad(|_, v| v * v).sqrt();
        let psi_prof = psi_raw.scale(psi_coeff);

        // radial potential is a plain bump; its (negated) laplacian is the
        // perpendicular shape, L^2-normalized over R^m
        let lap_raw = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |r| -ns_phi_raw(r, m));
        let big_coeff = 1.0 / radial_volume_integral(&lap_raw, m, |v| v * v).sqrt();
        let phi_prof = lap_raw.scale(-big_coeff);
        let big_phi_prof = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |r| big_coeff * bump(r));
        let big_phi_d1_prof = Profile::from_fn(-GRID_PAD, GRID_PAD, n, |r| big_coeff * bump_d1(r));

        NsShapes {
            m,
            psi_coeff,
            big_coeff,
            psi_prof,
            phi_prof,
            big_phi_prof,
            big_phi_d1_prof,
        }
    }

    /// Odd axial shape `c x exp(-1/(1-x^2))`: mean-zero by parity, `int
    /// psi^2 = 1`.
    pub fn psi(&self, x: f64) -> f64 {
        self.psi_coeff * x * bump(x)
    }

    pub fn psi_d1(&self, x: f64) -> f64 {
        self.psi_coeff * (bump(x) + x * bump_d1(x))
    }

    /// Perpendicular shape `-lap Phi` with `int phi^2 dV = 1` over R^m.
    pub fn phi(&self, r: f64) -> f64 {
        self.big_coeff * ns_phi_raw(r, self.m)
    }

    pub fn big_phi(&self, r: f64) -> f64 {
        self.big_coeff * bump(r)
    }

    pub fn big_phi_d1(&self, r: f64) -> f64 {
        self.big_coeff * bump_d1(r)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn psi_profile(&self) -> &Profile {
        &self.psi_prof
    }

    pub fn phi_profile(&self) -> &Profile {
        &self.phi_prof
    }

    pub fn big_phi_profile(&self) -> &Profile {
        &self.big_phi_prof
    }

    pub fn big_phi_d1_profile(&self) -> &Profile {
        &self.big_phi_d1_prof
    }
}

/// `-lap bump` in radial coordinates, before normalization.
fn ns_phi_raw(r: f64, m: usize) -> f64 {
    let radial = if r.abs() < 1e-6 {
        bump_d2(r)
    } else {
        bump_d1(r) / r
    };
    -(bump_d2(r) + (m as f64 - 1.0) * radial)
}

static TRANSPORT_SHAPES_M1: OnceLock<Arc<TransportShapes>> = OnceLock::new();
static TRANSPORT_SHAPES_M2: OnceLock<Arc<TransportShapes>> = OnceLock::new();
static NS_SHAPES_M1: OnceLock<Arc<NsShapes>> = OnceLock::new();
static NS_SHAPES_M2: OnceLock<Arc<NsShapes>> = OnceLock::new();

/// Shared transport shape bundle for `m` perpendicular dimensions.
pub fn transport_shapes(m: usize) -> Result<Arc<TransportShapes>, BlocksError> {
    let cell = match m {
        1 => &TRANSPORT_SHAPES_M1,
        2 => &TRANSPORT_SHAPES_M2,
        _ => return Err(BlocksError::InvalidDimension(m + 1)),
    };
    Ok(Arc::clone(cell.get_or_init(|| {
        Arc::new(TransportShapes::build(m))
    })))
}

/// Shared dissipative shape bundle for `m` perpendicular dimensions.
pub fn ns_shapes(m: usize) -> Result<Arc<NsShapes>, BlocksError> {
    let cell = match m {
        1 => &NS_SHAPES_M1,
        2 => &NS_SHAPES_M2,
        _ => return Err(BlocksError::InvalidDimension(m + 1)),
    };
    Ok(Arc::clone(cell.get_or_init(|| Arc::new(NsShapes::build(m)))))
}

static TRANSPORT_N_STAR_D2: OnceLock<i64> = OnceLock::new();
static TRANSPORT_N_STAR_D3: OnceLock<i64> = OnceLock::new();
static NS_N_STAR_D2: OnceLock<i64> = OnceLock::new();
static NS_N_STAR_D3: OnceLock<i64> = OnceLock::new();

/// Smallest frequency multiplier clearing every denominator across both
/// transport direction families in dimension `d`.
pub fn transport_n_star(d: usize) -> Result<i64, BlocksError> {
    let cell = match d {
        2 => &TRANSPORT_N_STAR_D2,
        3 => &TRANSPORT_N_STAR_D3,
        _ => return Err(BlocksError::InvalidDimension(d)),
    };
    if let Some(&v) = cell.get() {
        return Ok(v);
    }
    let sets = build_direction_sets(d)?;
    let mut n = 1i64;
    for set in sets.iter().filter(|s| s.kind().is_transport()) {
        for dir in set.directions() {
            n = n.lcm(&dir.n_star());
        }
    }
    let _ = cell.set(n);
    Ok(n)
}

/// Same for the first tensor-decomposition family, which the dissipative
/// jets draw their directions from.
pub fn ns_n_star(d: usize) -> Result<i64, BlocksError> {
    let cell = match d {
        2 => &NS_N_STAR_D2,
        3 => &NS_N_STAR_D3,
        _ => return Err(BlocksError::InvalidDimension(d)),
    };
    if let Some(&v) = cell.get() {
        return Ok(v);
    }
    let sets = build_direction_sets(d)?;
    let set = &sets[2]; // EulerOdd
    let mut n = 1i64;
    for dir in set.directions() {
        n = n.lcm(&dir.n_star());
    }
    let _ = cell.set(n);
    Ok(n)
}

fn check_direction_frequency(xi: &Direction, n_star: i64) -> Result<(), BlocksError> {
    if n_star < 1 {
        return Err(BlocksError::InvalidParams(format!(
            "frequency multiplier {n_star} must be a natural number"
        )));
    }
    let scale = Rational64::from_integer(n_star);
    let mut all = xi.xi().to_vec();
    for i in 0..xi.dim() - 1 {
        all.extend_from_slice(xi.frame(i));
    }
    if all.iter().any(|q| !(scale * q).is_integer()) {
        return Err(BlocksError::InvalidParams(format!(
            "multiplier {n_star} does not clear the denominators of the direction"
        )));
    }
    Ok(())
}

/// A transport jet: velocity `W`, mass `Theta`, and matrix potential `V`
/// travelling with speed `mu` along the rational direction `xi`.
#[derive(Debug, Clone)]
pub struct TransportJet {
    pub xi: Direction,
    pub params: JetParams,
    pub n_star: i64,
    shapes: Arc<TransportShapes>,
}

/// A dissipative jet: velocity `W` with L^2-normalized profiles and its
/// matrix potential, travelling with speed `mu_bar`.
#[derive(Debug, Clone)]
pub struct NsJet {
    pub xi: Direction,
    pub params: JetParams,
    pub n_star: i64,
    shapes: Arc<NsShapes>,
}

pub fn build_transport_jet(
    xi: &Direction,
    params: &JetParams,
    n_star: i64,
) -> Result<TransportJet, BlocksError> {
    params.validate()?;
    check_direction_frequency(xi, n_star)?;
    let shapes = transport_shapes(xi.dim() - 1)?;
    Ok(TransportJet {
        xi: xi.clone(),
        params: params.clone(),
        n_star,
        shapes,
    })
}

pub fn build_ns_jet(xi: &Direction, params: &JetParams, n_star: i64) -> Result<NsJet, BlocksError> {
    params.validate()?;
    check_direction_frequency(xi, n_star)?;
    let shapes = ns_shapes(xi.dim() - 1)?;
    Ok(NsJet {
        xi: xi.clone(),
        params: params.clone(),
        n_star,
        shapes,
    })
}

/// Geometry shared by both jet kinds: wrapped axial coordinate and wrapped
/// perpendicular offsets in the direction's frame.
struct JetFrame {
    z: f64,
    u: Vec<f64>,
}

fn jet_frame(xi: &Direction, freq: f64, speed: f64, t: f64, x: &[f64]) -> JetFrame {
    let d = xi.dim();
    let xi_f = xi.xi_f64();
    let mut axial = 0.0;
    for c in 0..d {
        axial += x[c] * xi_f[c];
    }
    let z = wrap(freq * (axial - speed * t));
    let mut u = Vec::with_capacity(d - 1);
    for i in 0..d - 1 {
        let a = xi.frame_f64(i);
        let mut dot = 0.0;
        for c in 0..d {
            dot += x[c] * a[c];
        }
        u.push(wrap(freq * dot));
    }
    JetFrame { z, u }
}

impl JetFrame {
    fn rho(&self) -> f64 {
        self.u.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Unit radial vector of the perpendicular offset in ambient
    /// coordinates; zero on the axis.
    fn radial_dir(&self, xi: &Direction) -> Vec<f64> {
        let d = xi.dim();
        let rho = self.rho();
        let mut e = vec![0.0; d];
        if rho == 0.0 {
            return e;
        }
        for i in 0..d - 1 {
            let a = xi.frame_f64(i);
            let w = self.u[i] / rho;
            for c in 0..d {
                e[c] += w * a[c];
            }
        }
        e
    }
}

impl TransportJet {
    /// Integer spatial frequency `n_star * lambda * r_perp`.
    pub fn freq(&self) -> f64 {
        self.n_star as f64 * self.params.lambda as f64 * self.params.r_perp
    }

    fn frame_at(&self, t: f64, x: &[f64]) -> JetFrame {
        jet_frame(&self.xi, self.freq(), self.params.mu, t, x)
    }

    fn perp_scale(&self) -> f64 {
        self.params.r_perp.powf(-0.5 * self.shapes.m as f64)
    }

    pub fn psi_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        self.shapes.psi(f.z / self.params.r_par) / self.params.r_par.sqrt()
    }

    pub fn phi_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        self.shapes.phi(f.rho() / self.params.r_perp) * self.perp_scale()
    }

    /// Mass field `Theta = psi' phi'`, nonnegative by construction.
    pub fn theta_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        let axial = self.shapes.psi_mass(f.z / self.params.r_par) / self.params.r_par.sqrt();
        let perp = self.shapes.phi_mass(f.rho() / self.params.r_perp) * self.perp_scale();
        axial * perp
    }

    /// Time derivative of the mass field, from the profile derivative.
    pub fn theta_dt_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        let rate = -self.freq() * self.params.mu / self.params.r_par;
        let axial =
            rate * self.shapes.psi_mass_d1(f.z / self.params.r_par) / self.params.r_par.sqrt();
        let perp = self.shapes.phi_mass(f.rho() / self.params.r_perp) * self.perp_scale();
        axial * perp
    }

    /// Velocity `W = xi psi phi`.
    pub fn w_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let f = self.frame_at(t, x);
        let s = self.shapes.psi(f.z / self.params.r_par) / self.params.r_par.sqrt()
            * self.shapes.phi(f.rho() / self.params.r_perp)
            * self.perp_scale();
        self.xi.xi_f64().iter().map(|&c| c * s).collect()
    }

    /// Gradient of the periodized potential `Phi` in ambient coordinates.
    pub fn grad_big_phi_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let f = self.frame_at(t, x);
        let rho = f.rho() / self.params.r_perp;
        let mag = self.n_star as f64 * self.params.lambda as f64
            * self.perp_scale()
            * self.shapes.big_phi_d1(rho);
        f.radial_dir(&self.xi).iter().map(|&c| c * mag).collect()
    }

    /// `xi . grad psi`, the axial derivative of the travelling cutoff.
    pub fn axial_grad_psi_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        self.freq() * self.shapes.psi_d1(f.z / self.params.r_par)
            / (self.params.r_par * self.params.r_par.sqrt())
    }

    /// Skew matrix potential `V = (n lambda)^{-2} (xi (x) grad Phi
    /// - grad Phi (x) xi) psi`, row-major.
    pub fn v_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let d = self.xi.dim();
        let a = (self.n_star as f64 * self.params.lambda as f64).powi(-2);
        let g = self.grad_big_phi_at(t, x);
        let psi = self.psi_at(t, x);
        let xi_f = self.xi.xi_f64();
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = a * (xi_f[i] * g[j] - g[i] * xi_f[j]) * psi;
            }
        }
        out
    }

    /// The gradient corrector `(n lambda)^{-2} grad Phi (xi . grad psi)`;
    /// the row divergence of `V` equals `-W` minus this.
    pub fn corrector_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let a = (self.n_star as f64 * self.params.lambda as f64).powi(-2);
        let s = a * self.axial_grad_psi_at(t, x);
        self.grad_big_phi_at(t, x).iter().map(|&c| c * s).collect()
    }

    /// Prefactor `r_perp^{(d-1)/2} r_par^{1/2}` relating `W Theta` to
    /// `Theta`: the mass evolves by `dt Theta + mu * prefactor * div(W Theta)
    /// = 0`.
    pub fn w_theta_prefactor(&self) -> f64 {
        self.params.r_perp.powf(0.5 * self.shapes.m as f64) * self.params.r_par.sqrt()
    }

    /// Total mass `int Theta dx`, by profile quadrature.
    pub fn theta_mass(&self) -> f64 {
        let axial = self.params.r_par.sqrt() * self.shapes.psi_mass_prof.integral();
        let perp = self.params.r_perp.powf(0.5 * self.shapes.m as f64)
            * radial_volume_integral(&self.shapes.phi_mass_prof, self.shapes.m, |v| v);
        axial * perp
    }

    /// `int W Theta dx`, by profile quadrature of the pointwise products.
    pub fn mean_w_theta(&self) -> Vec<f64> {
        let axial = self
            .shapes
            .psi_prof
            .zip(&self.shapes.psi_mass_prof, |_, a, b| a * b)
            .integral();
        let perp_prod = self
            .shapes
            .phi_prof
            .zip(&self.shapes.phi_mass_prof, |x, a, b| {
                // the stored phi profile is exactly 1 on the core nodes
                let a = if x.abs() <= CORE { 1.0 } else { a };
                a * b
            });
        let perp = radial_volume_integral(&perp_prod, self.shapes.m, |v| v);
        self.xi.xi_f64().iter().map(|&c| c * axial * perp).collect()
    }

    pub fn sample_w(&self, grid: &TorusGrid, t: f64) -> VectorField {
        VectorField::from_fns(grid.clone(), |x, c| self.w_at(t, x)[c])
    }

    pub fn sample_theta(&self, grid: &TorusGrid, t: f64) -> ScalarField {
        ScalarField::from_fn(grid.clone(), |x| self.theta_at(t, x))
    }

    pub fn sample_theta_dt(&self, grid: &TorusGrid, t: f64) -> ScalarField {
        ScalarField::from_fn(grid.clone(), |x| self.theta_dt_at(t, x))
    }

    pub fn sample_v(&self, grid: &TorusGrid, t: f64) -> MatrixField {
        let d = self.xi.dim();
        MatrixField::from_fn(grid.clone(), |x, i, j| self.v_at(t, x)[i * d + j])
    }

    pub fn shapes(&self) -> &TransportShapes {
        &self.shapes
    }
}

impl NsJet {
    pub fn freq(&self) -> f64 {
        self.n_star as f64 * self.params.lambda as f64 * self.params.r_perp
    }

    fn frame_at(&self, t: f64, x: &[f64]) -> JetFrame {
        jet_frame(&self.xi, self.freq(), self.params.mu_bar, t, x)
    }

    fn perp_scale(&self) -> f64 {
        self.params.r_perp.powf(-0.5 * self.shapes.m as f64)
    }

    pub fn psi_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        self.shapes.psi(f.z / self.params.r_par) / self.params.r_par.sqrt()
    }

    pub fn phi_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        self.shapes.phi(f.rho() / self.params.r_perp) * self.perp_scale()
    }

    pub fn w_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let s = self.psi_at(t, x) * self.phi_at(t, x);
        self.xi.xi_f64().iter().map(|&c| c * s).collect()
    }

    /// Time derivative of `psi^2 phi^2`, the density carried by `W (x) W`.
    pub fn w_norm_sq_dt_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        let zs = f.z / self.params.r_par;
        let psi = self.shapes.psi(zs) / self.params.r_par.sqrt();
        let dpsi = -self.freq() * self.params.mu_bar * self.shapes.psi_d1(zs)
            / (self.params.r_par * self.params.r_par.sqrt());
        let phi = self.shapes.phi(f.rho() / self.params.r_perp) * self.perp_scale();
        2.0 * psi * dpsi * phi * phi
    }

    pub fn grad_big_phi_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let f = self.frame_at(t, x);
        let rho = f.rho() / self.params.r_perp;
        let mag = self.n_star as f64 * self.params.lambda as f64
            * self.perp_scale()
            * self.shapes.big_phi_d1(rho);
        f.radial_dir(&self.xi).iter().map(|&c| c * mag).collect()
    }

    pub fn axial_grad_psi_at(&self, t: f64, x: &[f64]) -> f64 {
        let f = self.frame_at(t, x);
        self.freq() * self.shapes.psi_d1(f.z / self.params.r_par)
            / (self.params.r_par * self.params.r_par.sqrt())
    }

    pub fn v_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let d = self.xi.dim();
        let a = (self.n_star as f64 * self.params.lambda as f64).powi(-2);
        let g = self.grad_big_phi_at(t, x);
        let psi = self.psi_at(t, x);
        let xi_f = self.xi.xi_f64();
        let mut out = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                out[i * d + j] = a * (xi_f[i] * g[j] - g[i] * xi_f[j]) * psi;
            }
        }
        out
    }

    pub fn corrector_at(&self, t: f64, x: &[f64]) -> Vec<f64> {
        let a = (self.n_star as f64 * self.params.lambda as f64).powi(-2);
        let s = a * self.axial_grad_psi_at(t, x);
        self.grad_big_phi_at(t, x).iter().map(|&c| c * s).collect()
    }

    /// `int W (x) W dx = xi (x) xi` times this scalar, which the L^2
    /// normalizations pin to 1; computed by profile quadrature.
    pub fn w_outer_mean_coeff(&self) -> f64 {
        let axial = self.shapes.psi_prof.quad(|_, v| v * v);
        let perp = radial_volume_integral(&self.shapes.phi_prof, self.shapes.m, |v| v * v);
        axial * perp
    }

    pub fn sample_w(&self, grid: &TorusGrid, t: f64) -> VectorField {
        VectorField::from_fns(grid.clone(), |x, c| self.w_at(t, x)[c])
    }

    pub fn sample_v(&self, grid: &TorusGrid, t: f64) -> MatrixField {
        let d = self.xi.dim();
        MatrixField::from_fn(grid.clone(), |x, i, j| self.v_at(t, x)[i * d + j])
    }

    pub fn sample_w_norm_sq_dt(&self, grid: &TorusGrid, t: f64) -> ScalarField {
        ScalarField::from_fn(grid.clone(), |x| self.w_norm_sq_dt_at(t, x))
    }

    pub fn shapes(&self) -> &NsShapes {
        &self.shapes
    }
}

/// An axis-aligned direction with unit denominators, handy for reference
/// configurations where the frequency multiplier should stay 1.
pub fn axis_direction(d: usize, axis: usize) -> Result<Direction, BlocksError> {
    if d != 2 && d != 3 {
        return Err(BlocksError::InvalidDimension(d));
    }
    assert!(axis < d);
    let unit = |k: usize| -> Vec<Rational64> {
        (0..d)
            .map(|c| {
                if c == k {
                    Rational64::from_integer(1)
                } else {
                    Rational64::from_integer(0)
                }
            })
            .collect()
    };
    let frame: Vec<Vec<Rational64>> = (0..d).filter(|&c| c != axis).map(unit).collect();
    Ok(Direction::new(unit(axis), frame)?)
}
