//! Fourier-multiplier operators on torus fields: right inverses of the
//! divergence (tensor- and scalar-valued, with bilinear variants), Leray
//! projection, Biot-Savart potentials, compact-bump mollifiers in space and
//! one-sided mollifiers in time, and decay-rate probes for the commutator
//! and oscillatory-integral estimates the iteration schemes lean on.

mod error;
mod invdiv;
mod leray;
mod mollify;
mod probes;

pub use error::CalcError;
pub use invdiv::{
    bilinear_b, bilinear_b1, bilinear_b1_vec, inv_div_scalar, inv_div_tensor, inv_laplace,
};
pub use leray::{biot_savart, leray_project};
pub use mollify::{
    mollify_scalar, mollify_spacetime, mollify_sym_tensor, mollify_vector, TimeKernel,
};
pub use probes::{
    commutator_probe, fit_log_slope, stationary_phase_probe, weierstrass_field, CommutatorReport,
    PhaseReport,
};
