//! Oscillatory building blocks: pipe-flow bundles, travelling jets, and
//! temporal concentrators, with the exact structural identities the
//! iteration schemes lean on.

pub mod error;
pub mod jets;
pub mod params;
pub mod profile;
pub mod temporal;

pub use error::BlocksError;
pub use jets::{
    axis_direction, build_ns_jet, build_transport_jet, ns_n_star, ns_shapes, transport_n_star,
    transport_shapes, NsJet, NsShapes, TransportJet, TransportShapes,
};
pub use params::JetParams;
pub use profile::{Profile, FINE_N};
pub use temporal::{build_temporal_jets, TemporalJet, TemporalShape};
