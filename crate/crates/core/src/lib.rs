//! Positive S¹-equivariant symplectic homology for contact manifolds whose
//! Reeb spectrum is lacunary, computed from exact orbit data.
//!
//! The pipeline is: enumerate orbits below an action cutoff ([`brieskorn`],
//! [`ellipsoid`], [`line_bundle`]), build a twin-tower complex per orbit
//! ([`tower_complex`]), and assemble and compare graded ranks ([`invariants`]).

pub mod brieskorn;
pub mod cli;
pub mod ellipsoid;
pub mod error;
pub mod exact_algebra;
pub mod invariants;
pub mod line_bundle;
pub mod orbit_model;
pub mod tower_complex;

pub use error::{Error, Result};
pub use exact_algebra::BigRational;
