//! Numerical laboratory for spectral measures of stationary sequences on ℤ.
//!
//! The crate revolves around positive measures on the unit circle and the
//! quantities that connect them to the sequences they drive: moment
//! (covariance) sequences, Szegő one-step prediction errors, polynomials that
//! are small on circular arcs, spectral estimation of a single realization,
//! period detection for finitely valued sequences, and upper/lower bounds for
//! prediction errors of weights with exponential roots.

pub mod acceptance;
pub mod arc_polys;
pub mod arcs;
pub mod error;
pub mod fit;
pub mod intpoly;
pub mod measures;
pub mod periodicity;
pub mod processes;
pub mod quad;
pub mod spectra;
pub mod szego;
pub mod weight_bounds;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Full circle in radians.
pub const TAU: f64 = std::f64::consts::TAU;
