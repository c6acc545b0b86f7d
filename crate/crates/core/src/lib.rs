//! Exact computational toolkit for coclosed G2-structures on the
//! 7-dimensional Heisenberg model, the associated geometric flows, and the
//! Spin(7) structures they induce on the 8-dimensional spacetime track.
//!
//! Everything is generic over a [`scalar::Scalar`] ring so the same code
//! runs over exact rationals, polynomials, power-law time scalars, and
//! tolerance-compared floats. Concrete aliases over `Rat` live at the
//! crate root.

pub mod alg;
pub mod cy8;
pub mod flows;
pub mod g2;
pub mod identities;
pub mod model;
pub mod poly;
pub mod scalar;
pub mod verify;

pub use scalar::{rat, Approx, Rat, Scalar};

/// Exact alternating form over the rationals.
pub type Form = alg::AltForm<Rat>;
/// Exact metric over the rationals.
pub type ExactMetric = alg::Metric<Rat>;
/// Exact vector over the rationals.
pub type Vec7 = alg::Vector<Rat>;
