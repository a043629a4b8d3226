//! Numerical bifurcation analysis of conservative cubic Hénon maps and of the first-return maps
//! near a cubic homoclinic tangency that they approximate.
//!
//! The crate is organised by task:
//!
//! * [`maps`] defines the map family `x' = y, y' = M1 + M2 y - J x + nu y^3`.
//! * [`orbit`] finds and classifies periodic orbits and scans one-parameter families for
//!   bifurcations.
//! * [`curves`] evaluates the closed-form bifurcation curves in the `(M1, M2)` plane and pulls
//!   them back to the unfolding parameters.
//! * [`resonance`] covers the 1:4 resonance: normal-form coefficients and the equilibria of the
//!   two truncated Hamiltonian flows.
//! * [`return_map`] builds a concrete homoclinic unfolding and its rescaled first-return maps.
//! * [`portrait`] samples orbit clouds and writes them as CSV or SVG.

pub mod curves;
pub mod error;
pub mod maps;
pub mod orbit;
pub mod poly;
pub mod portrait;
pub mod resonance;
pub mod return_map;

pub use error::{Error, Result};
pub use maps::{reversor, CubicHenonMap, PlanarMap, PlanePoint, Sign};
