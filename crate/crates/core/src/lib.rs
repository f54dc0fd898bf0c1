//! Exact computations with Alexander polynomials and enhanced A-polynomials of
//! torus and satellite knots, plus numeric verification of the peripheral
//! representation-extension construction for satellite surgeries.

pub mod apolygon;
pub mod error;
pub mod laurent;
pub mod repglue;
pub mod satellite;
pub mod sweep;
mod text;
pub mod torus;

pub use apolygon::{BiPoly, DetectionResult, NewtonPolygon, Slope, Thinness};
pub use error::{Error, Result};
pub use laurent::LaurentPoly;
pub use satellite::{AdmissibilityReport, SatelliteSpec, Verdict};
pub use torus::TorusKnot;
