//! Transformations of the circle and sphere, tangent-plane projections, and
//! the wrapped Cauchy (WC), angular central Gaussian (ACG), spherical Cauchy
//! (SC) and multivariate t distributions that are linked by them.
//!
//! Module map:
//!
//! * [`geom`]: angles, unit vectors, polar form about a pole, sphere areas.
//! * [`xform`]: squaring, rescaled linear and Möbius maps of the circle,
//!   angle doubling and halving on spheres, 2×2 SVD.
//! * [`project`]: gnomonic and stereographic projections and the measure
//!   factors that relate tangent-plane Lebesgue measure to surface measure.
//! * [`dist`]: densities, samplers and parameter maps.
//! * [`quad`]: circle and sphere quadrature rules.
//! * [`check`]: named identity suites with machine-readable reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod check;
pub mod dist;
mod error;
pub mod geom;
pub mod linalg;
pub mod project;
pub mod quad;
pub mod xform;

pub use error::{Error, Result};
pub use geom::{Angle, PolarPoint, Polar, Rotation2, SubDirection, UnitVector};
pub use linalg::SpdMatrix;
pub use project::TangentPoint;
