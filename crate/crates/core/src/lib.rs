//! Plane curves under central and parallel power-law forces.
//!
//! Polar orbits `r f(theta) = 1`, their curvatures and power-law detection,
//! the d-transformation and spiral/curve duality, explicit parallel-force
//! trajectories, surfaces of revolution, and an independent numerical oracle
//! that checks every closed-form claim.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod acceptance;
pub mod diffexpr;
pub mod duality;
pub mod error;
pub mod funcore;
pub mod geom;
pub mod jet;
pub mod oracle;
pub mod orbits;
pub mod par;
pub mod quadrature;
pub mod surfaces;
pub mod trajectories;

pub use error::{Error, Result};
pub use funcore::{Family, Interval, ScalarFunction};
pub use geom::Vec2;
pub use jet::Jet;
