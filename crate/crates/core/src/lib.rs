//! Geometry of numbers toolkit: integer invariants, continued fractions,
//! Klein and Minkowski-Voronoi sails, periodic algebraic sails, and
//! Jacobi-Perron expansions, all in exact arithmetic.

pub mod error;
pub mod exact;
pub mod contfrac;
pub mod algebraic;
pub mod hull;
pub mod intgeom;
pub mod jacobiperron;
pub mod klein;
pub mod minkvor;
pub mod planar;
pub mod stats;

pub use error::{Error, Result};
pub use exact::{BigRat, IntMatrix, RealAlgebraic};
