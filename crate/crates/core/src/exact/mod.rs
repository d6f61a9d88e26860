//! Exact arithmetic: rationals, polynomials, real algebraic numbers of
//! degree at most three, number fields and integer matrices.

pub mod algebraic;
pub mod field;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use algebraic::{ra_arith, ArithOp, JsonInt, RealAlgebraic};
pub use field::{FieldElem, NumberField};
pub use matrix::IntMatrix;
pub use poly::Poly;
pub use rational::{BigRat, RatInterval};
