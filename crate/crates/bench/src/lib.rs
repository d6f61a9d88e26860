//! Shared inputs for the benchmarks.

use sailkit_core::algebraic::{shipped_cubic_matrices, validate_matrix, AlgebraicCone};
use sailkit_core::intgeom::IntPoint;
use sailkit_core::klein::ConeSpec;

/// The cone of the first shipped cubic.
pub fn cubic_cone() -> AlgebraicCone {
    let (_, a) = shipped_cubic_matrices().remove(0);
    validate_matrix(&a).expect("shipped matrix").remove(0)
}

/// A rational cone in space with a sail of moderate size.
pub fn rational_cone_3d() -> ConeSpec {
    let g = [[1, 0, 0], [0, 1, 0], [7, 11, 13]].iter().map(|r| IntPoint::new(r.to_vec()).unwrap()).collect();
    ConeSpec::rational(g).expect("independent generators")
}
