//! Combinatorial and metric machinery for splitting triangulated open
//! 3-manifolds: normal surfaces and curves, PL area over the regular
//! hyperbolic metric on the 2-skeleton, the covering-size quasimetric,
//! intersection and special-curve analysis, and certificate checkers for
//! splitting collections and graph submanifolds, all on finite windows of
//! lazily generated complexes.

pub mod arrangement;
pub mod complex;
pub mod families;
pub mod homology;
pub mod hypmetric;
pub mod interplay;
pub mod normal;
pub mod perm;

pub use complex::{build_complex, FaceGluing, TetGluing, TetId, TriangulationWindow};
pub use perm::Perm4;
