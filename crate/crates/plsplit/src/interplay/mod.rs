//! Interactions between realized surfaces: intersection patterns, special
//! classes, Seifert neighborhood data, disk equivalence, interval
//! disjointification, and limits of surface sequences.

pub mod equiv;
pub mod intersect;
pub mod limits;
pub mod seifert;
pub mod special;
