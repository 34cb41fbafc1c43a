//! Cohomology of twisted holomorphic forms on Grassmannians, their linear
//! sections and cyclic covers, and slope-stability verdicts for tangent
//! bundles of Fano manifolds with Picard number one.

pub mod weyl;
pub mod tables;
pub mod special;
pub mod chase;
pub mod stability;
pub mod acceptance;
