#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Numerical laboratory for three geometric flows: curve shortening of plane
//! figure-eights, the curvature-preserving flow on space curves, and geodesics
//! of the solvable groups `G_α`.

pub mod acceptance;
pub mod csf;
pub mod export;
pub mod geoflow;
pub mod numerics;
pub mod torsionflow;
