//! Torsion evolution of the curvature-preserving flow on space curves.

mod evolve;
mod field;
mod frenet;
mod linear;
mod stationary;
mod transform;

pub use evolve::{helix_stability, quasi_period, torsion_evolve, QuasiPeriod, StabilitySeries, TorsionRun};
pub use field::{torsion_invariants, torsion_rhs, torsion_rhs_fd, CurvatureProfile, TorsionField, TorsionRhs};
pub use frenet::{frenet_reconstruct, FrenetState, SpaceCurve};
pub use linear::{linearized_mol, linearized_solution};
pub use stationary::{stationary_torsion, stationary_torsion_general, StationarySign};
pub use transform::{cdf_transform_roundtrip, TransformRecord};

use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum TorsionError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("nonpositive torsion {value} at sample {index}")]
    Positivity { index: usize, value: f64 },
    #[error("torsion lost positivity at t={t}")]
    PositivityLost { t: f64 },
    #[error("step budget exhausted at t={t}: system too stiff for the step limit")]
    Stiffness { t: f64 },
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("{name}={value} outside domain {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },
    #[error("constants admit no closed orbit: {0}")]
    Constants(String),
    #[error("no local minimum of the return distance after t={0}")]
    NoMinimum(f64),
    #[error("frame degenerated: orthonormality defect {0:e}")]
    Frame(f64),
    #[error("monotone inversion failed: {0}")]
    Inversion(String),
}
