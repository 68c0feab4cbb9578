//! Geodesics and the structure field of the solvable groups `G_α`, period
//! functions of loop level sets, and the symmetric and variational flowline
//! systems used in the bounding-box and monotonicity scans.

mod curvature;
mod flow;
mod group;
mod period;
mod perfect;
mod sphere;
mod symmetric;

pub use curvature::{curvature_data, CurvatureData, PlaneCurvatures};
pub use flow::{
    concatenation_endpoint, cylinder_invariant, flow_tangent, geodesic, metric_speed_defect, CylinderReport, Direction,
    Flowline, GeodesicPath,
};
pub use group::{group_inv, group_mul, one_parameter_element, structure_field, Alpha, GroupPoint, UnitTangent};
pub use period::{beta_from_x0, level_value, loop_vector, period_closed_form, period_numeric, PeriodRecord, PeriodSource};
pub use perfect::{perfect_vector_checks, PerfectReport};
pub use sphere::{fibonacci_directions, geodesic_sphere, lobe_asymmetry, SpherePoint};
pub use symmetric::{
    bounding_box_scan, boundary_curve, g_function_check, symmetric_system, variational_system, BoundaryCurve,
    BoundaryPoint, BoundingBoxVerdict, GCheck, GPoint, SymmetricFlowState, SymmetricRun, VariationalRun,
};

use crate::numerics::NumericsError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeoError {
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("{name}={value} outside admissible range {range}")]
    Domain { name: &'static str, value: f64, range: String },
    #[error("setup error: {0}")]
    Setup(String),
    #[error("detection failed: {0}")]
    Detection(String),
    #[error("closed form only available for alpha in {{1, 1/2}}, got {0}")]
    Unsupported(f64),
}
