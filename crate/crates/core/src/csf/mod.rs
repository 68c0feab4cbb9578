//! Curve-shortening flow of plane curves with figure-eight diagnostics.

mod bowtie;
mod curve;
mod diagnostics;
mod evolve;

pub use bowtie::{
    affine_rescale_and_bowtie, grim_reaper_check, grim_reaper_error, lobe_angle_profile, tip_products, BowtieReport,
};
pub use curve::{make_concinnous_eight, EightFamily, Orientation, PlaneCurve, Point};
pub use diagnostics::{
    comparison_solution, curve_geometry, find_double_point, split_lobes, theta_monotonicity_series, Crossing,
    EightDiagnostics, ThetaSeries, THETA_TOLERANCE,
};
pub use evolve::{
    csf_evolve, symmetry_defect, CsfFrame, CsfRun, DtPolicy, EvolveOptions, FramePolicy, StopReason, StopRule, Symmetry,
    SINGULARITY_LIMIT,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CsfError {
    #[error("invalid curve: {0}")]
    Curve(String),
    #[error("{name}={value} out of range")]
    Domain { name: &'static str, value: f64 },
    #[error("curvature changes sign away from the double point near t={parameter}")]
    NotConcinnous { parameter: f64 },
    #[error("topology: {0}")]
    Topology(String),
    #[error("diagnostic: {0}")]
    Diagnostic(String),
    #[error("non-finite state at t={t}")]
    NonFinite { t: f64 },
    #[error("tip under-resolved at t={time}: {tip_points} points in the top curvature decade")]
    Resolution { time: f64, tip_points: usize },
    #[error("rescale: {0}")]
    Rescale(String),
}
