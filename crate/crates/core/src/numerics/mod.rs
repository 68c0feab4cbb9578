//! Shared kernels: ODE integration, special functions, root finding,
//! singular quadrature and periodic differentiation.

pub mod ode;
pub mod quadrature;
pub mod roots;
pub mod special;
pub mod spectral;

pub use ode::{integrate_ode, solve_ode, EventHit, OdeOptions, OdeSolution, Output, SolverStats, StepControl, Trajectory};
pub use quadrature::{integrate, integrate_singular, integrate_singular_with_offsets};
pub use roots::{expand_bracket, find_root};
pub use special::{elliptic_k, erfc};
pub use spectral::{periodic_derivative, DerivativeMethod, SpectralGrid};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("invalid step control: {0}")]
    InvalidControl(String),
    #[error("empty integration span [{0}, {1}]")]
    EmptySpan(f64, f64),
    #[error("step budget exhausted at t={t} after {steps} steps")]
    StepLimit { t: f64, steps: usize },
    #[error("step size underflow at t={t} (h={h})")]
    StepUnderflow { t: f64, h: f64 },
    #[error("non-finite value in field output at t={t}")]
    NonFinite { t: f64 },
    #[error("integration aborted at t={t}: {reason}")]
    Aborted { t: f64, reason: String },
    #[error("argument {value} outside domain {domain}")]
    Domain { value: f64, domain: &'static str },
    #[error("no sign change on [{a}, {b}]")]
    Bracket { a: f64, b: f64 },
    #[error("quadrature failed: {0}")]
    Quadrature(String),
    #[error("unsupported derivative order {0}")]
    UnsupportedOrder(usize),
    #[error("grid too small: {0} points")]
    GridTooSmall(usize),
}
