use serde::Serialize;

use super::field::{CurvatureProfile, TorsionField, TorsionRhs};
use super::TorsionError;
use crate::numerics::{solve_ode, NumericsError, OdeOptions, Output, SolverStats, StepControl};

#[derive(Debug, Clone)]
pub struct TorsionRun {
    pub times: Vec<f64>,
    pub frames: Vec<TorsionField>,
    pub stats: SolverStats,
}

/// Default control: first step `0.1·Δs³`, tolerances 1e-10.
pub fn default_control(n: usize) -> StepControl {
    let ds = std::f64::consts::TAU / n as f64;
    StepControl { initial_step: 0.1 * ds.powi(3), abs_tol: 1e-10, rel_tol: 1e-10, max_steps: 20_000_000 }
}

/// Method-of-lines evolution; frames are returned at `output_times` (those
/// within `[0, t_end]`).
pub fn torsion_evolve(
    tau0: &TorsionField,
    kappa: &CurvatureProfile,
    t_end: f64,
    output_times: &[f64],
) -> Result<TorsionRun, TorsionError> {
    torsion_evolve_with(tau0, kappa, t_end, output_times, &default_control(tau0.n()))
}

pub fn torsion_evolve_with(
    tau0: &TorsionField,
    kappa: &CurvatureProfile,
    t_end: f64,
    output_times: &[f64],
    ctrl: &StepControl,
) -> Result<TorsionRun, TorsionError> {
    let mut rhs = TorsionRhs::new(tau0.n(), kappa.clone())?;
    let opts = OdeOptions::default()
        .output(Output::Times(output_times.to_vec()))
        .observer(|_, y| if y.iter().all(|v| *v > 0.0) { Ok(()) } else { Err("nonpositive torsion".into()) });
    let sol = solve_ode(
        |_, y, d| {
            if y.iter().all(|v| *v > 0.0) {
                rhs.eval(y, d)
            } else {
                // Trial stages may leave the positive cone; poison them so the
                // step is rejected rather than accepted.
                d.fill(f64::NAN)
            }
        },
        tau0.samples(),
        (0.0, t_end),
        ctrl,
        opts,
    )
    .map_err(|e| match e {
        NumericsError::Aborted { t, .. } => TorsionError::PositivityLost { t },
        NumericsError::NonFinite { t } | NumericsError::StepUnderflow { t, .. } => TorsionError::PositivityLost { t },
        NumericsError::StepLimit { t, .. } => TorsionError::Stiffness { t },
        other => TorsionError::Numerics(other),
    })?;
    let frames = sol.trajectory.states.into_iter().map(TorsionField::new).collect::<Result<Vec<_>, _>>()?;
    Ok(TorsionRun { times: sol.trajectory.times, frames, stats: sol.stats })
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilitySeries {
    pub times: Vec<f64>,
    /// `S(t) = ‖τ(·, t) − 1‖₂`.
    pub s: Vec<f64>,
}

impl StabilitySeries {
    pub fn max(&self) -> f64 {
        self.s.iter().copied().fold(0.0, f64::max)
    }
}

/// Perturbed helix `τ0 = 1 + ε sin s` with `κ ≡ 1`, sampled every `dt_out`.
pub fn helix_stability(amplitude: f64, t_end: f64, n: usize, dt_out: f64) -> Result<StabilitySeries, TorsionError> {
    let tau0 = TorsionField::from_fn(n, |s| 1.0 + amplitude * s.sin())?;
    let count = (t_end / dt_out).round() as usize;
    let times: Vec<f64> = (0..=count).map(|i| (i as f64 * dt_out).min(t_end)).collect();
    let one = TorsionField::constant(n, 1.0)?;
    if amplitude == 0.0 {
        return Ok(StabilitySeries { s: vec![0.0; times.len()], times });
    }
    let run = torsion_evolve(&tau0, &CurvatureProfile::Constant(1.0), t_end, &times)?;
    let s = run.frames.iter().map(|f| f.l2_distance(&one)).collect();
    Ok(StabilitySeries { times: run.times, s })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct QuasiPeriod {
    pub t_star: f64,
    /// `‖τ(·, t*) − τ(·, 0)‖₂` at the sampled minimum.
    pub distance: f64,
    pub stationary: bool,
}

/// First local minimum after `window_start` of `t ↦ ‖τ(·,t) − τ(·,0)‖₂`,
/// refined by a parabola through the three samples around it. Frames must be
/// equally spaced in time and start at `t = 0`.
pub fn quasi_period(times: &[f64], frames: &[TorsionField], window_start: f64) -> Result<QuasiPeriod, TorsionError> {
    let d: Vec<f64> = frames.iter().map(|f| f.l2_distance(&frames[0])).collect();
    let scale = frames[0].samples().iter().map(|v| v.abs()).fold(0.0, f64::max);
    if d.iter().all(|v| *v <= 1e-9 * scale) {
        return Ok(QuasiPeriod { t_star: window_start, distance: 0.0, stationary: true });
    }
    for i in 1..d.len().saturating_sub(1) {
        if times[i] <= window_start {
            continue;
        }
        if d[i] <= d[i - 1] && d[i] <= d[i + 1] {
            let h = times[i + 1] - times[i];
            let denom = d[i - 1] - 2.0 * d[i] + d[i + 1];
            let shift = if denom > 0.0 { 0.5 * h * (d[i - 1] - d[i + 1]) / denom } else { 0.0 };
            return Ok(QuasiPeriod { t_star: times[i] + shift, distance: d[i], stationary: false });
        }
    }
    Err(TorsionError::NoMinimum(window_start))
}
