//! Dormand–Prince 5(4) integrator with embedded error control, dense output
//! and first-zero event location.

use super::NumericsError;

/// Step-size control parameters shared by every integration in the crate.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct StepControl {
    /// First trial step. Non-positive values select an automatic guess.
    pub initial_step: f64,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
}

impl StepControl {
    pub fn new(initial_step: f64, abs_tol: f64, rel_tol: f64, max_steps: usize) -> Result<Self, NumericsError> {
        let ctrl = Self { initial_step, abs_tol, rel_tol, max_steps };
        ctrl.validate()?;
        Ok(ctrl)
    }

    /// Tight tolerances used by the geometric checks (1e-12 abs and rel).
    pub fn tight() -> Self {
        Self { initial_step: 1e-3, abs_tol: 1e-12, rel_tol: 1e-12, max_steps: 2_000_000 }
    }

    pub fn with_tolerance(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }

    pub fn validate(&self) -> Result<(), NumericsError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) || self.max_steps == 0 {
            return Err(NumericsError::InvalidControl(format!(
                "abs_tol={}, rel_tol={}, max_steps={}",
                self.abs_tol, self.rel_tol, self.max_steps
            )));
        }
        Ok(())
    }
}

impl Default for StepControl {
    fn default() -> Self {
        Self { initial_step: 1e-3, abs_tol: 1e-10, rel_tol: 1e-10, max_steps: 1_000_000 }
    }
}

/// Sampled solution of an ODE.
///
/// When `dense` is set, `derivatives` holds the field value at every sample and
/// [`Trajectory::interpolate`] uses cubic Hermite interpolation between samples.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub derivatives: Vec<Vec<f64>>,
    pub dense: bool,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn last_state(&self) -> &[f64] {
        self.states.last().map(|s| s.as_slice()).unwrap_or(&[])
    }

    pub fn last_time(&self) -> f64 {
        self.times.last().copied().unwrap_or(f64::NAN)
    }

    /// Component `i` of every sample.
    pub fn component(&self, i: usize) -> Vec<f64> {
        self.states.iter().map(|s| s[i]).collect()
    }

    /// Cubic Hermite interpolation between samples; `None` outside the span or
    /// when the trajectory is not dense.
    pub fn interpolate(&self, t: f64) -> Option<Vec<f64>> {
        if !self.dense || self.times.is_empty() {
            return None;
        }
        let first = self.times[0];
        let last = self.last_time();
        if t < first || t > last {
            return None;
        }
        let idx = match self.times.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
            Ok(i) => return Some(self.states[i].clone()),
            Err(i) => i,
        };
        let (i0, i1) = (idx - 1, idx);
        let h = self.times[i1] - self.times[i0];
        let s = (t - self.times[i0]) / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        let (y0, y1) = (&self.states[i0], &self.states[i1]);
        let (d0, d1) = (&self.derivatives[i0], &self.derivatives[i1]);
        Some(
            (0..y0.len())
                .map(|k| h00 * y0[k] + h10 * h * d0[k] + h01 * y1[k] + h11 * h * d1[k])
                .collect(),
        )
    }

    pub fn check_invariants(&self) -> bool {
        self.times.len() == self.states.len()
            && self.times.windows(2).all(|w| w[1] > w[0])
            && self.states.iter().flatten().all(|v| v.is_finite())
    }
}

/// Which samples end up in the returned trajectory.
#[derive(Debug, Clone, PartialEq)]
pub enum Output {
    /// Every accepted step (dense).
    EveryStep,
    /// Only the requested times, interpolated from the integrator's dense output.
    /// Times must be increasing; those outside the span are dropped.
    Times(Vec<f64>),
    /// Initial and final state only.
    Final,
}

/// Location of the first zero of an event functional.
#[derive(Debug, Clone)]
pub struct EventHit {
    pub time: f64,
    pub state: Vec<f64>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SolverStats {
    pub accepted: usize,
    pub rejected: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct OdeSolution {
    pub trajectory: Trajectory,
    pub event: Option<EventHit>,
    pub stats: SolverStats,
}

type EventFn<'a> = Box<dyn FnMut(f64, &[f64]) -> f64 + 'a>;
type ObserverFn<'a> = Box<dyn FnMut(f64, &[f64]) -> Result<(), String> + 'a>;

/// Optional behaviour for [`solve_ode`].
pub struct OdeOptions<'a> {
    pub output: Output,
    /// Integration stops at the first sign change of this functional after the
    /// initial time (a zero at the initial time itself is ignored).
    pub event: Option<EventFn<'a>>,
    pub event_tol: f64,
    /// Called after every accepted step; an `Err` aborts the run.
    pub observer: Option<ObserverFn<'a>>,
    pub max_step: f64,
}

impl Default for OdeOptions<'_> {
    fn default() -> Self {
        Self { output: Output::EveryStep, event: None, event_tol: 1e-12, observer: None, max_step: f64::INFINITY }
    }
}

impl<'a> OdeOptions<'a> {
    pub fn output(mut self, output: Output) -> Self {
        self.output = output;
        self
    }

    pub fn event(mut self, g: impl FnMut(f64, &[f64]) -> f64 + 'a) -> Self {
        self.event = Some(Box::new(g));
        self
    }

    pub fn observer(mut self, f: impl FnMut(f64, &[f64]) -> Result<(), String> + 'a) -> Self {
        self.observer = Some(Box::new(f));
        self
    }

    pub fn max_step(mut self, h: f64) -> Self {
        self.max_step = h;
        self
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Continuous extension of one accepted step.
struct DenseStep {
    t0: f64,
    h: f64,
    r1: Vec<f64>,
    r2: Vec<f64>,
    r3: Vec<f64>,
    r4: Vec<f64>,
    r5: Vec<f64>,
}

impl DenseStep {
    fn eval(&self, t: f64, out: &mut [f64]) {
        let th = (t - self.t0) / self.h;
        let th1 = 1.0 - th;
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.r1[i]
                + th * (self.r2[i] + th1 * (self.r3[i] + th * (self.r4[i] + th1 * self.r5[i])));
        }
    }
}

/// Integrates `y' = field(t, y)` over `t_span` recording every accepted step.
pub fn integrate_ode<F>(field: F, y0: &[f64], t_span: (f64, f64), ctrl: &StepControl) -> Result<Trajectory, NumericsError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    solve_ode(field, y0, t_span, ctrl, OdeOptions::default()).map(|s| s.trajectory)
}

/// General driver: output selection, event location and step observers.
pub fn solve_ode<F>(
    mut field: F,
    y0: &[f64],
    t_span: (f64, f64),
    ctrl: &StepControl,
    mut opts: OdeOptions<'_>,
) -> Result<OdeSolution, NumericsError>
where
    F: FnMut(f64, &[f64], &mut [f64]),
{
    ctrl.validate()?;
    let (t_start, t_end) = t_span;
    if !(t_end > t_start) || !t_start.is_finite() || !t_end.is_finite() {
        return Err(NumericsError::EmptySpan(t_start, t_end));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(NumericsError::NonFinite { t: t_start });
    }
    let n = y0.len();
    let mut stats = SolverStats::default();
    let mut eval = |t: f64, y: &[f64], out: &mut [f64], stats: &mut SolverStats| -> Result<(), NumericsError> {
        field(t, y, out);
        stats.evaluations += 1;
        if out.iter().any(|v| !v.is_finite()) {
            return Err(NumericsError::NonFinite { t });
        }
        Ok(())
    };

    let mut t = t_start;
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; n];
    eval(t, &y, &mut k1, &mut stats)?;

    let mut traj = Trajectory { dense: matches!(opts.output, Output::EveryStep), ..Default::default() };
    let mut pending_times: std::collections::VecDeque<f64> = match &opts.output {
        Output::Times(ts) => ts.iter().copied().filter(|&s| s >= t_start && s <= t_end).collect(),
        _ => Default::default(),
    };
    match opts.output {
        Output::EveryStep | Output::Final => {
            traj.times.push(t);
            traj.states.push(y.clone());
            if traj.dense {
                traj.derivatives.push(k1.clone());
            }
        }
        Output::Times(_) => {
            while pending_times.front().is_some_and(|&s| s <= t_start) {
                pending_times.pop_front();
                traj.times.push(t);
                traj.states.push(y.clone());
            }
        }
    }

    let mut g_prev = opts.event.as_mut().map(|g| g(t, &y));

    let span = t_end - t_start;
    let mut h = if ctrl.initial_step > 0.0 { ctrl.initial_step } else { initial_guess(&y, &k1, ctrl, span) };
    h = h.min(span).min(opts.max_step);

    let (mut k2, mut k3, mut k4, mut k5, mut k6, mut k7) =
        (vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    let mut ytmp = vec![0.0; n];
    let mut y1 = vec![0.0; n];
    let mut scratch = vec![0.0; n];
    let mut steps = 0usize;

    loop {
        if steps >= ctrl.max_steps {
            return Err(NumericsError::StepLimit { t, steps });
        }
        steps += 1;
        let last = t + h >= t_end;
        if last {
            h = t_end - t;
        }
        if h <= f64::EPSILON * t.abs().max(1.0) * 4.0 {
            return Err(NumericsError::StepUnderflow { t, h });
        }
        for i in 0..n {
            ytmp[i] = y[i] + h * A21 * k1[i];
        }
        eval(t + C2 * h, &ytmp, &mut k2, &mut stats)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        eval(t + C3 * h, &ytmp, &mut k3, &mut stats)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        eval(t + C4 * h, &ytmp, &mut k4, &mut stats)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        eval(t + C5 * h, &ytmp, &mut k5, &mut stats)?;
        for i in 0..n {
            ytmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let t_new = if last { t_end } else { t + h };
        eval(t_new, &ytmp, &mut k6, &mut stats)?;
        for i in 0..n {
            y1[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        eval(t_new, &y1, &mut k7, &mut stats)?;

        let mut err = 0.0;
        for i in 0..n {
            let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = ctrl.abs_tol + ctrl.rel_tol * y[i].abs().max(y1[i].abs());
            err += (e / sc) * (e / sc);
        }
        let err = (err / n.max(1) as f64).sqrt();
        if !err.is_finite() {
            stats.rejected += 1;
            h *= 0.2;
            continue;
        }
        if err > 1.0 {
            stats.rejected += 1;
            h *= (0.9 * err.powf(-0.2)).max(0.2);
            continue;
        }
        stats.accepted += 1;

        let dense = build_dense(t, h, &y, &y1, &k1, &k3, &k4, &k5, &k6, &k7);

        // Event location on the continuous extension.
        if let (Some(g), Some(gp)) = (opts.event.as_mut(), g_prev) {
            let g_new = g(t_new, &y1);
            let crossed = (gp != 0.0 && gp.signum() != g_new.signum()) || (gp != 0.0 && g_new == 0.0);
            if crossed {
                let (mut lo, mut hi) = (t, t_new);
                let mut glo = gp;
                while hi - lo > opts.event_tol {
                    let mid = 0.5 * (lo + hi);
                    dense.eval(mid, &mut scratch);
                    let gm = g(mid, &scratch);
                    if gm == 0.0 {
                        lo = mid;
                        hi = mid;
                        break;
                    }
                    if gm.signum() == glo.signum() {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                let te = 0.5 * (lo + hi);
                let mut ye = vec![0.0; n];
                dense.eval(te, &mut ye);
                record_step(&mut traj, &opts.output, &mut pending_times, &dense, t, te, &ye, &mut eval, &mut stats)?;
                if matches!(opts.output, Output::Final) {
                    traj.times.push(te);
                    traj.states.push(ye.clone());
                }
                return Ok(OdeSolution { trajectory: traj, event: Some(EventHit { time: te, state: ye }), stats });
            }
            g_prev = Some(if g_new == 0.0 { gp } else { g_new });
        }

        record_step(&mut traj, &opts.output, &mut pending_times, &dense, t, t_new, &y1, &mut eval, &mut stats)?;

        t = t_new;
        std::mem::swap(&mut y, &mut y1);
        std::mem::swap(&mut k1, &mut k7);

        if let Some(obs) = opts.observer.as_mut() {
            obs(t, &y).map_err(|reason| NumericsError::Aborted { t, reason })?;
        }

        if last {
            break;
        }
        let fac = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
        h = (h * fac).min(opts.max_step).min(t_end - t);
    }

    if matches!(opts.output, Output::Final) {
        traj.times.push(t);
        traj.states.push(y);
    }
    Ok(OdeSolution { trajectory: traj, event: None, stats })
}

#[allow(clippy::too_many_arguments)]
fn build_dense(
    t: f64,
    h: f64,
    y0: &[f64],
    y1: &[f64],
    k1: &[f64],
    k3: &[f64],
    k4: &[f64],
    k5: &[f64],
    k6: &[f64],
    k7: &[f64],
) -> DenseStep {
    let n = y0.len();
    let mut r2 = vec![0.0; n];
    let mut r3 = vec![0.0; n];
    let mut r4 = vec![0.0; n];
    let mut r5 = vec![0.0; n];
    for i in 0..n {
        r2[i] = y1[i] - y0[i];
        r3[i] = h * k1[i] - r2[i];
        r4[i] = r2[i] - h * k7[i] - r3[i];
        r5[i] = h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
    }
    DenseStep { t0: t, h, r1: y0.to_vec(), r2, r3, r4, r5 }
}

#[allow(clippy::too_many_arguments)]
fn record_step<E>(
    traj: &mut Trajectory,
    output: &Output,
    pending: &mut std::collections::VecDeque<f64>,
    dense: &DenseStep,
    t_prev: f64,
    t_new: f64,
    y_new: &[f64],
    eval: &mut E,
    stats: &mut SolverStats,
) -> Result<(), NumericsError>
where
    E: FnMut(f64, &[f64], &mut [f64], &mut SolverStats) -> Result<(), NumericsError>,
{
    match output {
        Output::EveryStep => {
            if t_new > t_prev {
                let mut d = vec![0.0; y_new.len()];
                eval(t_new, y_new, &mut d, stats)?;
                traj.times.push(t_new);
                traj.states.push(y_new.to_vec());
                traj.derivatives.push(d);
            }
        }
        Output::Times(_) => {
            while let Some(&s) = pending.front() {
                if s > t_new {
                    break;
                }
                pending.pop_front();
                if s <= t_prev {
                    continue;
                }
                let mut ys = vec![0.0; y_new.len()];
                if s == t_new {
                    ys.copy_from_slice(y_new);
                } else {
                    dense.eval(s, &mut ys);
                }
                traj.times.push(s);
                traj.states.push(ys);
            }
        }
        Output::Final => {}
    }
    Ok(())
}

fn initial_guess(y: &[f64], f: &[f64], ctrl: &StepControl, span: f64) -> f64 {
    let n = y.len().max(1) as f64;
    let mut d0 = 0.0;
    let mut d1 = 0.0;
    for i in 0..y.len() {
        let sc = ctrl.abs_tol + ctrl.rel_tol * y[i].abs();
        d0 += (y[i] / sc).powi(2);
        d1 += (f[i] / sc).powi(2);
    }
    let (d0, d1) = ((d0 / n).sqrt(), (d1 / n).sqrt());
    let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    h.min(span)
}
