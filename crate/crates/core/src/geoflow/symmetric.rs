//! Symmetric flowlines started on the equator, traced backwards along the
//! structure field, together with the accumulated plane coordinates `(a, b)`
//! and their derivatives with respect to the starting abscissa `x0`.

use rayon::prelude::*;
use serde::Serialize;

use super::group::Alpha;
use super::period::{beta_from_x0, period_closed_form, period_numeric};
use super::GeoError;
use crate::numerics::{solve_ode, OdeOptions, StepControl};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SymmetricFlowState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub a: f64,
    pub b: f64,
    /// `(x̄, ȳ, z̄, ā, b̄)`: derivatives with respect to `x0`.
    pub bars: Option<[f64; 5]>,
}

fn control() -> StepControl {
    StepControl { initial_step: 1e-4, abs_tol: 1e-13, rel_tol: 1e-13, max_steps: 2_000_000 }
}

fn half_period(x0: f64, alpha: Alpha) -> Result<f64, GeoError> {
    let beta = beta_from_x0(x0, alpha)?;
    let a = alpha.value();
    let rec = if a == 1.0 || a == 0.5 { period_closed_form(alpha, beta)? } else { period_numeric(alpha, beta)? };
    Ok(0.5 * rec.period)
}

/// Right-hand side of the symmetric system, optionally extended by the
/// variational equations and by `I′ = y²`.
fn rhs(a: f64, y: &[f64], d: &mut [f64]) {
    let (x, yy, z, pa, pb) = (y[0], y[1], y[2], y[3], y[4]);
    d[0] = -x * z;
    d[1] = a * yy * z;
    d[2] = x * x - a * yy * yy;
    d[3] = 2.0 * x + pa * z;
    d[4] = 2.0 * yy - a * pb * z;
    d[5] = yy * yy;
    if y.len() > 6 {
        let (xb, yb, zb, ab, bb) = (y[6], y[7], y[8], y[9], y[10]);
        d[6] = -x * zb - z * xb;
        d[7] = a * yy * zb + a * z * yb;
        d[8] = 2.0 * x * xb - 2.0 * a * yy * yb;
        d[9] = 2.0 * xb + ab * z + pa * zb;
        d[10] = 2.0 * yb - a * bb * z - a * pb * zb;
    }
}

struct RawRun {
    times: Vec<f64>,
    states: Vec<Vec<f64>>,
    rho: f64,
    half_period: f64,
}

fn run(x0: f64, alpha: Alpha, with_bars: bool) -> Result<RawRun, GeoError> {
    let a = alpha.require_positive()?;
    let hp = half_period(x0, alpha)?;
    let y0 = (1.0 - x0 * x0).sqrt();
    let mut init = vec![x0, y0, 0.0, 0.0, 0.0, 0.0];
    if with_bars {
        init.extend_from_slice(&[1.0, -x0 / y0, 0.0, 0.0, 0.0]);
    }
    let sol = solve_ode(|_, y, d| rhs(a, y, d), &init, (0.0, 10.0 * hp), &control(), OdeOptions::default().event(|_, y| y[2]))?;
    let hit = sol
        .event
        .ok_or_else(|| GeoError::Detection(format!("z did not return to 0 within 10 half periods (x0={x0})")))?;
    let rho = hit.time;
    if (rho - hp).abs() > 1e-6 {
        return Err(GeoError::Detection(format!("z-return time {rho} disagrees with half period {hp} (x0={x0})")));
    }
    Ok(RawRun { times: sol.trajectory.times, states: sol.trajectory.states, rho, half_period: hp })
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricRun {
    pub x0: f64,
    pub alpha: f64,
    pub rho: f64,
    /// `P(β(x0))/2`, for comparison with `rho`.
    pub half_period: f64,
    pub times: Vec<f64>,
    pub states: Vec<SymmetricFlowState>,
    pub min_a_prime: f64,
    pub min_b_prime: f64,
    /// Extremes over the open interval `(0, ρ)`.
    pub min_z_interior: f64,
    pub max_z_second_interior: f64,
    /// `max |b − (2/y)∫₀ᵗ y²|`.
    pub integral_form_residual: f64,
}

impl SymmetricRun {
    pub fn end(&self) -> &SymmetricFlowState {
        self.states.last().expect("runs are never empty")
    }
}

fn state_of(s: &[f64]) -> SymmetricFlowState {
    SymmetricFlowState {
        x: s[0],
        y: s[1],
        z: s[2],
        a: s[3],
        b: s[4],
        bars: if s.len() > 6 { Some([s[6], s[7], s[8], s[9], s[10]]) } else { None },
    }
}

fn summarize(x0: f64, a: f64, raw: &RawRun) -> SymmetricRun {
    let mut out = SymmetricRun {
        x0,
        alpha: a,
        rho: raw.rho,
        half_period: raw.half_period,
        times: raw.times.clone(),
        states: raw.states.iter().map(|s| state_of(s)).collect(),
        min_a_prime: f64::INFINITY,
        min_b_prime: f64::INFINITY,
        min_z_interior: f64::INFINITY,
        max_z_second_interior: f64::NEG_INFINITY,
        integral_form_residual: 0.0,
    };
    let last = raw.times.len() - 1;
    for (i, s) in raw.states.iter().enumerate() {
        let (x, y, z, pa, pb, integral) = (s[0], s[1], s[2], s[3], s[4], s[5]);
        if i > 0 {
            out.min_a_prime = out.min_a_prime.min(2.0 * x + pa * z);
            out.min_b_prime = out.min_b_prime.min(2.0 * y - a * pb * z);
        }
        if i > 0 && i < last {
            out.min_z_interior = out.min_z_interior.min(z);
            out.max_z_second_interior = out.max_z_second_interior.max(-2.0 * z * (x * x + a * y * y));
        }
        out.integral_form_residual = out.integral_form_residual.max((pb - 2.0 * integral / y).abs());
    }
    out
}

/// Backward flow from `(x0, √(1−x0²), 0)` until `z` returns to zero.
pub fn symmetric_system(x0: f64, alpha: Alpha) -> Result<SymmetricRun, GeoError> {
    let raw = run(x0, alpha, false)?;
    Ok(summarize(x0, alpha.value(), &raw))
}

#[derive(Debug, Clone, Serialize)]
pub struct VariationalRun {
    pub base: SymmetricRun,
    /// `max |x x̄ + y ȳ + z z̄|`.
    pub sphere_residual: f64,
    /// `max |a x − α b y − 2z|`.
    pub reciprocity_residual: f64,
    /// `max |x ā + y b̄|`.
    pub orthogonality_residual: f64,
    pub drho_dx0: f64,
    pub da_dx0: f64,
    pub db_dx0: f64,
}

/// The symmetric system extended by its `x0`-derivatives.
pub fn variational_system(x0: f64, alpha: Alpha) -> Result<VariationalRun, GeoError> {
    let a = alpha.require_positive()?;
    let raw = run(x0, alpha, true)?;
    let mut sphere: f64 = 0.0;
    let mut recip: f64 = 0.0;
    let mut orth: f64 = 0.0;
    for s in &raw.states {
        let (x, y, z, pa, pb) = (s[0], s[1], s[2], s[3], s[4]);
        let (xb, yb, zb, ab, bb) = (s[6], s[7], s[8], s[9], s[10]);
        sphere = sphere.max((x * xb + y * yb + z * zb).abs());
        recip = recip.max((pa * x - a * pb * y - 2.0 * z).abs());
        orth = orth.max((x * ab + y * bb).abs());
    }
    let end = raw.states.last().expect("nonempty");
    let mut d = vec![0.0; end.len()];
    rhs(a, end, &mut d);
    let drho = -end[8] / d[2];
    let da = end[9] + d[3] * drho;
    let db = end[10] + d[4] * drho;
    Ok(VariationalRun {
        base: summarize(x0, a, &raw),
        sphere_residual: sphere,
        reciprocity_residual: recip,
        orthogonality_residual: orth,
        drho_dx0: drho,
        da_dx0: da,
        db_dx0: db,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundingBoxVerdict {
    pub x0: f64,
    pub rho: f64,
    pub min_a_prime: f64,
    pub min_b_prime: f64,
    pub pass: bool,
}

/// For each `x0`, the minima of `a′` and `b′` over `(0, ρ]`; passes when both
/// exceed `−1e-10`. Results are in grid order.
pub fn bounding_box_scan(alpha: Alpha, x0_grid: &[f64]) -> Result<Vec<BoundingBoxVerdict>, GeoError> {
    x0_grid
        .par_iter()
        .map(|&x0| {
            let r = symmetric_system(x0, alpha)?;
            Ok(BoundingBoxVerdict {
                x0,
                rho: r.rho,
                min_a_prime: r.min_a_prime,
                min_b_prime: r.min_b_prime,
                pass: r.min_a_prime > -1e-10 && r.min_b_prime > -1e-10,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundaryPoint {
    pub x0: f64,
    pub a: f64,
    pub b: f64,
    pub da_dx0: f64,
    pub db_dx0: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundaryCurve {
    pub alpha: f64,
    pub points: Vec<BoundaryPoint>,
    /// Finite-difference slopes of `a(ρ)` all positive.
    pub a_increasing: bool,
    /// Finite-difference slopes of `b(ρ)` all nonpositive.
    pub b_nonincreasing: bool,
}

/// Endpoints `(a(ρ), b(ρ))` of perfect symmetric flowlines over `x0_grid`.
pub fn boundary_curve(alpha: Alpha, x0_grid: &[f64]) -> Result<BoundaryCurve, GeoError> {
    let points: Vec<BoundaryPoint> = x0_grid
        .par_iter()
        .map(|&x0| {
            let v = variational_system(x0, alpha)?;
            let e = v.base.end();
            Ok(BoundaryPoint { x0, a: e.a, b: e.b, da_dx0: v.da_dx0, db_dx0: v.db_dx0 })
        })
        .collect::<Result<_, GeoError>>()?;
    let a_increasing = points.windows(2).all(|w| w[1].a > w[0].a);
    let b_nonincreasing = points.windows(2).all(|w| w[1].b <= w[0].b);
    Ok(BoundaryCurve { alpha: alpha.value(), points, a_increasing, b_nonincreasing })
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GPoint {
    pub x0: f64,
    pub dp_dx0: f64,
    pub g: f64,
    /// Richardson correction is not small against the margin `|G|`.
    pub inconclusive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct GCheck {
    pub points: Vec<GPoint>,
    pub all_negative: bool,
    pub all_dp_positive: bool,
    pub any_inconclusive: bool,
}

/// `G(x0) = dP/dx0 − π(1/(2√x0) + 2x0√x0/(1 − x0²))` for `α = 1/2`, with
/// `dP/dx0` from Richardson-extrapolated central differences of the closed form.
pub fn g_function_check(x0_grid: &[f64]) -> Result<GCheck, GeoError> {
    let alpha = Alpha::new(0.5)?;
    let p = |x0: f64| -> Result<f64, GeoError> { Ok(period_closed_form(alpha, beta_from_x0(x0, alpha)?)?.period) };
    let h = 1e-5;
    let mut points = Vec::with_capacity(x0_grid.len());
    for &x0 in x0_grid {
        let d1 = (p(x0 + h)? - p(x0 - h)?) / (2.0 * h);
        let d2 = (p(x0 + 0.5 * h)? - p(x0 - 0.5 * h)?) / h;
        let dp = (4.0 * d2 - d1) / 3.0;
        let bound = std::f64::consts::PI * (0.5 / x0.sqrt() + 2.0 * x0 * x0.sqrt() / (1.0 - x0 * x0));
        let g = dp - bound;
        let noise = (d2 - d1).abs();
        points.push(GPoint { x0, dp_dx0: dp, g, inconclusive: noise > 0.1 * g.abs() || noise > 0.1 * dp.abs() });
    }
    Ok(GCheck {
        all_negative: points.iter().all(|q| q.g < 0.0),
        all_dp_positive: points.iter().all(|q| q.dp_dx0 > 0.0),
        any_inconclusive: points.iter().any(|q| q.inconclusive),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Alpha {
        Alpha::new(0.5).unwrap()
    }

    #[test]
    fn return_time_is_half_period() {
        let r = symmetric_system(0.8, half()).unwrap();
        let beta = beta_from_x0(0.8, half()).unwrap();
        let p = period_closed_form(half(), beta).unwrap().period;
        assert!((r.rho - 0.5 * p).abs() < 1e-6);
        assert!(r.end().z.abs() < 1e-10);
    }

    #[test]
    fn convexity_facts_on_open_interval() {
        let r = symmetric_system(0.8, half()).unwrap();
        assert!(r.min_a_prime > 0.0);
        assert!(r.min_z_interior > 0.0);
        assert!(r.max_z_second_interior < 0.0);
    }

    #[test]
    fn integral_form_of_b() {
        for x0 in [0.65, 0.8, 0.95] {
            let r = symmetric_system(x0, half()).unwrap();
            assert!(r.integral_form_residual < 1e-7, "{}", r.integral_form_residual);
        }
    }

    #[test]
    fn variational_identities() {
        for a in [0.25, 1.0] {
            let v = variational_system(0.8, Alpha::new(a).unwrap()).unwrap();
            assert!(v.sphere_residual < 1e-8 && v.reciprocity_residual < 1e-8 && v.orthogonality_residual < 1e-8, "{v:?}");
        }
    }

    #[test]
    fn variational_derivatives_match_finite_differences() {
        let h = 1e-5;
        let v = variational_system(0.8, half()).unwrap();
        let p = symmetric_system(0.8 + h, half()).unwrap();
        let m = symmetric_system(0.8 - h, half()).unwrap();
        let da = (p.end().a - m.end().a) / (2.0 * h);
        let db = (p.end().b - m.end().b) / (2.0 * h);
        let drho = (p.rho - m.rho) / (2.0 * h);
        assert!((da - v.da_dx0).abs() < 1e-5, "{da} vs {}", v.da_dx0);
        assert!((db - v.db_dx0).abs() < 1e-5, "{db} vs {}", v.db_dx0);
        assert!((drho - v.drho_dx0).abs() < 1e-5);
    }

    #[test]
    fn return_time_derivative_is_half_period_slope() {
        let x0 = 0.8;
        let v = variational_system(x0, half()).unwrap();
        let g = g_function_check(&[x0]).unwrap();
        assert!(v.base.end().bars.unwrap()[2] > 0.0);
        assert!((v.drho_dx0 - 0.5 * g.points[0].dp_dx0).abs() < 1e-6);
    }

    #[test]
    fn admissible_range() {
        assert!(symmetric_system(0.5, half()).is_err());
        assert!(symmetric_system(1.0, half()).is_err());
    }

    #[test]
    fn g_function_sign() {
        let r = g_function_check(&[0.59, 0.7, 0.9, 0.995]).unwrap();
        assert!(r.all_negative && r.all_dp_positive && !r.any_inconclusive, "{r:?}");
    }
}
