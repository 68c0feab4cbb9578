use serde::Serialize;

use super::group::{group_mul, one_parameter_element, structure_field, Alpha, GroupPoint, UnitTangent};
use super::GeoError;
use crate::numerics::{solve_ode, OdeOptions, Output, StepControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    Forward,
    Backward,
}

impl Direction {
    fn sign(self) -> f64 {
        match self {
            Direction::Forward => 1.0,
            Direction::Backward => -1.0,
        }
    }
}

/// Integral curve of `±Σ_α` on the unit sphere.
#[derive(Debug, Clone, Serialize)]
pub struct Flowline {
    pub times: Vec<f64>,
    pub tangents: Vec<UnitTangent>,
    /// `|H(t) − H(0)| / |H(0)|` with `H = |x|^α y` (absolute drift when `H(0) = 0`).
    pub h_drift: Vec<f64>,
    /// `| |v(t)| − 1 |`.
    pub norm_drift: Vec<f64>,
}

impl Flowline {
    pub fn max_h_drift(&self) -> f64 {
        self.h_drift.iter().copied().fold(0.0, f64::max)
    }

    pub fn max_norm_drift(&self) -> f64 {
        self.norm_drift.iter().copied().fold(0.0, f64::max)
    }
}

fn level(v: [f64; 3], a: f64) -> f64 {
    v[0].abs().powf(a) * v[1]
}

fn flow_control() -> StepControl {
    StepControl { initial_step: 1e-3, abs_tol: 1e-13, rel_tol: 1e-13, max_steps: 5_000_000 }
}

pub fn flow_tangent(v0: UnitTangent, alpha: Alpha, t_end: f64, direction: Direction) -> Result<Flowline, GeoError> {
    let a = alpha.value();
    let sgn = direction.sign();
    let y0 = v0.to_array();
    let (times, states) = if t_end > 0.0 {
        let sol = solve_ode(
            |_, y, d| {
                let s = structure_field([y[0], y[1], y[2]], alpha);
                for i in 0..3 {
                    d[i] = sgn * s[i];
                }
            },
            &y0,
            (0.0, t_end),
            &flow_control(),
            OdeOptions::default(),
        )?;
        (sol.trajectory.times, sol.trajectory.states)
    } else {
        (vec![0.0], vec![y0.to_vec()])
    };
    let h0 = level(y0, a);
    let mut out = Flowline { times, tangents: Vec::new(), h_drift: Vec::new(), norm_drift: Vec::new() };
    for s in &states {
        let v = [s[0], s[1], s[2]];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let dh = (level(v, a) - h0).abs();
        out.h_drift.push(if h0 != 0.0 { dh / h0.abs() } else { dh });
        out.norm_drift.push((n - 1.0).abs());
        out.tangents.push(UnitTangent { x: v[0], y: v[1], z: v[2] });
    }
    Ok(out)
}

/// Unit-speed geodesic from the identity with initial tangent `v0`.
#[derive(Debug, Clone, Serialize)]
pub struct GeodesicPath {
    pub times: Vec<f64>,
    pub tangents: Vec<UnitTangent>,
    pub positions: Vec<GroupPoint>,
}

impl GeodesicPath {
    pub fn endpoint(&self) -> GroupPoint {
        *self.positions.last().expect("paths are never empty")
    }
}

fn geodesic_field(alpha: Alpha) -> impl Fn(f64, &[f64], &mut [f64]) {
    let a = alpha.value();
    move |_, y, d| {
        let s = structure_field([y[0], y[1], y[2]], alpha);
        d[..3].copy_from_slice(&s);
        d[3] = y[0] * y[5].exp();
        d[4] = y[1] * (-a * y[5]).exp();
        d[5] = y[2];
    }
}

/// Integrates tangent and position together. With `full = false` only the
/// endpoints are kept.
pub(crate) fn geodesic_with(v0: UnitTangent, alpha: Alpha, t_end: f64, full: bool, ctrl: &StepControl) -> Result<GeodesicPath, GeoError> {
    if !(t_end >= 0.0) {
        return Err(GeoError::Domain { name: "T", value: t_end, range: "[0, inf)".into() });
    }
    let y0 = [v0.x, v0.y, v0.z, 0.0, 0.0, 0.0];
    let (times, states) = if t_end == 0.0 {
        (vec![0.0], vec![y0.to_vec()])
    } else {
        let out = if full { Output::EveryStep } else { Output::Final };
        let sol = solve_ode(geodesic_field(alpha), &y0, (0.0, t_end), ctrl, OdeOptions::default().output(out))?;
        (sol.trajectory.times, sol.trajectory.states)
    };
    Ok(GeodesicPath {
        times,
        tangents: states.iter().map(|s| UnitTangent { x: s[0], y: s[1], z: s[2] }).collect(),
        positions: states.iter().map(|s| GroupPoint::new(s[3], s[4], s[5])).collect(),
    })
}

pub fn geodesic(v0: UnitTangent, alpha: Alpha, t_end: f64) -> Result<GeodesicPath, GeoError> {
    geodesic_with(v0, alpha, t_end, true, &flow_control())
}

/// Largest `| |(ẋe^{−z}, ẏe^{αz}, ż)| − 1 |` along the path, with the velocity
/// taken from the frame ODE at each sample.
pub fn metric_speed_defect(path: &GeodesicPath, alpha: Alpha) -> f64 {
    let a = alpha.value();
    path.tangents
        .iter()
        .zip(&path.positions)
        .map(|(v, p)| {
            let (dx, dy, dz) = (v.x * p.z.exp(), v.y * (-a * p.z).exp(), v.z);
            let s = ((dx * (-p.z).exp()).powi(2) + (dy * (a * p.z).exp()).powi(2) + dz * dz).sqrt();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}

/// Ordered product of exact one-parameter elements along the flowline,
/// `(ελ_0)∗…∗(ελ_n)`, with each factor taken at the midpoint tangent of its
/// sub-interval. The flowline itself is advanced by classical RK4.
pub fn concatenation_endpoint(v0: UnitTangent, alpha: Alpha, t_end: f64, n_steps: usize) -> GroupPoint {
    let eps = t_end / n_steps as f64;
    let f = |v: [f64; 3]| structure_field(v, alpha);
    let rk4 = |v: [f64; 3], h: f64| {
        let add = |p: [f64; 3], q: [f64; 3], s: f64| [p[0] + s * q[0], p[1] + s * q[1], p[2] + s * q[2]];
        let k1 = f(v);
        let k2 = f(add(v, k1, 0.5 * h));
        let k3 = f(add(v, k2, 0.5 * h));
        let k4 = f(add(v, k3, h));
        [
            v[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            v[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
            v[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
        ]
    };
    let mut v = v0.to_array();
    let mut p = GroupPoint::IDENTITY;
    for _ in 0..n_steps {
        let mid = rk4(v, 0.5 * eps);
        p = group_mul(p, one_parameter_element(mid, eps, alpha), alpha);
        v = rk4(mid, 0.5 * eps);
    }
    p
}

#[derive(Debug, Clone, Serialize)]
pub struct CylinderReport {
    /// Predicted constant `(1 + α)/(αβ²)`.
    pub predicted: f64,
    pub q: Vec<f64>,
    pub max_relative_drift: f64,
}

/// Evaluates the cylinder function along a geodesic from the identity whose
/// tangent lies on the loop level set of `V_β`:
/// `Q = W² + e^{2(z+δ)} + e^{−2α(z+δ)}/α`, with the affine coordinate `W` and
/// vertical offset `δ` fixed by the conserved momenta of the initial tangent.
/// For `v0 = V_β`, `δ = 0` and `W = −(x − √α·y − √K·√(1−β²))`.
pub fn cylinder_invariant(path: &GeodesicPath, alpha: Alpha, beta: f64) -> Result<CylinderReport, GeoError> {
    let a = alpha.require_positive()?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(GeoError::Domain { name: "beta", value: beta, range: "(0, 1]".into() });
    }
    let k = (1.0 + a) / (a * beta * beta);
    let v0 = path.tangents[0];
    let p0 = path.positions[0];
    if p0 != GroupPoint::IDENTITY {
        return Err(GeoError::Setup("path must start at the identity".into()));
    }
    if !(v0.x > 0.0 && v0.y > 0.0) {
        return Err(GeoError::Setup("initial tangent must lie in the positive quadrant".into()));
    }
    let h_path = v0.x.powf(a) * v0.y;
    let h_beta = beta.powf(1.0 + a) * a.powf(0.5 * a) / (1.0 + a).powf(0.5 * (1.0 + a));
    if ((h_path - h_beta) / h_beta).abs() > 1e-6 {
        return Err(GeoError::Setup(format!("tangent level {h_path} differs from level of V_beta {h_beta}")));
    }
    let sk = k.sqrt();
    let delta = 0.5 * (k * v0.x * v0.x).ln();
    let q: Vec<f64> = path
        .positions
        .iter()
        .map(|p| {
            let w = sk * (v0.z - v0.x * p.x + a * v0.y * p.y);
            let zd = p.z + delta;
            w * w + (2.0 * zd).exp() + (-2.0 * a * zd).exp() / a
        })
        .collect();
    if ((q[0] - k) / k).abs() > 1e-6 {
        return Err(GeoError::Setup(format!("initial cylinder value {} differs from predicted {k}", q[0])));
    }
    let max_relative_drift = q.iter().map(|v| ((v - q[0]) / q[0]).abs()).fold(0.0, f64::max);
    Ok(CylinderReport { predicted: k, q, max_relative_drift })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geoflow::period::{loop_vector, period_closed_form};

    fn half() -> Alpha {
        Alpha::new(0.5).unwrap()
    }

    #[test]
    fn equilibrium_flowline_is_constant() {
        let v = UnitTangent::normalized((0.5f64).sqrt(), 1.0, 0.0).unwrap();
        let f = flow_tangent(v, half(), 10.0, Direction::Forward).unwrap();
        let last = f.tangents.last().unwrap();
        assert!((last.x - v.x).abs() < 1e-14 && (last.y - v.y).abs() < 1e-14 && last.z.abs() < 1e-14);
    }

    #[test]
    fn level_set_conserved() {
        let v = UnitTangent::normalized(0.5, 0.6, 0.3).unwrap();
        let f = flow_tangent(v, half(), 50.0, Direction::Forward).unwrap();
        assert!(f.max_h_drift() < 1e-8, "{}", f.max_h_drift());
        assert!(f.max_norm_drift() < 1e-8);
    }

    #[test]
    fn flowline_is_symmetric_about_equator() {
        // Starting on z = 0, the flowline revisits z = 0 at half a period with the
        // mirror tangent; continuing the same time again closes the loop.
        let x0: f64 = 0.8;
        let v = UnitTangent::new(x0, (1.0 - x0 * x0).sqrt(), 0.0).unwrap();
        let beta = crate::geoflow::beta_from_x0(x0, half()).unwrap();
        let p = period_closed_form(half(), beta).unwrap().period;
        let f = flow_tangent(v, half(), p, Direction::Forward).unwrap();
        let end = f.tangents.last().unwrap();
        assert!((end.x - v.x).abs() < 1e-6 && (end.y - v.y).abs() < 1e-6 && end.z.abs() < 1e-6, "{end:?}");
        // Time reversal of the mirrored state retraces the forward flowline.
        let mid = f.times.iter().position(|&t| t > 0.3 * p).unwrap();
        let m = f.tangents[mid];
        let mirror = UnitTangent::new(m.x, m.y, -m.z).unwrap();
        let back = flow_tangent(mirror, half(), f.times[mid], Direction::Forward).unwrap();
        let b = back.tangents.last().unwrap();
        assert!((b.x - v.x).abs() < 1e-6 && (b.y - v.y).abs() < 1e-6 && b.z.abs() < 1e-6, "{b:?}");
    }

    #[test]
    fn vertical_geodesic_is_straight() {
        let g = geodesic(UnitTangent::new(0.0, 0.0, 1.0).unwrap(), half(), 3.0).unwrap();
        let e = g.endpoint();
        assert!(e.x.abs() < 1e-15 && e.y.abs() < 1e-15 && (e.z - 3.0).abs() < 1e-12);
    }

    #[test]
    fn frame_ode_matches_concatenation() {
        let v = UnitTangent::normalized(0.3, 0.7, -0.4).unwrap();
        let g = geodesic(v, half(), 5.0).unwrap();
        let c = concatenation_endpoint(v, half(), 5.0, 1_000_000);
        assert!(g.endpoint().distance(&c) < 1e-5, "{:?} vs {c:?}", g.endpoint());
    }

    #[test]
    fn positive_quadrant_endpoint() {
        let v = UnitTangent::normalized(0.2, 0.5, 0.8).unwrap();
        let e = geodesic(v, half(), 7.0).unwrap().endpoint();
        assert!(e.x > 0.0 && e.y > 0.0);
    }

    #[test]
    fn unit_metric_speed() {
        let v = UnitTangent::normalized(0.4, 0.2, 0.6).unwrap();
        let g = geodesic(v, Alpha::new(0.75).unwrap(), 10.0).unwrap();
        assert!(metric_speed_defect(&g, Alpha::new(0.75).unwrap()) < 1e-6);
    }

    #[test]
    fn reflections_commute_with_exponential() {
        let a = Alpha::new(0.6).unwrap();
        let v = UnitTangent::normalized(0.4, 0.5, 0.3).unwrap();
        let e = geodesic(v, a, 4.0).unwrap().endpoint();
        let ex = geodesic(UnitTangent::new(-v.x, v.y, v.z).unwrap(), a, 4.0).unwrap().endpoint();
        let ey = geodesic(UnitTangent::new(v.x, -v.y, v.z).unwrap(), a, 4.0).unwrap().endpoint();
        assert!((ex.x + e.x).abs() < 1e-9 && (ex.y - e.y).abs() < 1e-9 && (ex.z - e.z).abs() < 1e-9);
        assert!((ey.x - e.x).abs() < 1e-9 && (ey.y + e.y).abs() < 1e-9 && (ey.z - e.z).abs() < 1e-9);
    }

    #[test]
    fn cylinder_constancy_from_loop_vector() {
        let beta = 0.5;
        let v = loop_vector(half(), beta).unwrap();
        let g = geodesic(v, half(), 10.0).unwrap();
        let r = cylinder_invariant(&g, half(), beta).unwrap();
        assert!(((r.q[0] - 1.5 / (0.5 * 0.25)) / r.q[0]).abs() < 1e-10);
        assert!(r.max_relative_drift < 1e-6, "{}", r.max_relative_drift);
    }

    #[test]
    fn cylinder_from_other_point_on_the_loop() {
        let beta = 0.7;
        let v = loop_vector(half(), beta).unwrap();
        let f = flow_tangent(v, half(), 1.1, Direction::Forward).unwrap();
        let g = geodesic(*f.tangents.last().unwrap(), half(), 10.0).unwrap();
        let r = cylinder_invariant(&g, half(), beta).unwrap();
        assert!(r.max_relative_drift < 1e-6);
    }

    #[test]
    fn flat_direction_cylinder_is_exact() {
        let v = loop_vector(half(), 1.0).unwrap();
        let g = geodesic(v, half(), 10.0).unwrap();
        let r = cylinder_invariant(&g, half(), 1.0).unwrap();
        assert!(r.max_relative_drift < 1e-14, "{}", r.max_relative_drift);
    }

    #[test]
    fn wrong_level_is_a_setup_error() {
        let v = loop_vector(half(), 0.5).unwrap();
        let g = geodesic(v, half(), 1.0).unwrap();
        assert!(matches!(cylinder_invariant(&g, half(), 0.6), Err(GeoError::Setup(_))));
    }
}
