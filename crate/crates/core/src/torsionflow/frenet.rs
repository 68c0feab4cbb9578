use std::f64::consts::TAU;

use serde::Serialize;

use super::field::{CurvatureProfile, TorsionField};
use super::TorsionError;
use crate::numerics::{solve_ode, OdeOptions, Output, SpectralGrid, StepControl};

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn scale(a: Vec3, k: f64) -> Vec3 {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn unit(a: Vec3) -> Vec3 {
    scale(a, 1.0 / dot(a, a).sqrt())
}

/// Position and Frenet frame of a space curve at one arclength.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetState {
    pub position: Vec3,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
}

impl FrenetState {
    /// Frame at the origin aligned with the coordinate axes.
    pub const STANDARD: FrenetState =
        FrenetState { position: [0.0; 3], t: [1.0, 0.0, 0.0], n: [0.0, 1.0, 0.0], b: [0.0, 0.0, 1.0] };

    /// Largest entry of `FᵀF − I` for the frame matrix `F = [T N B]`.
    pub fn orthonormality_defect(&self) -> f64 {
        let f = [self.t, self.n, self.b];
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(f[i], f[j]) - target).abs());
            }
        }
        worst
    }

    fn to_array(self) -> [f64; 12] {
        let mut y = [0.0; 12];
        y[..3].copy_from_slice(&self.position);
        y[3..6].copy_from_slice(&self.t);
        y[6..9].copy_from_slice(&self.n);
        y[9..].copy_from_slice(&self.b);
        y
    }

    fn from_slice(y: &[f64]) -> Self {
        FrenetState {
            position: [y[0], y[1], y[2]],
            t: [y[3], y[4], y[5]],
            n: [y[6], y[7], y[8]],
            b: [y[9], y[10], y[11]],
        }
    }

    /// Gram–Schmidt in the order `T, N, B`.
    fn orthonormalized(self) -> Self {
        let t = unit(self.t);
        let n = unit(sub(self.n, scale(t, dot(self.n, t))));
        let b = unit(sub(sub(self.b, scale(t, dot(self.b, t))), scale(n, dot(self.b, n))));
        FrenetState { position: self.position, t, n, b }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpaceCurve {
    pub s: Vec<f64>,
    pub points: Vec<Vec3>,
    pub frames: Vec<FrenetState>,
    /// Largest orthonormality defect of the frame seen before each correction.
    pub max_drift: f64,
}

impl SpaceCurve {
    pub fn max_radius(&self) -> f64 {
        self.points.iter().map(|p| dot(*p, *p).sqrt()).fold(0.0, f64::max)
    }
}

/// Integrates `T′ = κN, N′ = −κT − τB, B′ = τN, r′ = T` with `κ` and `τ`
/// extended 2π-periodically by trigonometric interpolation. The frame is
/// projected back to an orthonormal one after every mesh-spacing chunk.
pub fn frenet_reconstruct(
    kappa: &CurvatureProfile,
    tau: &TorsionField,
    init: &FrenetState,
    s_span: (f64, f64),
) -> Result<SpaceCurve, TorsionError> {
    let n = tau.n();
    kappa.check_mesh(n)?;
    let defect = init.orthonormality_defect();
    if defect > 1e-10 {
        return Err(TorsionError::Frame(defect));
    }
    let (s0, s1) = s_span;
    if !(s1 > s0) {
        return Err(TorsionError::Grid(format!("empty arclength span [{s0}, {s1}]")));
    }
    let grid = SpectralGrid::new(n, TAU)?;
    let tau_c = grid.coefficients(tau.samples());
    let kappa_c = match kappa {
        CurvatureProfile::Constant(_) => None,
        CurvatureProfile::Samples(s) => Some(grid.coefficients(s)),
    };
    let kappa_at = |s: f64| match (&kappa_c, kappa) {
        (Some(c), _) => grid.evaluate(c, s),
        (None, CurvatureProfile::Constant(k)) => *k,
        _ => unreachable!(),
    };
    let field = |s: f64, y: &[f64], d: &mut [f64]| {
        let (k, t) = (kappa_at(s), grid.evaluate(&tau_c, s));
        for i in 0..3 {
            let (tt, nn, bb) = (y[3 + i], y[6 + i], y[9 + i]);
            d[i] = tt;
            d[3 + i] = k * nn;
            d[6 + i] = -k * tt - t * bb;
            d[9 + i] = t * nn;
        }
    };

    let ctrl = StepControl { initial_step: 1e-3, abs_tol: 1e-13, rel_tol: 1e-13, max_steps: 100_000 };
    let chunks = ((s1 - s0) / grid.spacing()).ceil().max(1.0) as usize;
    let h = (s1 - s0) / chunks as f64;
    let mut state = *init;
    let mut out = SpaceCurve { s: vec![s0], points: vec![init.position], frames: vec![*init], max_drift: defect };
    for c in 0..chunks {
        let (a, b) = (s0 + c as f64 * h, s0 + (c + 1) as f64 * h);
        let sol = solve_ode(field, &state.to_array(), (a, b), &ctrl, OdeOptions::default().output(Output::Final))?;
        let raw = FrenetState::from_slice(sol.trajectory.last_state());
        out.max_drift = out.max_drift.max(raw.orthonormality_defect());
        state = raw.orthonormalized();
        let after = state.orthonormality_defect();
        if !(after <= 1e-6) {
            return Err(TorsionError::Frame(after));
        }
        out.s.push(b);
        out.points.push(state.position);
        out.frames.push(state);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsionflow::stationary::{stationary_torsion, StationarySign};

    fn cross(a: Vec3, b: Vec3) -> Vec3 {
        [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
    }

    /// Constant κ, τ: the frame rotates rigidly about `D = −τT + κB`, so the
    /// tangent follows Rodrigues' formula and the position is its integral.
    fn helix_position(k: f64, t: f64, f0: &FrenetState, s: f64) -> Vec3 {
        let d = sub(scale(f0.b, k), scale(f0.t, t));
        let w = dot(d, d).sqrt();
        let axis = scale(d, 1.0 / w);
        let along = dot(axis, f0.t);
        let perp = sub(f0.t, scale(axis, along));
        let kx = cross(axis, f0.t);
        let mut p = f0.position;
        for i in 0..3 {
            p[i] += axis[i] * along * s + perp[i] * (w * s).sin() / w + kx[i] * (1.0 - (w * s).cos()) / w;
        }
        p
    }

    #[test]
    fn unit_helix() {
        let tau = TorsionField::constant(64, 1.0).unwrap();
        let curve = frenet_reconstruct(&CurvatureProfile::Constant(1.0), &tau, &FrenetState::STANDARD, (0.0, 4.0 * TAU)).unwrap();
        for (s, p) in curve.s.iter().zip(&curve.points) {
            let q = helix_position(1.0, 1.0, &FrenetState::STANDARD, *s);
            assert!(sub(*p, q).iter().all(|e| e.abs() < 1e-6), "s={s}");
        }
        // Radius κ/(κ²+τ²) = 1/2 about the axis through the centre of curvature.
        let axis = unit([-1.0, 0.0, 1.0]);
        let centre = [0.0, 0.5, 0.0];
        for p in &curve.points {
            let r = sub(*p, centre);
            let radial = sub(r, scale(axis, dot(r, axis)));
            assert!((dot(radial, radial).sqrt() - 0.5).abs() < 1e-6);
        }
    }

    #[test]
    fn frame_stays_orthonormal() {
        let tau = TorsionField::from_fn(64, |s| 1.0 + 0.3 * s.cos()).unwrap();
        let kappa = CurvatureProfile::from_fn(64, |s| 1.0 + 0.2 * s.sin()).unwrap();
        let curve = frenet_reconstruct(&kappa, &tau, &FrenetState::STANDARD, (0.0, 2.0 * TAU)).unwrap();
        assert!(curve.max_drift < 1e-8, "{}", curve.max_drift);
    }

    fn diameter(points: &[Vec3]) -> f64 {
        let mut d: f64 = 0.0;
        for p in points {
            for q in points {
                d = d.max(dot(sub(*p, *q), sub(*p, *q)).sqrt());
            }
        }
        d
    }

    #[test]
    fn stationary_curve_is_bounded() {
        // τ has period π; the frame at s = π is the rotation from the standard
        // frame, and its axis is the drift direction of the curve.
        let tau = stationary_torsion(256, 3.0, 0.0, StationarySign::Plus).unwrap();
        let curve = frenet_reconstruct(&CurvatureProfile::Constant(1.0), &tau, &FrenetState::STANDARD, (0.0, 4.0 * TAU)).unwrap();
        assert!(curve.max_drift < 1e-8, "{}", curve.max_drift);
        let i = curve.s.iter().position(|s| (s - std::f64::consts::PI).abs() < 1e-9).unwrap();
        let f = curve.frames[i];
        let axis = unit([f.n[2] - f.b[1], f.b[0] - f.t[2], f.t[1] - f.n[0]]);
        let flat: Vec<Vec3> = curve.points.iter().map(|p| sub(*p, scale(axis, dot(*p, axis)))).collect();
        let half = flat.len() / 2;
        let (early, late) = (diameter(&flat[..=half]), diameter(&flat[half..]));
        assert!(early < 4.0 && late < early * 1.05, "{early} {late}");
    }

    #[test]
    fn rejects_skewed_frame() {
        let mut f = FrenetState::STANDARD;
        f.n = [0.1, 1.0, 0.0];
        let tau = TorsionField::constant(32, 1.0).unwrap();
        assert!(matches!(frenet_reconstruct(&CurvatureProfile::Constant(1.0), &tau, &f, (0.0, 1.0)), Err(TorsionError::Frame(_))));
    }
}
