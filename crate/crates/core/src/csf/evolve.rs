use serde::Serialize;

use super::curve::{norm, signed_area, sub, PlaneCurve, Point};
use super::diagnostics::{curve_geometry, find_double_point, split_lobes, Crossing, EightDiagnostics};
use super::CsfError;

/// Conditions ending a run; the singularity guard `k_max·h_min > 0.5` is
/// always active.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct StopRule {
    pub t_end: Option<f64>,
    pub k_max: Option<f64>,
    pub area_floor: Option<f64>,
}

impl StopRule {
    pub fn time(t: f64) -> Self {
        Self { t_end: Some(t), ..Self::default() }
    }

    pub fn singularity() -> Self {
        Self::default()
    }
}

/// `dt = cfl·h_min²/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DtPolicy {
    pub cfl: f64,
}

impl Default for DtPolicy {
    fn default() -> Self {
        Self { cfl: 0.4 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum FramePolicy {
    /// A frame every `dt` of flow time.
    Interval(f64),
    /// A frame each time the total area falls by the factor `r < 1`.
    AreaRatio(f64),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub enum Symmetry {
    #[default]
    Free,
    /// Project onto curves symmetric under both axis reflections after every
    /// step. Needs a symmetric initial eight with point 0 on the double point
    /// and `n` divisible by 4; suppresses the growth of rounding asymmetry.
    BothAxes,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvolveOptions {
    pub dt: DtPolicy,
    pub frames: FramePolicy,
    pub symmetry: Symmetry,
}

impl EvolveOptions {
    pub fn new(frames: FramePolicy) -> Self {
        Self { dt: DtPolicy::default(), frames, symmetry: Symmetry::Free }
    }

    pub fn symmetric(mut self) -> Self {
        self.symmetry = Symmetry::BothAxes;
        self
    }
}

/// Largest deviation of `p_i` from the images of `p_{n/2−i}`, `p_{n/2+i}`,
/// `p_{n−i}` under reflection in the x-axis, the y-axis, and both.
pub fn symmetry_defect(points: &[Point]) -> f64 {
    let n = points.len();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let p = points[i];
        let a = points[(n / 2 + n - i) % n];
        let b = points[(n / 2 + i) % n];
        let c = points[(n - i) % n];
        for d in [sub(p, [a[0], -a[1]]), sub(p, [-b[0], b[1]]), sub(p, [-c[0], -c[1]])] {
            worst = worst.max(norm(d));
        }
    }
    worst
}

fn symmetrize(points: &[Point], out: &mut [Point]) {
    let n = points.len();
    for i in 0..n {
        let p = points[i];
        let a = points[(n / 2 + n - i) % n];
        let b = points[(n / 2 + i) % n];
        let c = points[(n - i) % n];
        out[i] = [0.25 * (p[0] + a[0] - b[0] - c[0]), 0.25 * (p[1] - a[1] + b[1] - c[1])];
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StopReason {
    TimeReached,
    CurvatureThreshold,
    AreaFloor,
    /// `k_max·h_min` exceeded 0.5: singularity reached at this resolution.
    Singularity,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::TimeReached => "time reached",
            StopReason::CurvatureThreshold => "curvature threshold",
            StopReason::AreaFloor => "area floor",
            StopReason::Singularity => "singularity reached",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CsfFrame {
    pub curve: PlaneCurve,
    pub diagnostics: EightDiagnostics,
}

#[derive(Debug, Clone)]
pub struct CsfRun {
    pub frames: Vec<CsfFrame>,
    pub reason: StopReason,
    pub steps: usize,
}

impl CsfRun {
    pub fn diagnostics(&self) -> Vec<EightDiagnostics> {
        self.frames.iter().map(|f| f.diagnostics.clone()).collect()
    }
}

pub const SINGULARITY_LIMIT: f64 = 0.5;

/// Crossing search restricted to segments near a previous crossing, with a
/// global search as fallback.
fn track_crossing(points: &[Point], prev: Option<Crossing>) -> Option<Crossing> {
    let n = points.len();
    if let Some(p) = prev {
        let seg = |i: usize| (points[i % n], points[(i + 1) % n]);
        for di in 0..=6 {
            for dj in 0..=6 {
                let i = (p.i + n + di - 3) % n;
                let j = (p.j + n + dj - 3) % n;
                let (a, b) = seg(i);
                let (c, d) = seg(j);
                if let Some(x) = proper_crossing(a, b, c, d) {
                    return Some(Crossing { i: i.min(j), j: i.max(j), point: x });
                }
            }
        }
    }
    find_double_point(points)
}

fn proper_crossing(a: Point, b: Point, c: Point, d: Point) -> Option<Point> {
    let r = sub(b, a);
    let s = sub(d, c);
    let den = r[0] * s[1] - r[1] * s[0];
    if den == 0.0 {
        return None;
    }
    let q = sub(c, a);
    let t = (q[0] * s[1] - q[1] * s[0]) / den;
    let u = (q[0] * r[1] - q[1] * r[0]) / den;
    ((0.0..1.0).contains(&t) && (0.0..1.0).contains(&u)).then(|| [a[0] + t * r[0], a[1] + t * r[1]])
}

fn total_area(points: &[Point], crossing: Option<Crossing>) -> f64 {
    match crossing {
        None => signed_area(points).abs(),
        Some(x) => split_lobes(points, &x).iter().map(|l| signed_area(l).abs()).sum(),
    }
}

/// Explicit front tracking for `∂C/∂t = kN`: each vertex moves by its
/// discrete curvature vector, then the polygon is resampled to uniform
/// arclength with point 0 held fixed in index.
pub fn csf_evolve(c0: &PlaneCurve, stop: StopRule, opts: &EvolveOptions) -> Result<CsfRun, CsfError> {
    let (dt_policy, frames) = (opts.dt, opts.frames);
    if !(dt_policy.cfl > 0.0 && dt_policy.cfl <= 1.0) {
        return Err(CsfError::Domain { name: "cfl", value: dt_policy.cfl });
    }
    match frames {
        FramePolicy::Interval(dt) if !(dt > 0.0) => return Err(CsfError::Domain { name: "frame interval", value: dt }),
        FramePolicy::AreaRatio(r) if !(r > 0.0 && r < 1.0) => {
            return Err(CsfError::Domain { name: "area ratio", value: r })
        }
        _ => {}
    }
    let n = c0.len();
    let symmetric = opts.symmetry == Symmetry::BothAxes;
    if symmetric {
        let size = c0.points().iter().fold(0.0f64, |m, p| m.max(norm(*p)));
        let defect = symmetry_defect(c0.points());
        if !n.is_multiple_of(4) || defect > 1e-9 * size {
            return Err(CsfError::Diagnostic(format!("initial curve is not doubly symmetric (defect {defect:e})")));
        }
    }
    let mut scratch = vec![[0.0; 2]; n];
    let orientation = c0.orientation;
    let mut pts = c0.points().to_vec();
    let mut t = 0.0;
    let mut crossing = find_double_point(&pts);
    let mut out = vec![CsfFrame { curve: c0.clone(), diagnostics: curve_geometry(c0, 0.0)? }];
    let mut next_time = match frames {
        FramePolicy::Interval(dt) => dt,
        FramePolicy::AreaRatio(_) => f64::INFINITY,
    };
    let mut next_area = match frames {
        FramePolicy::AreaRatio(r) => out[0].diagnostics.total_area * r,
        FramePolicy::Interval(_) => 0.0,
    };
    let mut vel = vec![[0.0; 2]; n];
    let mut steps = 0usize;
    let record = |pts: &[Point], t: f64, out: &mut Vec<CsfFrame>| -> Result<(), CsfError> {
        let curve = PlaneCurve::with_orientation(pts.to_vec(), Some(orientation))?;
        let diagnostics = curve_geometry(&curve, t)?;
        out.push(CsfFrame { curve, diagnostics });
        Ok(())
    };
    let reason = loop {
        let mut h_min = f64::INFINITY;
        let mut k_max: f64 = 0.0;
        for i in 0..n {
            let p0 = pts[(i + n - 1) % n];
            let p1 = pts[i];
            let p2 = pts[(i + 1) % n];
            let (a, b, chord) = (sub(p1, p0), sub(p2, p1), sub(p2, p0));
            let (la, lb, lc) = (norm(a), norm(b), norm(chord));
            let k = 2.0 * (a[0] * b[1] - a[1] * b[0]) / (la * lb * lc);
            vel[i] = [-k * chord[1] / lc, k * chord[0] / lc];
            h_min = h_min.min(lb);
            k_max = k_max.max(k.abs());
        }
        if !k_max.is_finite() {
            return Err(CsfError::NonFinite { t });
        }
        if k_max * h_min > SINGULARITY_LIMIT {
            break StopReason::Singularity;
        }
        if stop.k_max.is_some_and(|k| k_max >= k) {
            break StopReason::CurvatureThreshold;
        }
        if stop.t_end.is_some_and(|te| t >= te) {
            break StopReason::TimeReached;
        }
        let mut dt = 0.5 * dt_policy.cfl * h_min * h_min;
        let mut hit_frame = false;
        if next_time - t <= dt * (1.0 + 1e-9) {
            dt = next_time - t;
            hit_frame = true;
        }
        if let Some(te) = stop.t_end {
            if te - t <= dt {
                dt = te - t;
            }
        }
        for (p, v) in pts.iter_mut().zip(&vel) {
            p[0] += dt * v[0];
            p[1] += dt * v[1];
        }
        pts = super::curve::resample_uniform(&pts, n);
        if symmetric {
            symmetrize(&pts, &mut scratch);
            std::mem::swap(&mut pts, &mut scratch);
        }
        t += dt;
        steps += 1;
        if pts.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(CsfError::NonFinite { t });
        }
        crossing = track_crossing(&pts, crossing);
        let area = total_area(&pts, crossing);
        if hit_frame {
            if let FramePolicy::Interval(dt_out) = frames {
                record(&pts, t, &mut out)?;
                next_time += dt_out;
            }
        }
        if let FramePolicy::AreaRatio(r) = frames {
            if area <= next_area {
                record(&pts, t, &mut out)?;
                while next_area >= area {
                    next_area *= r;
                }
            }
        }
        if stop.area_floor.is_some_and(|a| area <= a) {
            break StopReason::AreaFloor;
        }
    };
    if out.last().is_none_or(|f| f.diagnostics.time < t) {
        record(&pts, t, &mut out)?;
    }
    Ok(CsfRun { frames: out, reason, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csf::curve::{make_concinnous_eight, EightFamily};
    use std::f64::consts::PI;

    #[test]
    fn circle_area_law() {
        let c = PlaneCurve::circle(1.0, 256).unwrap();
        let run = csf_evolve(&c, StopRule::time(0.1), &EvolveOptions::new(FramePolicy::Interval(0.02))).unwrap();
        assert_eq!(run.reason, StopReason::TimeReached);
        for f in &run.frames {
            let d = &f.diagnostics;
            assert!((d.total_area / (PI * (1.0 - 2.0 * d.time)) - 1.0).abs() < 0.01);
            // Exact solution R(t) = √(1−2t).
            let r = (1.0 - 2.0 * d.time).sqrt();
            assert!(f.curve.points().iter().all(|p| (norm(*p) - r).abs() < 1e-3 * r));
        }
        assert!((run.frames.last().unwrap().diagnostics.time - 0.1).abs() < 1e-14);
    }

    #[test]
    fn eight_keeps_symmetry_and_shrinks() {
        let e = make_concinnous_eight(1.0, EightFamily::Lemniscate, 256).unwrap();
        let run = csf_evolve(&e, StopRule::time(0.02), &EvolveOptions::new(FramePolicy::Interval(0.005))).unwrap();
        for w in run.frames.windows(2) {
            assert!(w[1].diagnostics.length < w[0].diagnostics.length);
        }
        for f in &run.frames {
            let p = f.curve.points();
            let n = p.len();
            assert!(norm(p[0]) < 1e-9);
            for i in 1..n / 2 {
                // Reflection in the x-axis reverses the traversal of a lobe;
                // reflection in the y-axis swaps the lobes.
                let (a, b, c) = (p[i], p[n / 2 - i], p[n / 2 + i]);
                assert!((a[0] - b[0]).abs() < 1e-6 && (a[1] + b[1]).abs() < 1e-6);
                assert!((a[0] + c[0]).abs() < 1e-6 && (a[1] - c[1]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn symmetric_projection_matches_free_run() {
        let e = make_concinnous_eight(1.0, EightFamily::Lemniscate, 128).unwrap();
        let stop = StopRule::time(0.05);
        let free = csf_evolve(&e, stop, &EvolveOptions::new(FramePolicy::Interval(0.05))).unwrap();
        let sym = csf_evolve(&e, stop, &EvolveOptions::new(FramePolicy::Interval(0.05)).symmetric()).unwrap();
        let (a, b) = (free.frames.last().unwrap(), sym.frames.last().unwrap());
        assert!(symmetry_defect(b.curve.points()) < 1e-15);
        for (p, q) in a.curve.points().iter().zip(b.curve.points()) {
            assert!(norm(sub(*p, *q)) < 1e-10);
        }
    }

    #[test]
    fn area_floor_ends_a_symmetric_eight() {
        let e = make_concinnous_eight(1.0, EightFamily::Lemniscate, 128).unwrap();
        let stop = StopRule { area_floor: Some(1e-4), ..StopRule::default() };
        let run = csf_evolve(&e, stop, &EvolveOptions::new(FramePolicy::AreaRatio(0.5)).symmetric()).unwrap();
        assert_eq!(run.reason, StopReason::AreaFloor);
        let areas: Vec<f64> = run.frames.iter().map(|f| f.diagnostics.total_area).collect();
        assert!(areas.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn circle_area_floor() {
        let c = PlaneCurve::circle(1.0, 64).unwrap();
        let stop = StopRule { area_floor: Some(0.01), ..StopRule::default() };
        let run = csf_evolve(&c, stop, &EvolveOptions::new(FramePolicy::AreaRatio(0.5))).unwrap();
        assert_eq!(run.reason, StopReason::AreaFloor);
        let last = &run.frames.last().unwrap().diagnostics;
        assert!(last.total_area <= 0.01 && (last.time - (1.0 - 0.01 / PI) / 2.0).abs() < 1e-2);
    }

    #[test]
    fn rejects_bad_policies() {
        let c = PlaneCurve::circle(1.0, 64).unwrap();
        let mut bad = EvolveOptions::new(FramePolicy::Interval(0.1));
        bad.dt.cfl = 2.0;
        assert!(csf_evolve(&c, StopRule::time(0.1), &bad).is_err());
        assert!(csf_evolve(&c, StopRule::time(0.1), &EvolveOptions::new(FramePolicy::AreaRatio(1.5))).is_err());
        assert!(csf_evolve(&c, StopRule::time(0.1), &EvolveOptions::new(FramePolicy::Interval(0.1)).symmetric()).is_err());
    }
}
