use std::f64::consts::PI;

use serde::Serialize;

use super::curve::{cross, norm, signed_area, sub, PlaneCurve, Point};
use super::CsfError;
use crate::numerics::erfc;

/// Per-frame geometry of a plane curve. Quarter quantities refer to the arc
/// in the closed positive quadrant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EightDiagnostics {
    pub time: f64,
    pub total_area: f64,
    pub length: f64,
    pub isoperimetric: f64,
    pub x_max: f64,
    pub y_max: f64,
    pub x_star: f64,
    /// Half the interior angle of a lobe at the double point; `None` for
    /// embedded curves.
    pub alpha_angle: Option<f64>,
    pub theta_max: f64,
    pub theta_min: f64,
    pub k_max: f64,
    pub double_point: Option<Point>,
    pub lobe_areas: Vec<f64>,
}

impl EightDiagnostics {
    pub const CSV_HEADER: [&'static str; 11] = [
        "time",
        "total_area",
        "length",
        "isoperimetric",
        "x_max",
        "y_max",
        "x_star",
        "alpha_angle",
        "theta_max",
        "theta_min",
        "k_max",
    ];

    pub fn csv_row(&self) -> [f64; 11] {
        [
            self.time,
            self.total_area,
            self.length,
            self.isoperimetric,
            self.x_max,
            self.y_max,
            self.x_star,
            self.alpha_angle.unwrap_or(f64::NAN),
            self.theta_max,
            self.theta_min,
            self.k_max,
        ]
    }
}

/// Self-intersection of a polygon: segments `i` and `j > i` cross at `point`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub i: usize,
    pub j: usize,
    pub point: Point,
}

fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let t = ((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1]);
    let t = t.clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * d[0], a[1] + t * d[1]]))
}

fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let (r, s) = (sub(b, a), sub(d, c));
    let den = cross(r, s);
    if den != 0.0 {
        let t = cross(sub(c, a), s) / den;
        let u = cross(sub(c, a), r) / den;
        if (0.0..=1.0).contains(&t) && (0.0..=1.0).contains(&u) {
            return 0.0;
        }
    }
    point_segment_distance(a, c, d)
        .min(point_segment_distance(b, c, d))
        .min(point_segment_distance(c, a, b))
        .min(point_segment_distance(d, a, b))
}

fn line_intersection(a: Point, b: Point, c: Point, d: Point) -> Point {
    let (r, s) = (sub(b, a), sub(d, c));
    let den = cross(r, s);
    if den == 0.0 {
        return a;
    }
    let t = (cross(sub(c, a), s) / den).clamp(0.0, 1.0);
    [a[0] + t * r[0], a[1] + t * r[1]]
}

/// Nearest approach between segments at least `n/8` apart along the curve;
/// a crossing is reported when that distance is below `1e-9·L`.
pub fn find_double_point(points: &[Point]) -> Option<Crossing> {
    let n = points.len();
    let seg = |i: usize| (points[i], points[(i + 1) % n]);
    let length: f64 = (0..n).map(|i| norm(sub(seg(i).1, seg(i).0))).sum();
    let tol = 1e-9 * length;
    let mut order: Vec<(f64, f64, usize)> = (0..n)
        .map(|i| {
            let (a, b) = seg(i);
            (a[0].min(b[0]), a[0].max(b[0]), i)
        })
        .collect();
    order.sort_by(|p, q| p.0.total_cmp(&q.0));
    let min_gap = (n / 8).max(2);
    let mut best: Option<(f64, usize, usize)> = None;
    for (k, &(_, hi, i)) in order.iter().enumerate() {
        let (a, b) = seg(i);
        let (ylo, yhi) = (a[1].min(b[1]) - tol, a[1].max(b[1]) + tol);
        for &(lo2, _, j) in &order[k + 1..] {
            if lo2 > hi + tol {
                break;
            }
            let gap = i.abs_diff(j).min(n - i.abs_diff(j));
            if gap < min_gap {
                continue;
            }
            let (c, d) = seg(j);
            if c[1].max(d[1]) < ylo || c[1].min(d[1]) > yhi {
                continue;
            }
            let dist = segment_distance(a, b, c, d);
            if best.is_none_or(|(bd, _, _)| dist < bd) {
                best = Some((dist, i.min(j), i.max(j)));
            }
        }
    }
    let (dist, i, j) = best?;
    if dist > tol {
        return None;
    }
    let (a, b) = seg(i);
    let (c, d) = seg(j);
    Some(Crossing { i, j, point: line_intersection(a, b, c, d) })
}

/// The two loops of a curve split at a crossing, each starting at the
/// crossing point.
pub fn split_lobes(points: &[Point], x: &Crossing) -> [Vec<Point>; 2] {
    let n = points.len();
    let scale = points.iter().fold(0.0f64, |m, p| m.max(norm(*p)));
    let apart = |p: &Point| norm(sub(*p, x.point)) > 1e-12 * scale;
    let mut first = vec![x.point];
    first.extend(points[x.i + 1..=x.j].iter().filter(|p| apart(p)));
    let mut second = vec![x.point];
    second.extend((x.j + 1..n + x.i + 1).map(|k| points[k % n]).filter(apart));
    [first, second]
}

/// Continuous tangent angle along an open polyline traversed from its first
/// point, starting in `(−π, π]`.
fn lifted_angles(path: &[Point]) -> Vec<f64> {
    let m = path.len();
    let dir = |k: usize| {
        let d = if k == 0 {
            sub(path[1], path[0])
        } else if k == m - 1 {
            sub(path[m - 1], path[m - 2])
        } else {
            sub(path[k + 1], path[k - 1])
        };
        d[1].atan2(d[0])
    };
    let mut out = Vec::with_capacity(m);
    let mut prev = dir(0);
    out.push(prev);
    for k in 1..m {
        let delta = (dir(k) - prev + PI).rem_euclid(2.0 * PI) - PI;
        prev += delta;
        out.push(prev);
    }
    out
}

/// Lobe closed at the crossing, traversed counterclockwise from it and
/// returned with the crossing repeated at the end.
pub(crate) fn ccw_lobe(lobe: &[Point]) -> Vec<Point> {
    let mut path = lobe.to_vec();
    if signed_area(lobe) < 0.0 {
        path[1..].reverse();
    }
    path.push(path[0]);
    path
}

/// Tangent angles along the counterclockwise lobe and the curvature of its
/// interior vertices (aligned with `angles[1..m−1]`).
pub(crate) fn lobe_profile(lobe: &[Point]) -> (Vec<f64>, Vec<f64>) {
    let path = ccw_lobe(lobe);
    let angles = lifted_angles(&path);
    let m = path.len();
    let k = (1..m - 1)
        .map(|i| {
            let (p0, p1, p2) = (path[i - 1], path[i], path[i + 1]);
            let (a, b) = (sub(p1, p0), sub(p2, p1));
            2.0 * cross(a, b) / (norm(a) * norm(b) * norm(sub(p2, p0)))
        })
        .collect();
    (angles, k)
}

fn refine_max(values: &[f64], other: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= values.len() {
        return (values[i], other[i]);
    }
    let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
    let den = a - 2.0 * b + c;
    if den >= 0.0 {
        return (b, other[i]);
    }
    let d = (0.5 * (a - c) / den).clamp(-1.0, 1.0);
    let v = b - 0.25 * (a - c) * d;
    let (oa, ob, oc) = (other[i - 1], other[i], other[i + 1]);
    let o = ob + 0.5 * d * (oc - oa) + 0.5 * d * d * (oa - 2.0 * ob + oc);
    (v, o)
}

/// Quarter extremes measured along the curve: the maximum of `x` and of `y`
/// over vertices in the closed positive quadrant, each refined by a parabola
/// in the vertex index through its neighbours.
fn quarter_extremes(points: &[Point]) -> Result<(f64, f64, f64), CsfError> {
    let n = points.len();
    let inq = |p: &Point| p[0] >= 0.0 && p[1] >= 0.0;
    let mut ix = None;
    let mut iy = None;
    for (i, p) in points.iter().enumerate() {
        if !inq(p) {
            continue;
        }
        if ix.is_none_or(|k: usize| p[0] > points[k][0]) {
            ix = Some(i);
        }
        if iy.is_none_or(|k: usize| p[1] > points[k][1]) {
            iy = Some(i);
        }
    }
    let (ix, iy) = ix.zip(iy).ok_or_else(|| CsfError::Topology("no vertex in the positive quadrant".into()))?;
    let window = |i: usize| -> (Vec<f64>, Vec<f64>) {
        let idx = [(i + n - 1) % n, i, (i + 1) % n];
        (idx.iter().map(|&k| points[k][0]).collect(), idx.iter().map(|&k| points[k][1]).collect())
    };
    let (xs, ys) = window(ix);
    let (x_max, _) = refine_max(&xs, &ys, 1);
    let (xs, ys) = window(iy);
    let (y_max, x_star) = refine_max(&ys, &xs, 1);
    Ok((x_max, y_max, x_star))
}

pub fn curve_geometry(c: &PlaneCurve, time: f64) -> Result<EightDiagnostics, CsfError> {
    let pts = c.points();
    let length = c.length();
    let k_max = c.curvature().iter().fold(0.0f64, |m, k| m.max(k.abs()));
    let (x_max, y_max, x_star) = quarter_extremes(pts)?;
    let crossing = find_double_point(pts);
    let (total_area, lobe_areas, alpha_angle, angles) = match &crossing {
        None => {
            let a = c.signed_area();
            let mut closed = pts.to_vec();
            closed.push(pts[0]);
            if a < 0.0 {
                closed.reverse();
            }
            (a.abs(), vec![a], None, lifted_angles(&closed))
        }
        Some(x) => {
            let lobes = split_lobes(pts, x);
            let areas: Vec<f64> = lobes.iter().map(|l| signed_area(l)).collect();
            let mean_x = |l: &[Point]| l.iter().map(|p| p[0]).sum::<f64>() / l.len() as f64;
            let right = if mean_x(&lobes[0]) >= mean_x(&lobes[1]) { &lobes[0] } else { &lobes[1] };
            let path = ccw_lobe(right);
            let (u1, u2) = (sub(path[1], path[0]), sub(path[path.len() - 2], path[0]));
            let interior = cross(u1, u2).abs().atan2(u1[0] * u2[0] + u1[1] * u2[1]);
            let (angles, _) = lobe_profile(right);
            (areas.iter().map(|a| a.abs()).sum(), areas, Some(0.5 * interior), angles)
        }
    };
    let theta_max = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let theta_min = angles.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(EightDiagnostics {
        time,
        total_area,
        length,
        isoperimetric: length * length / total_area,
        x_max,
        y_max,
        x_star,
        alpha_angle,
        theta_max,
        theta_min,
        k_max,
        double_point: crossing.map(|x| x.point),
        lobe_areas,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ThetaSeries {
    pub times: Vec<f64>,
    pub theta_max: Vec<f64>,
    pub theta_min: Vec<f64>,
    pub monotone: bool,
}

pub const THETA_TOLERANCE: f64 = 1e-3;

/// `θ_max` nonincreasing and `θ_min` nondecreasing up to [`THETA_TOLERANCE`].
pub fn theta_monotonicity_series(frames: &[EightDiagnostics]) -> Result<ThetaSeries, CsfError> {
    if frames.len() < 3 {
        return Err(CsfError::Diagnostic(format!("{} frames, need at least 3", frames.len())));
    }
    if frames.iter().any(|f| f.alpha_angle.is_none()) {
        return Err(CsfError::Diagnostic("frame without a double point".into()));
    }
    let theta_max: Vec<f64> = frames.iter().map(|f| f.theta_max).collect();
    let theta_min: Vec<f64> = frames.iter().map(|f| f.theta_min).collect();
    let monotone = theta_max.windows(2).all(|w| w[1] <= w[0] + THETA_TOLERANCE)
        && theta_min.windows(2).all(|w| w[1] >= w[0] - THETA_TOLERANCE);
    Ok(ThetaSeries { times: frames.iter().map(|f| f.time).collect(), theta_max, theta_min, monotone })
}

/// `f(x,t) = (π/8)(erfc((√M − x)/√(2t)) + erfc((√M + x)/√(2t)))`.
pub fn comparison_solution(x: f64, t: f64, m: f64) -> Result<f64, CsfError> {
    if !(t > 0.0) {
        return Err(CsfError::Domain { name: "t", value: t });
    }
    if !(m > 0.0) {
        return Err(CsfError::Domain { name: "M", value: m });
    }
    let (r, d) = (m.sqrt(), (2.0 * t).sqrt());
    Ok(PI / 8.0 * (erfc((r - x) / d) + erfc((r + x) / d)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csf::curve::{make_concinnous_eight, EightFamily};
    use proptest::prelude::*;

    #[test]
    fn circle_geometry() {
        let c = PlaneCurve::circle(1.0, 1024).unwrap();
        let d = curve_geometry(&c, 0.0).unwrap();
        assert!((d.total_area - PI).abs() < 1e-4 && (d.length - 2.0 * PI).abs() < 1e-4);
        assert!((d.k_max - 1.0).abs() < 1e-3 && d.alpha_angle.is_none());
        assert!((d.x_max - 1.0).abs() < 1e-9 && (d.y_max - 1.0).abs() < 1e-9 && d.x_star.abs() < 1e-9);
        assert!((d.theta_max - d.theta_min - 2.0 * PI).abs() < 1e-2);
    }

    #[test]
    fn lemniscate_geometry() {
        let e = make_concinnous_eight(1.0, EightFamily::Lemniscate, 1024).unwrap();
        let d = curve_geometry(&e, 0.0).unwrap();
        let a = d.alpha_angle.unwrap();
        assert!((a - PI / 4.0).abs() < 1e-3, "{a}");
        assert!(norm(d.double_point.unwrap()) < 1e-12);
        assert!((d.lobe_areas[0].abs() - d.lobe_areas[1].abs()).abs() < 1e-10);
        // Lemniscate area a² and highest point at r = a/√2, θ = π/6.
        assert!((d.total_area - 1.0).abs() < 1e-4);
        assert!((d.y_max - 0.25 * 2f64.sqrt()).abs() < 1e-5 && (d.x_star - 6f64.sqrt() / 4.0).abs() < 1e-3);
        let range = d.theta_max - d.theta_min;
        assert!(range > PI && range < 2.0 * PI);
        assert!((d.theta_min + d.theta_max - PI).abs() < 1e-3);
        assert!((range - (PI + 2.0 * a)).abs() < 1e-2);
    }

    #[test]
    fn crossing_of_a_generic_eight() {
        let g = make_concinnous_eight(
            2.0,
            EightFamily::Parametric(Box::new(|t: f64| [t.sin(), 0.5 * (2.0 * t).sin()])),
            512,
        )
        .unwrap();
        let x = find_double_point(g.points()).unwrap();
        assert!(norm(x.point) < 1e-9);
        let lobes = split_lobes(g.points(), &x);
        assert!(signed_area(&lobes[0]) * signed_area(&lobes[1]) < 0.0);
        assert!(find_double_point(PlaneCurve::circle(1.0, 256).unwrap().points()).is_none());
    }

    #[test]
    fn comparison_solution_values() {
        assert!(comparison_solution(0.0, 1e-4, 1.0).unwrap() < 1e-100);
        let f = comparison_solution(0.0, 0.3, 2.0).unwrap();
        assert!((f - PI / 4.0 * erfc(2f64.sqrt() / 0.6f64.sqrt())).abs() < 1e-15);
        assert!(matches!(comparison_solution(0.0, 0.0, 1.0), Err(CsfError::Domain { .. })));
    }

    #[test]
    fn comparison_solution_solves_heat_equation() {
        let (h, k) = (2e-4, 1e-5);
        for &x in &[-1.0, -0.3, 0.0, 0.5, 1.2] {
            for &t in &[0.1, 0.4, 1.0] {
                let f = |x: f64, t: f64| comparison_solution(x, t, 0.8).unwrap();
                let ft = (f(x, t + k) - f(x, t - k)) / (2.0 * k);
                let fxx = (f(x + h, t) - 2.0 * f(x, t) + f(x - h, t)) / (h * h);
                assert!((ft - 0.5 * fxx).abs() < 1e-6, "{x} {t}");
            }
        }
    }

    proptest! {
        #[test]
        fn comparison_solution_range(x in -3.0f64..3.0, t in 1e-3f64..10.0, m in 1e-2f64..4.0) {
            let f = comparison_solution(x, t, m).unwrap();
            prop_assert!((0.0..=PI / 4.0 + 1e-15).contains(&f));
        }
    }
}
