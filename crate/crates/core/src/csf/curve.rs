use std::f64::consts::TAU;

use serde::Serialize;

use super::CsfError;

pub type Point = [f64; 2];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orientation {
    Positive,
    Negative,
}

/// Closed polygon; the last point connects back to the first.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlaneCurve {
    points: Vec<Point>,
    /// Sign of the area enclosed by the loop that starts at point 0 (the whole
    /// curve when embedded, the first lobe of a figure-eight).
    pub orientation: Orientation,
}

pub(crate) fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

pub(crate) fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

pub(crate) fn norm(a: Point) -> f64 {
    a[0].hypot(a[1])
}

/// Twice the signed shoelace area, halved.
pub(crate) fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    (0..n).map(|i| cross(points[i], points[(i + 1) % n])).sum::<f64>() * 0.5
}

impl PlaneCurve {
    pub const MIN_POINTS: usize = 64;

    pub fn new(points: Vec<Point>) -> Result<Self, CsfError> {
        Self::with_orientation(points, None)
    }

    pub(crate) fn with_orientation(points: Vec<Point>, orientation: Option<Orientation>) -> Result<Self, CsfError> {
        let n = points.len();
        if n < Self::MIN_POINTS {
            return Err(CsfError::Curve(format!("{n} points, need at least {}", Self::MIN_POINTS)));
        }
        for i in 0..n {
            let p = points[i];
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(CsfError::Curve(format!("non-finite point at index {i}")));
            }
            if norm(sub(points[(i + 1) % n], p)) == 0.0 {
                return Err(CsfError::Curve(format!("points {i} and {} coincide", (i + 1) % n)));
            }
        }
        let orientation = orientation.unwrap_or_else(|| {
            if signed_area(&points) >= 0.0 {
                Orientation::Positive
            } else {
                Orientation::Negative
            }
        });
        Ok(Self { points, orientation })
    }

    /// Circle of radius `r` centred at the origin, counterclockwise.
    pub fn circle(radius: f64, n: usize) -> Result<Self, CsfError> {
        if !(radius > 0.0) {
            return Err(CsfError::Domain { name: "radius", value: radius });
        }
        let pts = (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                [radius * t.cos(), radius * t.sin()]
            })
            .collect();
        Self::new(pts)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        let n = self.len();
        (0..n).map(|i| norm(sub(self.points[(i + 1) % n], self.points[i]))).collect()
    }

    pub fn length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    pub fn min_spacing(&self) -> f64 {
        self.segment_lengths().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.points)
    }

    /// Signed curvature at each vertex from the circle through it and its two
    /// neighbours (positive for left turns).
    pub fn curvature(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let p0 = self.points[(i + n - 1) % n];
                let p1 = self.points[i];
                let p2 = self.points[(i + 1) % n];
                let (a, b) = (sub(p1, p0), sub(p2, p1));
                2.0 * cross(a, b) / (norm(a) * norm(b) * norm(sub(p2, p0)))
            })
            .collect()
    }

    /// Central-difference tangent direction at each vertex, in `(−π, π]`.
    pub fn tangent_angles(&self) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let d = sub(self.points[(i + 1) % n], self.points[(i + n - 1) % n]);
                d[1].atan2(d[0])
            })
            .collect()
    }

    /// Resamples to `n` points uniformly spaced in arclength, keeping point 0.
    /// Positions come from the cubic through four consecutive vertices.
    pub fn resampled(&self, n: usize) -> Result<Self, CsfError> {
        let pts = resample_uniform(&self.points, n);
        Self::with_orientation(pts, Some(self.orientation))
    }
}

pub(crate) fn resample_uniform(points: &[Point], n_out: usize) -> Vec<Point> {
    let n = points.len();
    let seg: Vec<f64> = (0..n).map(|i| norm(sub(points[(i + 1) % n], points[i]))).collect();
    let total: f64 = seg.iter().sum();
    let mut out = Vec::with_capacity(n_out);
    let mut i = 0;
    let mut start = 0.0;
    for j in 0..n_out {
        let target = total * j as f64 / n_out as f64;
        while i + 1 < n && start + seg[i] <= target {
            start += seg[i];
            i += 1;
        }
        let u = ((target - start) / seg[i]).clamp(0.0, 1.0);
        out.push(cubic_at(points, i, u));
    }
    out
}

/// Lagrange cubic through vertices `i−1, i, i+1, i+2` evaluated at `i + u`.
fn cubic_at(points: &[Point], i: usize, u: f64) -> Point {
    let n = points.len();
    let p = |k: isize| points[(i as isize + k).rem_euclid(n as isize) as usize];
    let w = [
        -u * (u - 1.0) * (u - 2.0) / 6.0,
        (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0,
        -(u + 1.0) * u * (u - 2.0) / 2.0,
        (u + 1.0) * u * (u - 1.0) / 6.0,
    ];
    let mut out = [0.0; 2];
    for (k, wk) in (-1..=2).zip(w) {
        let q = p(k);
        out[0] += wk * q[0];
        out[1] += wk * q[1];
    }
    out
}

/// Initial family of a figure-eight.
pub enum EightFamily {
    /// `(x² + y²)² = x² − y²` scaled, lobes on the x-axis.
    Lemniscate,
    /// Closed curve `t ↦ γ(t)`, `t ∈ [0, 2π)`, through the origin at `t = 0`
    /// and `t = π`, first lobe in `x > 0`.
    Parametric(Box<dyn Fn(f64) -> Point + Send + Sync>),
}

fn lemniscate(t: f64) -> Point {
    let s = std::f64::consts::FRAC_PI_2 - t;
    let d = 1.0 + s.sin().powi(2);
    [s.cos() / d, s.sin() * s.cos() / d]
}

/// Balanced figure-eight with the double point at the origin and lobes along
/// the x-axis. Point 0 sits on the double point; with `n` divisible by 4 the
/// tips are at `n/4` and `3n/4`.
pub fn make_concinnous_eight(scale: f64, family: EightFamily, n: usize) -> Result<PlaneCurve, CsfError> {
    if !(scale > 0.0) {
        return Err(CsfError::Domain { name: "scale", value: scale });
    }
    if n < 128 {
        return Err(CsfError::Curve(format!("{n} points, need at least 128")));
    }
    let gamma: Box<dyn Fn(f64) -> Point> = match family {
        EightFamily::Lemniscate => Box::new(lemniscate),
        EightFamily::Parametric(f) => f,
    };
    let dense_n = 64 * n;
    let dense: Vec<Point> = (0..dense_n)
        .map(|i| {
            let p = gamma(TAU * i as f64 / dense_n as f64);
            [scale * p[0], scale * p[1]]
        })
        .collect();
    check_concinnity(&PlaneCurve::new(dense.clone())?, scale)?;
    let pts = resample_uniform(&dense, n);
    let lobe = signed_area(&pts[..=n / 2]);
    let orientation = if lobe >= 0.0 { Orientation::Positive } else { Orientation::Negative };
    PlaneCurve::with_orientation(pts, Some(orientation))
}

/// Curvature may change sign only within `0.05·scale` of the double point,
/// and must do so at least twice. `dense` samples `t = 2πi/len`.
fn check_concinnity(dense: &PlaneCurve, scale: f64) -> Result<(), CsfError> {
    let k = dense.curvature();
    let n = dense.len();
    let param = |i: usize| TAU * i as f64 / n as f64;
    let kmax = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = 1e-6 * kmax;
    let start = k.iter().position(|v| v.abs() > floor).unwrap_or(0);
    let mut changes = 0;
    let mut last = 0.0;
    for shift in 0..=n {
        let i = (start + shift) % n;
        if k[i].abs() <= floor {
            continue;
        }
        if last != 0.0 && k[i].signum() != last {
            changes += 1;
            if norm(dense.points()[i]) > 0.05 * scale {
                return Err(CsfError::NotConcinnous { parameter: param(i) });
            }
        }
        last = k[i].signum();
    }
    if changes < 2 {
        return Err(CsfError::NotConcinnous { parameter: param(0) });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_basics() {
        let c = PlaneCurve::circle(1.0, 512).unwrap();
        assert!((c.length() - TAU).abs() < 1e-4);
        assert!((c.signed_area() - std::f64::consts::PI).abs() < 1e-4);
        assert!(c.curvature().iter().all(|k| (k - 1.0).abs() < 1e-9));
        assert_eq!(c.orientation, Orientation::Positive);
    }

    #[test]
    fn resampling_keeps_circle() {
        let pts: Vec<Point> = (0..200)
            .map(|i| {
                let t = TAU * (i as f64 / 200.0 + 0.02 * (TAU * i as f64 / 200.0).sin());
                [t.cos(), t.sin()]
            })
            .collect();
        let c = PlaneCurve::new(pts).unwrap().resampled(256).unwrap();
        assert!(c.points().iter().all(|p| (norm(*p) - 1.0).abs() < 1e-7));
        let s = c.segment_lengths();
        let (lo, hi) = s.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!(hi / lo < 1.001);
    }

    #[test]
    fn lemniscate_is_concinnous_and_balanced() {
        let e = make_concinnous_eight(1.0, EightFamily::Lemniscate, 1024).unwrap();
        let p = e.points();
        assert!(norm(p[0]) < 1e-12 && norm(p[512]) < 1e-6);
        assert!((p[256][0] - 1.0).abs() < 1e-6);
        let k = e.curvature();
        let away = k.iter().zip(p).filter(|(_, q)| norm(**q) > 0.1).map(|(k, _)| k.abs()).fold(f64::INFINITY, f64::min);
        assert!(away > 0.1);
        let right = signed_area(&p[..=512]);
        let left = signed_area(&[&p[512..], &p[..1]].concat());
        assert!((right.abs() - left.abs()).abs() < 1e-10 && right * left < 0.0);
        // Total rotation is zero: the lobes turn in opposite senses.
        let ds = e.segment_lengths();
        let n = e.len();
        let rot: f64 = (0..n).map(|i| k[i] * 0.5 * (ds[i] + ds[(i + n - 1) % n])).sum();
        assert!(rot.abs() < 1e-6);
    }

    #[test]
    fn rejects_wavy_lobes() {
        let wavy = EightFamily::Parametric(Box::new(|t: f64| {
            let p = lemniscate(t);
            let r = 1.0 + 0.15 * (12.0 * t).sin().powi(2);
            [p[0] * r, p[1] * r]
        }));
        assert!(matches!(make_concinnous_eight(1.0, wavy, 512), Err(CsfError::NotConcinnous { .. })));
    }
}
