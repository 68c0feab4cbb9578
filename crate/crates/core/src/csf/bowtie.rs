use std::f64::consts::PI;

use serde::Serialize;

use super::curve::{norm, sub, PlaneCurve, Point};
use super::diagnostics::{curve_geometry, find_double_point, lobe_profile, split_lobes};
use super::evolve::CsfFrame;
use super::CsfError;

/// `sup |k/k_max − sin φ|` over samples of a profile in tangent angle.
pub fn grim_reaper_error(phi: &[f64], k: &[f64]) -> f64 {
    let k_max = k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    phi.iter().zip(k).map(|(p, k)| (k / k_max - p.sin()).abs()).fold(0.0, f64::max)
}

pub const TIP_POINTS: usize = 16;

/// Curvature of the right lobe against its tangent angle, with the angle
/// range normalised to `[0, π]`.
pub fn lobe_angle_profile(curve: &PlaneCurve) -> Result<(Vec<f64>, Vec<f64>), CsfError> {
    let pts = curve.points();
    let x = find_double_point(pts).ok_or_else(|| CsfError::Topology("no double point".into()))?;
    let lobes = split_lobes(pts, &x);
    let mean_x = |l: &[Point]| l.iter().map(|p| p[0]).sum::<f64>() / l.len() as f64;
    let right = if mean_x(&lobes[0]) >= mean_x(&lobes[1]) { &lobes[0] } else { &lobes[1] };
    let (angles, k) = lobe_profile(right);
    let lo = angles.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let phi = angles[1..angles.len() - 1].iter().map(|a| PI * (a - lo) / (hi - lo)).collect();
    Ok((phi, k))
}

/// Grim-reaper profile error of each frame. A frame needs at least
/// [`TIP_POINTS`] vertices with `k ≥ k_max/10` on the lobe.
pub fn grim_reaper_check(frames: &[CsfFrame]) -> Result<Vec<f64>, CsfError> {
    frames
        .iter()
        .map(|f| {
            let (phi, k) = lobe_angle_profile(&f.curve)?;
            let k_max = k.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let tip = k.iter().filter(|v| **v >= 0.1 * k_max).count();
            if tip < TIP_POINTS {
                return Err(CsfError::Resolution { time: f.diagnostics.time, tip_points: tip });
            }
            Ok(grim_reaper_error(&phi, &k))
        })
        .collect()
}

/// `(−y_max·dx_max/dt, −x_max·dy_max/dt)` on the positive quadrant. Each
/// extreme moves with the normal speed `|k|` of the vertex attaining it,
/// where the normal is parallel to the coordinate axis.
pub fn tip_products(curve: &PlaneCurve) -> Result<(f64, f64), CsfError> {
    let d = curve_geometry(curve, 0.0)?;
    let pts = curve.points();
    let k = curve.curvature();
    let arg = |f: &dyn Fn(&Point) -> f64| {
        (0..pts.len())
            .filter(|&i| pts[i][0] >= 0.0 && pts[i][1] >= 0.0)
            .max_by(|&a, &b| f(&pts[a]).total_cmp(&f(&pts[b])))
            .ok_or_else(|| CsfError::Topology("no vertex in the positive quadrant".into()))
    };
    let ix = arg(&|p| p[0])?;
    let iy = arg(&|p| p[1])?;
    Ok((d.y_max * k[ix].abs(), d.x_max * k[iy].abs()))
}

#[derive(Debug, Clone, Serialize)]
pub struct BowtieReport {
    pub rescaled: PlaneCurve,
    pub bowtie_distance: f64,
    pub ratio_xstar: f64,
}

const BOWTIE: [(Point, Point); 6] = [
    ([0.0, 0.0], [1.0, 1.0]),
    ([1.0, 1.0], [1.0, -1.0]),
    ([1.0, -1.0], [0.0, 0.0]),
    ([0.0, 0.0], [-1.0, 1.0]),
    ([-1.0, 1.0], [-1.0, -1.0]),
    ([-1.0, -1.0], [0.0, 0.0]),
];

fn point_segment(p: Point, a: Point, b: Point) -> f64 {
    let d = sub(b, a);
    let t = (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / (d[0] * d[0] + d[1] * d[1])).clamp(0.0, 1.0);
    norm(sub(p, [a[0] + t * d[0], a[1] + t * d[1]]))
}

/// Each quadrant is scaled by its own extents; the distance is the Hausdorff
/// distance to the bow-tie made of the box diagonals and its vertical sides.
pub fn affine_rescale_and_bowtie(frame: &PlaneCurve) -> Result<BowtieReport, CsfError> {
    let pts = frame.points();
    let quadrant = |p: &Point| (p[0] < 0.0) as usize * 2 + (p[1] < 0.0) as usize;
    let mut ext = [[0.0f64; 2]; 4];
    for p in pts {
        let q = quadrant(p);
        ext[q][0] = ext[q][0].max(p[0].abs());
        ext[q][1] = ext[q][1].max(p[1].abs());
    }
    let scaled: Vec<Point> = pts
        .iter()
        .map(|p| {
            let e = ext[quadrant(p)];
            [if p[0] == 0.0 { 0.0 } else { p[0] / e[0] }, if p[1] == 0.0 { 0.0 } else { p[1] / e[1] }]
        })
        .collect();
    if ext.iter().any(|e| !(e[0] > 0.0 && e[1] > 0.0)) {
        return Err(CsfError::Rescale(format!("degenerate quadrant extents {ext:?}")));
    }
    let n = scaled.len();
    let to_bowtie = scaled
        .iter()
        .map(|p| BOWTIE.iter().map(|(a, b)| point_segment(*p, *a, *b)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let samples = 400;
    let mut to_curve: f64 = 0.0;
    for (a, b) in BOWTIE {
        for s in 0..=samples {
            let t = s as f64 / samples as f64;
            let q = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
            let d = (0..n).map(|i| point_segment(q, scaled[i], scaled[(i + 1) % n])).fold(f64::INFINITY, f64::min);
            to_curve = to_curve.max(d);
        }
    }
    let d = curve_geometry(frame, 0.0)?;
    let rescaled = PlaneCurve::with_orientation(scaled, Some(frame.orientation))?;
    Ok(BowtieReport { rescaled, bowtie_distance: to_bowtie.max(to_curve), ratio_xstar: d.x_star / d.x_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csf::curve::{make_concinnous_eight, EightFamily};

    #[test]
    fn exact_profile_has_zero_error() {
        let phi: Vec<f64> = (0..=100).map(|i| PI * i as f64 / 100.0).collect();
        let k: Vec<f64> = phi.iter().map(|p| 3.0 * p.sin()).collect();
        assert!(grim_reaper_error(&phi, &k) < 1e-15);
    }

    #[test]
    fn exact_bowtie_is_at_distance_zero() {
        let mut pts = Vec::new();
        let order = [0, 1, 2, 3, 4, 5];
        for &s in &order {
            let (a, b) = BOWTIE[s];
            for i in 0..16 {
                let t = i as f64 / 16.0;
                pts.push([2.0 * (a[0] + t * (b[0] - a[0])), 0.5 * (a[1] + t * (b[1] - a[1]))]);
            }
        }
        let c = PlaneCurve::new(pts).unwrap();
        let r = affine_rescale_and_bowtie(&c).unwrap();
        assert!(r.bowtie_distance < 1e-12, "{}", r.bowtie_distance);
    }

    #[test]
    fn lemniscate_is_far_from_the_bowtie() {
        let e = make_concinnous_eight(1.0, EightFamily::Lemniscate, 512).unwrap();
        let r = affine_rescale_and_bowtie(&e).unwrap();
        assert!(r.bowtie_distance > 0.1 && (r.ratio_xstar - 6f64.sqrt() / 4.0).abs() < 1e-3);
        let (phi, k) = lobe_angle_profile(&e).unwrap();
        assert!(phi.iter().all(|p| (0.0..=PI).contains(p)));
        assert!(grim_reaper_error(&phi, &k) > 0.05);
    }

    #[test]
    fn circle_has_no_lobe() {
        let c = PlaneCurve::circle(1.0, 128).unwrap();
        assert!(matches!(lobe_angle_profile(&c), Err(CsfError::Topology(_))));
    }
}
