use rayon::prelude::*;
use serde::Serialize;

use super::flow::geodesic_with;
use super::group::{Alpha, GroupPoint, UnitTangent};
use super::GeoError;
use crate::numerics::StepControl;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SpherePoint {
    pub direction: UnitTangent,
    pub endpoint: GroupPoint,
}

/// Fibonacci lattice on the unit sphere.
pub fn fibonacci_directions(n: usize) -> Vec<UnitTangent> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            UnitTangent { x: r * phi.cos(), y: r * phi.sin(), z }
        })
        .collect()
}

/// Endpoints `E(R·v)` over a Fibonacci lattice of `n_dirs` directions.
pub fn geodesic_sphere(alpha: Alpha, radius: f64, n_dirs: usize) -> Result<Vec<SpherePoint>, GeoError> {
    if !(radius > 0.0) {
        return Err(GeoError::Domain { name: "R", value: radius, range: "(0, inf)".into() });
    }
    if n_dirs < 100 {
        return Err(GeoError::Domain { name: "n_dirs", value: n_dirs as f64, range: "[100, inf)".into() });
    }
    let ctrl = StepControl { initial_step: 1e-3, abs_tol: 1e-11, rel_tol: 1e-11, max_steps: 2_000_000 };
    fibonacci_directions(n_dirs)
        .into_par_iter()
        .map(|v| Ok(SpherePoint { direction: v, endpoint: geodesic_with(v, alpha, radius, false, &ctrl)?.endpoint() }))
        .collect()
}

/// Ratio of the largest to the smallest Euclidean endpoint norm.
pub fn lobe_asymmetry(cloud: &[SpherePoint]) -> f64 {
    let norms = cloud.iter().map(|p| p.endpoint.norm());
    let (lo, hi) = norms.fold((f64::INFINITY, 0.0f64), |(lo, hi), n| (lo.min(n), hi.max(n)));
    hi / lo
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions_are_unit_and_balanced() {
        let d = fibonacci_directions(200);
        assert!(d.iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
        let mean_z: f64 = d.iter().map(|v| v.z).sum::<f64>() / 200.0;
        assert!(mean_z.abs() < 1e-12);
    }

    #[test]
    fn small_spheres_are_round() {
        let c = geodesic_sphere(Alpha::new(1.0).unwrap(), 0.01, 100).unwrap();
        assert!(c.iter().all(|p| (p.endpoint.norm() - 0.01).abs() < 1e-4));
    }

    #[test]
    fn equilibrium_directions_are_straight() {
        let a = Alpha::new(0.0).unwrap();
        let g = geodesic_with(UnitTangent { x: 0.0, y: 1.0, z: 0.0 }, a, 5.0, false, &StepControl::tight()).unwrap();
        assert!((g.endpoint().y - 5.0).abs() < 1e-12 && g.endpoint().x.abs() < 1e-14 && g.endpoint().z.abs() < 1e-14);
    }

    #[test]
    fn shear_grows_with_alpha() {
        let sol = lobe_asymmetry(&geodesic_sphere(Alpha::new(1.0).unwrap(), 5.0, 100).unwrap());
        let flat = lobe_asymmetry(&geodesic_sphere(Alpha::new(0.0).unwrap(), 5.0, 100).unwrap());
        assert!(sol > flat, "{sol} vs {flat}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(geodesic_sphere(Alpha::new(1.0).unwrap(), 0.0, 200).is_err());
        assert!(geodesic_sphere(Alpha::new(1.0).unwrap(), 1.0, 10).is_err());
    }
}
