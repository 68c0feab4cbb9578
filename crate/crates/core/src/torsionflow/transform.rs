//! Substitution, potentiation and hodograph steps that carry a positive
//! torsion profile to the CDF variable `u` and back.

use std::f64::consts::TAU;

use serde::Serialize;

use super::field::{check_positive, TorsionField};
use super::TorsionError;
use crate::numerics::SpectralGrid;

#[derive(Debug, Clone, Serialize)]
pub struct TransformRecord {
    /// `√τ` on the `s` mesh.
    pub v: Vec<f64>,
    /// `w(s) = ∫₀^s v` on the `s` mesh.
    pub w: Vec<f64>,
    /// `w(2π)`, the length of the hodograph interval `[0, M]`.
    pub m: f64,
    /// `η(ξ_j)`, the inverse of `w`, on the uniform mesh `ξ_j = jM/n`.
    pub eta: Vec<f64>,
    /// `z = η_ξ`.
    pub z: Vec<f64>,
    /// `u = log z`.
    pub u: Vec<f64>,
    /// `q = sinh(z/2)`.
    pub q: Vec<f64>,
    /// `|u(0) − u(M)|` from the interpolants at the interval ends.
    pub u_periodicity: f64,
}

/// Solves `F(x) = target` for increasing `F` by Newton iteration from a
/// piecewise-cubic Hermite guess through the samples `(x_j, F(x_j))`.
fn invert_monotone(
    nodes: &[f64],
    values: &[f64],
    slopes: &[f64],
    period: f64,
    total: f64,
    target: f64,
    f: impl Fn(f64) -> (f64, f64),
) -> Result<f64, TorsionError> {
    let n = nodes.len();
    let idx = match values.binary_search_by(|v| v.total_cmp(&target)) {
        Ok(i) => return Ok(nodes[i]),
        Err(i) => i,
    };
    let (x0, f0, d0) = (nodes[idx - 1], values[idx - 1], slopes[idx - 1]);
    let (x1, f1, d1) = if idx < n { (nodes[idx], values[idx], slopes[idx]) } else { (period, total, slopes[0]) };
    // Cubic Hermite in x on [x0, x1]; bisection on it gives the initial guess.
    let h = x1 - x0;
    let herm = |t: f64| {
        let (t2, t3) = (t * t, t * t * t);
        (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * h * d0 + (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * h * d1
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if herm(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = x0 + 0.5 * (lo + hi) * h;
    for _ in 0..50 {
        let (fx, dfx) = f(x);
        let step = (fx - target) / dfx;
        x = (x - step).clamp(x0, x1);
        if step.abs() < 1e-15 * period {
            return Ok(x);
        }
    }
    Err(TorsionError::Inversion(format!("Newton did not converge for target {target}")))
}

/// Primitive `∫₀^x g` of a periodic sample set and the inverse map on the
/// uniform mesh of `[0, ∫₀^L g]`; `g` must be positive.
fn primitive_and_inverse(grid: &SpectralGrid, g: &[f64]) -> Result<(Vec<f64>, f64, Vec<f64>), TorsionError> {
    let n = g.len();
    let c = grid.coefficients(g);
    let nodes = grid.nodes();
    let prim: Vec<f64> = nodes.iter().map(|&s| grid.antiderivative(&c, s)).collect();
    let total = grid.antiderivative(&c, grid.period());
    if prim.windows(2).any(|w| w[1] <= w[0]) || total <= prim[n - 1] {
        return Err(TorsionError::Inversion("primitive is not strictly increasing".into()));
    }
    let inv = (0..n)
        .map(|j| {
            let target = total * j as f64 / n as f64;
            invert_monotone(&nodes, &prim, g, grid.period(), total, target, |x| {
                let (v, _) = grid.evaluate_with_slope(&c, x);
                (grid.antiderivative(&c, x), v)
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((prim, total, inv))
}

/// Forward chain `τ → v → w → η → z → (u, q)` and the reverse chain back to a
/// reconstructed `τ`; returns the record and the sup-norm round-trip error.
pub fn cdf_transform_roundtrip(tau0: &TorsionField) -> Result<(TransformRecord, f64), TorsionError> {
    let n = tau0.n();
    let s_grid = SpectralGrid::new(n, TAU)?;
    let v: Vec<f64> = tau0.samples().iter().map(|t| t.sqrt()).collect();
    let (w, m, eta) = primitive_and_inverse(&s_grid, &v)?;
    let vc = s_grid.coefficients(&v);
    let z: Vec<f64> = eta.iter().map(|&e| 1.0 / s_grid.evaluate(&vc, e)).collect();
    check_positive(&z).map_err(|_| TorsionError::Inversion("z lost positivity".into()))?;
    let u: Vec<f64> = z.iter().map(|x| x.ln()).collect();
    let q: Vec<f64> = z.iter().map(|x| (0.5 * x).sinh()).collect();
    let u_end = -s_grid.evaluate(&vc, TAU).ln();
    let u_periodicity = (u[0] - u_end).abs();

    // Reverse: z = e^u on [0, M], η = ∫z, w = η⁻¹, v = 1/z(w), τ = v².
    let xi_grid = SpectralGrid::new(n, m)?;
    let z_back: Vec<f64> = u.iter().map(|x| x.exp()).collect();
    let (_, two_pi, w_back) = primitive_and_inverse(&xi_grid, &z_back)?;
    let zc = xi_grid.coefficients(&z_back);
    let tau_back: Vec<f64> = w_back.iter().map(|&x| xi_grid.evaluate(&zc, x).powi(-2)).collect();
    let mut err = (two_pi - TAU).abs();
    for (a, b) in tau_back.iter().zip(tau0.samples()) {
        err = err.max((a - b).abs());
    }
    Ok((TransformRecord { v, w, m, eta, z, u, q, u_periodicity }, err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torsionflow::stationary::{stationary_torsion, StationarySign};

    #[test]
    fn helix_maps_to_trivial_data() {
        let (r, err) = cdf_transform_roundtrip(&TorsionField::constant(64, 1.0).unwrap()).unwrap();
        assert!((r.m - TAU).abs() < 1e-14);
        assert!(r.z.iter().all(|z| (z - 1.0).abs() < 1e-14) && r.u.iter().all(|u| u.abs() < 1e-14));
        for (j, w) in r.w.iter().enumerate() {
            assert!((w - TAU * j as f64 / 64.0).abs() < 1e-13);
        }
        assert!(err < 1e-13);
    }

    #[test]
    fn stationary_roundtrip() {
        let t = stationary_torsion(512, 3.0, 0.0, StationarySign::Plus).unwrap();
        let (r, err) = cdf_transform_roundtrip(&t).unwrap();
        assert!(err < 1e-8, "{err}");
        assert!(r.w.windows(2).all(|p| p[1] > p[0]));
    }

    #[test]
    fn endpoint_periodicity() {
        let t = TorsionField::from_fn(512, |s| 10.0 + 0.5 * s.sin()).unwrap();
        let (r, err) = cdf_transform_roundtrip(&t).unwrap();
        assert!(r.u_periodicity < 1e-8 && err < 1e-8);
        assert!((r.m - (10.0f64).sqrt() * TAU).abs() < 1e-2);
    }
}
