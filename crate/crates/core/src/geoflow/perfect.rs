use serde::Serialize;

use super::flow::{flow_tangent, geodesic_with, Direction};
use super::group::{Alpha, GroupPoint, UnitTangent};
use super::period::{loop_vector, period_closed_form, period_numeric};
use super::GeoError;
use crate::numerics::StepControl;

#[derive(Debug, Clone, Serialize)]
pub struct PerfectReport {
    pub alpha: f64,
    pub beta: f64,
    pub period: f64,
    pub endpoint_plus: GroupPoint,
    pub endpoint_minus: GroupPoint,
    /// `‖E(V₊) − E(V₋)‖`.
    pub partner_distance: f64,
    /// Largest `|z|` of the two endpoints.
    pub endpoint_z: f64,
    /// `|e_x·x − e_y·αy| / (|e|·|(αy, x)|)` for `E(V) = (e_x, e_y, ·)`.
    pub collinearity_defect: f64,
    /// `√|a^α b|` from two starting points on the same loop.
    pub holonomy: [f64; 2],
    pub holonomy_difference: f64,
}

fn period_of(alpha: Alpha, beta: f64) -> Result<f64, GeoError> {
    let a = alpha.value();
    Ok(if a == 1.0 || a == 0.5 { period_closed_form(alpha, beta)? } else { period_numeric(alpha, beta)? }.period)
}

/// Checks on perfect geodesics `E(P·V)` for `V` on the loop level set of `V_β`.
pub fn perfect_vector_checks(alpha: Alpha, beta: f64) -> Result<PerfectReport, GeoError> {
    let a = alpha.require_positive()?;
    let p = period_of(alpha, beta)?;
    let ctrl = StepControl { initial_step: 1e-3, abs_tol: 1e-13, rel_tol: 1e-13, max_steps: 5_000_000 };
    let endpoint = |v: UnitTangent| geodesic_with(v, alpha, p, false, &ctrl).map(|g| g.endpoint());
    let vp = loop_vector(alpha, beta)?;
    let vm = UnitTangent { z: -vp.z, ..vp };
    let ep = endpoint(vp)?;
    let em = endpoint(vm)?;
    let exy = (ep.x * ep.x + ep.y * ep.y).sqrt();
    let dir = ((a * vp.y).powi(2) + vp.x * vp.x).sqrt();
    let collinearity_defect = (ep.x * vp.x - ep.y * a * vp.y).abs() / (exy * dir);

    let holo = |e: GroupPoint| (e.x.abs().powf(a) * e.y).abs().sqrt();
    let shifted = *flow_tangent(vp, alpha, p / 3.0, Direction::Forward)?.tangents.last().expect("nonempty");
    let es = endpoint(shifted)?;
    let holonomy = [holo(ep), holo(es)];
    Ok(PerfectReport {
        alpha: a,
        beta,
        period: p,
        endpoint_plus: ep,
        endpoint_minus: em,
        partner_distance: ep.distance(&em),
        endpoint_z: ep.z.abs().max(em.z.abs()),
        collinearity_defect,
        holonomy,
        holonomy_difference: (holonomy[0] - holonomy[1]).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_partners_share_endpoints() {
        let r = perfect_vector_checks(Alpha::new(0.5).unwrap(), 0.8).unwrap();
        assert!(r.partner_distance < 1e-5, "{r:?}");
        assert!(r.endpoint_z < 1e-6);
        assert!(r.collinearity_defect < 1e-5);
        assert!(r.holonomy_difference < 1e-6);
    }

    #[test]
    fn generic_alpha_uses_quadrature_period() {
        let r = perfect_vector_checks(Alpha::new(0.3).unwrap(), 0.6).unwrap();
        assert!(r.partner_distance < 1e-5 && r.endpoint_z < 1e-6, "{r:?}");
    }
}
