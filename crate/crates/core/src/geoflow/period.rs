use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::group::{Alpha, UnitTangent};
use super::GeoError;
use crate::numerics::{elliptic_k, expand_bracket, find_root, integrate_singular_with_offsets};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PeriodSource {
    Numeric,
    ClosedFormSol,
    ClosedFormHalf,
}

impl PeriodSource {
    pub fn as_str(self) -> &'static str {
        match self {
            PeriodSource::Numeric => "numeric",
            PeriodSource::ClosedFormSol => "closed_form_sol",
            PeriodSource::ClosedFormHalf => "closed_form_half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeriodRecord {
    pub alpha: f64,
    pub beta: f64,
    /// Flow time from `V_β` forward to the equator.
    pub t0: f64,
    /// Flow time from `V_β` backward to the equator.
    pub t1: f64,
    pub period: f64,
    pub source: PeriodSource,
}

fn check_beta(beta: f64) -> Result<(), GeoError> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(GeoError::Domain { name: "beta", value: beta, range: "(0, 1)".into() });
    }
    Ok(())
}

/// `V_β = (β√(α/(1+α)), β/√(1+α), √(1−β²))`.
pub fn loop_vector(alpha: Alpha, beta: f64) -> Result<UnitTangent, GeoError> {
    let a = alpha.require_positive()?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(GeoError::Domain { name: "beta", value: beta, range: "(0, 1]".into() });
    }
    Ok(UnitTangent { x: beta * (a / (1.0 + a)).sqrt(), y: beta / (1.0 + a).sqrt(), z: (1.0 - beta * beta).sqrt() })
}

/// `H(V_β) = β^{1+α}·α^{α/2}/(1+α)^{(1+α)/2}`.
pub fn level_value(alpha: f64, beta: f64) -> f64 {
    beta.powf(1.0 + alpha) * alpha.powf(0.5 * alpha) / (1.0 + alpha).powf(0.5 * (1.0 + alpha))
}

/// Endpoint times from `αe^{2t} + e^{−2αt} = (α+1)/β²` (t₀) and
/// `αe^{−2t} + e^{2αt} = (α+1)/β²` (t₁), both positive.
fn endpoint_times(a: f64, beta: f64) -> Result<(f64, f64), GeoError> {
    let rhs = (a + 1.0) / (beta * beta);
    let f0 = |t: f64| a * (2.0 * t).exp() + (-2.0 * a * t).exp() - rhs;
    let f1 = |t: f64| a * (-2.0 * t).exp() + (2.0 * a * t).exp() - rhs;
    let degenerate = |e| match e {
        crate::numerics::NumericsError::Bracket { .. } => {
            GeoError::Detection(format!("endpoint root not bracketed: degenerate level set at beta={beta}"))
        }
        other => GeoError::Numerics(other),
    };
    // Both left-hand sides equal α+1 at t = 0 with zero slope, so start just off 0.
    let step = 1e-3 * (1.0 - beta).max(1e-12).sqrt();
    let b0 = expand_bracket(f0, 0.0, step, 200).map_err(degenerate)?;
    let b1 = expand_bracket(f1, 0.0, step, 200).map_err(degenerate)?;
    let t0 = find_root(f0, b0, 1e-15).map_err(degenerate)?;
    let t1 = find_root(f1, b1, 1e-15).map_err(degenerate)?;
    if !(t0 > 0.0 && t1 > 0.0) {
        return Err(GeoError::Detection(format!("nonpositive endpoint times ({t0}, {t1}) at beta={beta}")));
    }
    Ok((t0, t1))
}

pub(crate) fn period_numeric_tol(alpha: Alpha, beta: f64, tol: f64) -> Result<PeriodRecord, GeoError> {
    let a = alpha.require_positive()?;
    check_beta(beta)?;
    let (t0, t1) = endpoint_times(a, beta)?;
    let c = beta * beta / (1.0 + a);
    // 1 − c·g(t) written as c·(g(endpoint) − g(t)) around whichever endpoint
    // is nearer, with expm1 so the radicand keeps full relative accuracy.
    let integrand = |t: f64, left: f64, right: f64| {
        let radicand = if right <= left {
            let e2 = -(2.0 * t0).exp() * (-2.0 * right).exp_m1();
            let em = (-2.0 * a * t).exp() * (-2.0 * a * right).exp_m1();
            c * (a * e2 + em)
        } else {
            let e2 = -(-2.0 * t1).exp() * (2.0 * left).exp_m1();
            let em = -(2.0 * a * t1).exp() * (-2.0 * a * left).exp_m1();
            c * (a * e2 + em)
        };
        2.0 / radicand.sqrt()
    };
    let period = integrate_singular_with_offsets(integrand, -t1, t0, tol)?;
    Ok(PeriodRecord { alpha: a, beta, t0, t1, period, source: PeriodSource::Numeric })
}

/// Period of the loop level set through `V_β`, by singular quadrature.
pub fn period_numeric(alpha: Alpha, beta: f64) -> Result<PeriodRecord, GeoError> {
    period_numeric_tol(alpha, beta, 1e-13)
}

/// Printed complex-radical endpoint formulas for `α = 1/2`, evaluated with
/// principal complex roots. Returns `(t0, t1, largest imaginary residue)`.
fn half_endpoints_complex(beta: f64) -> (f64, f64, f64) {
    let b3 = beta.powi(3);
    let r = Complex64::new(b3 * b3 - 1.0, 0.0).sqrt();
    let c = (Complex64::new(-b3, 0.0) + r).powf(1.0 / 3.0);
    let e0 = (c.inv() + c) / beta;
    let d = Complex64::new(-2.0 + 1.0 / (b3 * b3), 0.0) + 2.0 * r / b3;
    let dc = d.powf(1.0 / 3.0);
    let e1 = 0.5 * (Complex64::new(1.0 / (beta * beta), 0.0) + (beta.powi(4) * dc).inv() + dc);
    let residue = (e0.im / e0.re).abs().max((e1.im / e1.re).abs());
    (e0.re.ln(), e1.re.ln(), residue)
}

/// Closed forms for `α = 1` and `α = 1/2`.
///
/// For `α = 1/2` the endpoint equations reduce to `X³ − (3/β²)X + 2 = 0` with
/// `X = e^{t₀}` or `X = e^{−t₁}`; the roots are taken from the trigonometric
/// resolution and cross-checked against the complex-radical form.
pub fn period_closed_form(alpha: Alpha, beta: f64) -> Result<PeriodRecord, GeoError> {
    check_beta(beta)?;
    let a = alpha.value();
    if a == 1.0 {
        let b2 = beta * beta;
        let t = 0.5 * (1.0 / b2).acosh();
        let period = 4.0 / (1.0 + b2).sqrt() * elliptic_k((1.0 - b2) / (1.0 + b2))?;
        return Ok(PeriodRecord { alpha: a, beta, t0: t, t1: t, period, source: PeriodSource::ClosedFormSol });
    }
    if a != 0.5 {
        return Err(GeoError::Unsupported(a));
    }
    let phi = (-beta.powi(3)).acos() / 3.0;
    let x0 = 2.0 / beta * phi.cos();
    let x1 = 2.0 / beta * (phi - 2.0 * PI / 3.0).cos();
    let (t0, t1) = (x0.ln(), -x1.ln());
    let (c0, c1, residue) = half_endpoints_complex(beta);
    if residue > 1e-12 || (c0 - t0).abs() > 1e-9 * t0.max(1e-3) || (c1 - t1).abs() > 1e-9 * t1.max(1e-3) {
        return Err(GeoError::Setup(format!(
            "complex endpoint formulas disagree with cubic roots at beta={beta}: ({c0}, {c1}) vs ({t0}, {t1}), residue {residue:e}"
        )));
    }
    let denom = (t0 - t1).exp() + 2.0 * t1.exp();
    let m = 2.0 * (t1.exp() - (-t0).exp()) / denom;
    let period = 4.0 * 3f64.sqrt() / (beta * denom.sqrt()) * elliptic_k(m)?;
    Ok(PeriodRecord { alpha: a, beta, t0, t1, period, source: PeriodSource::ClosedFormHalf })
}

/// `β` whose loop level set passes through `(x0, √(1−x0²), 0)`:
/// `β^{1+α}·α^{α/2}/(1+α)^{(1+α)/2} = x0^α·√(1−x0²)`.
pub fn beta_from_x0(x0: f64, alpha: Alpha) -> Result<f64, GeoError> {
    let a = alpha.require_positive()?;
    let lo = (a / (1.0 + a)).sqrt();
    if !(x0 > lo && x0 < 1.0) {
        return Err(GeoError::Domain { name: "x0", value: x0, range: format!("({lo}, 1)") });
    }
    let h = x0.powf(a) * (1.0 - x0 * x0).sqrt();
    let scale = (1.0 + a).powf(0.5 * (1.0 + a)) / a.powf(0.5 * a);
    Ok((h * scale).powf(1.0 / (1.0 + a)).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geoflow::flow::{flow_tangent, Direction};

    fn al(a: f64) -> Alpha {
        Alpha::new(a).unwrap()
    }

    #[test]
    fn sol_numeric_matches_elliptic_formula() {
        let beta: f64 = 0.5;
        let b2 = beta * beta;
        let oracle = 4.0 / (1.0 + b2).sqrt() * elliptic_k((1.0 - b2) / (1.0 + b2)).unwrap();
        let p = period_numeric(al(1.0), beta).unwrap();
        assert!((p.period - oracle).abs() < 1e-8, "{} vs {oracle}", p.period);
    }

    #[test]
    fn near_equilibrium_table_values() {
        for (a, v) in [(0.5, 6.28842), (0.1, 14.0792)] {
            let p = period_numeric(al(a), 0.999).unwrap().period;
            assert!((p - v).abs() < 5e-3, "alpha={a}: {p}");
        }
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        for a in [1.0, 0.5] {
            for i in 1..=9 {
                let beta = i as f64 / 10.0;
                let n = period_numeric(al(a), beta).unwrap();
                let c = period_closed_form(al(a), beta).unwrap();
                assert!((n.period - c.period).abs() < 1e-8, "alpha={a} beta={beta}: {} vs {}", n.period, c.period);
                assert!((n.t0 - c.t0).abs() < 1e-9 && (n.t1 - c.t1).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn half_endpoint_root_oracle() {
        // find_root on the left endpoint equation vs the closed form.
        let beta = 0.7;
        let c = period_closed_form(al(0.5), beta).unwrap();
        let f = |t: f64| 0.5 * (2.0 * t).exp() + (-t).exp() - 1.5 / (beta * beta);
        let t0 = find_root(f, (1e-6, 3.0), 1e-15).unwrap();
        assert!((t0 - c.t0).abs() < 1e-9);
    }

    #[test]
    fn limits_at_the_equator() {
        let p1 = period_closed_form(al(1.0), 0.9999).unwrap().period;
        assert!((p1 - PI * 2f64.sqrt()).abs() < 1e-3, "{p1}");
        let ph = period_closed_form(al(0.5), 0.9999).unwrap().period;
        assert!((ph - 2.0 * PI).abs() < 1e-3, "{ph}");
    }

    #[test]
    fn unsupported_alpha() {
        assert!(matches!(period_closed_form(al(0.3), 0.5), Err(GeoError::Unsupported(_))));
        assert!(period_numeric(al(0.5), 1.0).is_err());
    }

    #[test]
    fn resolution_invariance() {
        let a = period_numeric_tol(al(0.3), 0.6, 1e-11).unwrap().period;
        let b = period_numeric_tol(al(0.3), 0.6, 1e-13).unwrap().period;
        assert!((a - b).abs() < 1e-8);
    }

    #[test]
    fn period_equals_flow_time_around_loop() {
        // Event oracle: from V_β the flowline returns to z > 0 after one period.
        let a = al(0.3);
        let beta = 0.6;
        let p = period_numeric(a, beta).unwrap();
        let v = loop_vector(a, beta).unwrap();
        let f = flow_tangent(v, a, p.period, Direction::Forward).unwrap();
        let end = f.tangents.last().unwrap();
        assert!((end.x - v.x).abs() < 1e-8 && (end.z - v.z).abs() < 1e-8);
    }

    #[test]
    fn beta_for_half_matches_code_formula() {
        for x0 in [0.6, 0.7, 0.8, 0.9, 0.95] {
            let b = beta_from_x0(x0, al(0.5)).unwrap();
            let code: f64 = (3.0 * 3f64.sqrt() / 2.0 * (x0 - x0 * x0 * x0)).powf(1.0 / 3.0);
            assert!((b - code).abs() < 1e-12);
        }
    }

    #[test]
    fn beta_level_matching() {
        let x0: f64 = 0.9;
        let b = beta_from_x0(x0, al(1.0)).unwrap();
        let v = loop_vector(al(1.0), b).unwrap();
        assert!((v.x * v.y - x0 * (1.0 - x0 * x0).sqrt()).abs() < 1e-10);
        let near = beta_from_x0(0.5f64.sqrt() + 1e-9, al(1.0)).unwrap();
        assert!((near - 1.0).abs() < 1e-8);
        assert!(beta_from_x0(0.5, al(1.0)).is_err());
    }
}
