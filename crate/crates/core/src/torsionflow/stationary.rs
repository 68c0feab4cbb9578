use std::f64::consts::{PI, TAU};

use serde::Serialize;

use super::field::{mesh, TorsionField};
use super::TorsionError;
use crate::numerics::{find_root, integrate_singular_with_offsets, solve_ode, OdeOptions, Output, StepControl};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StationarySign {
    Plus,
    Minus,
}

/// `τ(s) = 2/(C ± √(C² − 4)·sin(2(s + k)))`.
pub fn stationary_torsion(n: usize, c: f64, k_shift: f64, sign: StationarySign) -> Result<TorsionField, TorsionError> {
    if !(c >= 2.0) {
        return Err(TorsionError::Domain { name: "C", value: c, domain: "[2, inf)" });
    }
    let r = (c * c - 4.0).sqrt();
    let sg = match sign {
        StationarySign::Plus => 1.0,
        StationarySign::Minus => -1.0,
    };
    TorsionField::from_fn(n, |s| 2.0 / (c + sg * r * (2.0 * (s + k_shift)).sin()))
}

/// Stationary torsion `τ = u^{−2}` from the orbit `u′² = C + 2Au − u² − u^{−2}`,
/// i.e. `u″ = A − u + u^{−3}`, with the minimum of `u` placed at `s = 3π/4`.
/// The orbit period must divide `2π`.
pub fn stationary_torsion_general(n: usize, a: f64, c: f64) -> Result<TorsionField, TorsionError> {
    let f = |u: f64| c + 2.0 * a * u - u * u - 1.0 / (u * u);
    // F′ = 2(A − u + u^{−3}) decreases in u; its zero is the centre of the orbit.
    let centre = find_root(|u| a - u + u.powi(-3), (1e-3, a.abs() + 2.0), 1e-15)?;
    let peak = f(centre);
    if peak < 1e-13 {
        if peak > -1e-13 {
            return TorsionField::constant(n, centre.powi(-2));
        }
        return Err(TorsionError::Constants(format!("F(u)={peak:e} < 0 at its maximum for A={a}, C={c}")));
    }
    let mut lo = centre;
    while f(lo) > 0.0 {
        lo *= 0.5;
    }
    let mut hi = centre;
    while f(hi) > 0.0 {
        hi *= 2.0;
    }
    let u_min = find_root(f, (lo, centre), 1e-15)?;
    let u_max = find_root(f, (centre, hi), 1e-15)?;

    // u²F(u) = −(u − u_min)(u − u_max)(u² + pu + q) factors out both turning points.
    let sigma = u_min + u_max;
    let prod = u_min * u_max;
    let p = sigma - 2.0 * a;
    let q = -c + sigma * p - prod;
    let half = integrate_singular_with_offsets(
        |u, left, right| u / (left * right * (u * u + p * u + q)).sqrt(),
        u_min,
        u_max,
        1e-14,
    )?;
    let period = 2.0 * half;
    let laps = TAU / period;
    if (laps - laps.round()).abs() > 1e-6 || laps.round() < 1.0 {
        return Err(TorsionError::Constants(format!("orbit period {period} does not divide 2π (A={a}, C={c})")));
    }

    let s0 = 0.75 * PI;
    let nodes = mesh(n);
    let mut targets: Vec<(usize, f64)> =
        nodes.iter().enumerate().map(|(j, &s)| (j, if s < s0 { s + TAU } else { s })).collect();
    targets.sort_by(|x, y| x.1.total_cmp(&y.1));
    let ctrl = StepControl { initial_step: 1e-4, abs_tol: 1e-14, rel_tol: 1e-14, max_steps: 1_000_000 };
    let sol = solve_ode(
        |_, y, d| {
            d[0] = y[1];
            d[1] = a - y[0] + y[0].powi(-3);
        },
        &[u_min, 0.0],
        (s0, s0 + TAU),
        &ctrl,
        OdeOptions::default().output(Output::Times(targets.iter().map(|t| t.1).collect())),
    )?;
    let mut samples = vec![0.0; n];
    for ((j, _), st) in targets.iter().zip(&sol.trajectory.states) {
        samples[*j] = st[0].powi(-2);
    }
    TorsionField::new(samples)
}
