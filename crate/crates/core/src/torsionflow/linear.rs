use std::f64::consts::TAU;

use num_complex::Complex64;

use super::TorsionError;
use crate::numerics::{solve_ode, OdeOptions, Output, SpectralGrid, StepControl};

/// Exact solution of `w_t + 2w_s + ½w_sss = 0` on the periodic mesh: mode `n`
/// is multiplied by `exp(i(n³/2 − 2n)t)`. For an even mesh the Nyquist mode is
/// ambiguous between `±N/2`; its symmetric (real) part is kept.
pub fn linearized_solution(w0: &[f64], t: f64) -> Result<Vec<f64>, TorsionError> {
    let grid = SpectralGrid::new(w0.len(), TAU)?;
    let mut c = grid.coefficients(w0);
    let n = w0.len();
    for (j, cj) in c.iter_mut().enumerate() {
        let k = grid.wavenumber(j) as f64;
        let phase = (0.5 * k * k * k - 2.0 * k) * t;
        if n.is_multiple_of(2) && j == n / 2 {
            *cj *= phase.cos();
        } else {
            *cj *= Complex64::from_polar(1.0, phase);
        }
    }
    Ok(grid.synthesize(&c))
}

/// The same equation by the method of lines with spectral derivatives.
pub fn linearized_mol(w0: &[f64], t: f64, ctrl: &StepControl) -> Result<Vec<f64>, TorsionError> {
    let grid = SpectralGrid::new(w0.len(), TAU)?;
    let n = w0.len();
    let mut d1 = vec![0.0; n];
    let mut d3 = vec![0.0; n];
    let sol = solve_ode(
        |_, y, d| {
            grid.derivative_into(y, 1, &mut d1).expect("order 1");
            grid.derivative_into(y, 3, &mut d3).expect("order 3");
            for j in 0..n {
                d[j] = -2.0 * d1[j] - 0.5 * d3[j];
            }
        },
        w0,
        (0.0, t),
        ctrl,
        OdeOptions::default().output(Output::Final),
    )?;
    Ok(sol.trajectory.last_state().to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mesh(n: usize) -> Vec<f64> {
        (0..n).map(|j| TAU * j as f64 / n as f64).collect()
    }

    fn l2(v: &[f64]) -> f64 {
        (v.iter().map(|x| x * x).sum::<f64>() * TAU / v.len() as f64).sqrt()
    }

    #[test]
    fn constants_are_unchanged() {
        let w = linearized_solution(&[2.5; 32], 7.0).unwrap();
        assert!(w.iter().all(|v| (v - 2.5).abs() < 1e-14));
    }

    #[test]
    fn sine_travels_at_unit_mode_speed() {
        let s = mesh(64);
        let w0: Vec<f64> = s.iter().map(|x| x.sin()).collect();
        let w = linearized_solution(&w0, std::f64::consts::PI).unwrap();
        // sin(s − 1.5t) at t = π is cos s.
        for (x, v) in s.iter().zip(&w) {
            assert!((v - x.cos()).abs() < 1e-13);
        }
        let ctrl = StepControl { initial_step: 1e-4, abs_tol: 1e-12, rel_tol: 1e-12, max_steps: 1_000_000 };
        let m = linearized_mol(&w0, std::f64::consts::PI, &ctrl).unwrap();
        assert!(m.iter().zip(&w).all(|(a, b)| (a - b).abs() < 1e-6));
    }

    proptest! {
        #[test]
        fn unitary_and_translation_covariant(c in prop::collection::vec(-1.0f64..1.0, 10), t in 0.0f64..20.0, shift in 0usize..32) {
            let s = mesh(32);
            let w0: Vec<f64> = s.iter().map(|x| (1..=5).map(|k| c[2 * k - 2] * (k as f64 * x).cos() + c[2 * k - 1] * (k as f64 * x).sin()).sum()).collect();
            let w = linearized_solution(&w0, t).unwrap();
            prop_assert!((l2(&w) - l2(&w0)).abs() < 1e-12);
            let rolled: Vec<f64> = (0..32).map(|j| w0[(j + shift) % 32]).collect();
            let wr = linearized_solution(&rolled, t).unwrap();
            for j in 0..32 {
                prop_assert!((wr[j] - w[(j + shift) % 32]).abs() < 1e-12);
            }
        }
    }
}
