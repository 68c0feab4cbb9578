//! Differentiation and interpolation of samples on a uniform periodic mesh.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::NumericsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub enum DerivativeMethod {
    #[default]
    Spectral,
    /// Fourth-order central differences.
    FiniteDifference4,
}

/// Uniform periodic mesh `s_j = j·L/N` with cached FFT plans.
#[derive(Clone)]
pub struct SpectralGrid {
    n: usize,
    period: f64,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for SpectralGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralGrid").field("n", &self.n).field("period", &self.period).finish()
    }
}

impl SpectralGrid {
    pub fn new(n: usize, period: f64) -> Result<Self, NumericsError> {
        if n < 8 {
            return Err(NumericsError::GridTooSmall(n));
        }
        let mut planner = FftPlanner::new();
        Ok(Self { n, period, forward: planner.plan_fft_forward(n), inverse: planner.plan_fft_inverse(n) })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|j| j as f64 * self.spacing()).collect()
    }

    /// Unnormalized forward transform in place.
    pub fn forward(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Unnormalized inverse transform in place.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// Multiplier `(ikω)^order` of FFT bin `j`, with the Nyquist bin zeroed
    /// for odd orders.
    pub fn multiplier(&self, j: usize, order: usize) -> Complex64 {
        if order % 2 == 1 && self.n.is_multiple_of(2) && j == self.n / 2 {
            return Complex64::new(0.0, 0.0);
        }
        let ik = Complex64::new(0.0, self.wavenumber(j) as f64 * 2.0 * PI / self.period);
        ik.powu(order as u32)
    }

    /// Signed wavenumber of FFT bin `j`.
    pub fn wavenumber(&self, j: usize) -> i64 {
        if j <= self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Normalized Fourier coefficients `ĉ_k` with `f(s_j) = Σ ĉ_k e^{i k ω s_j}`.
    pub fn coefficients(&self, samples: &[f64]) -> Vec<Complex64> {
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.forward.process(&mut buf);
        let scale = 1.0 / self.n as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        buf
    }

    /// Inverse of [`SpectralGrid::coefficients`], real part.
    pub fn synthesize(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let mut buf = coeffs.to_vec();
        self.inverse.process(&mut buf);
        buf.iter().map(|c| c.re).collect()
    }

    pub fn derivative(&self, samples: &[f64], order: usize) -> Result<Vec<f64>, NumericsError> {
        let mut out = vec![0.0; self.n];
        self.derivative_into(samples, order, &mut out)?;
        Ok(out)
    }

    pub fn derivative_into(&self, samples: &[f64], order: usize, out: &mut [f64]) -> Result<(), NumericsError> {
        if order > 3 {
            return Err(NumericsError::UnsupportedOrder(order));
        }
        assert_eq!(samples.len(), self.n, "sample count does not match grid");
        if order == 0 {
            out.copy_from_slice(samples);
            return Ok(());
        }
        let mut buf = self.coefficients(samples);
        for (j, c) in buf.iter_mut().enumerate() {
            *c *= self.multiplier(j, order);
        }
        self.inverse.process(&mut buf);
        for (o, c) in out.iter_mut().zip(&buf) {
            *o = c.re;
        }
        Ok(())
    }

    /// Evaluates the trigonometric interpolant at arbitrary `s`. The Nyquist
    /// mode is split symmetrically so the interpolant is real.
    pub fn evaluate(&self, coeffs: &[Complex64], s: f64) -> f64 {
        let omega = 2.0 * PI / self.period;
        let mut acc = coeffs[0].re;
        let half = self.n / 2;
        for (j, c) in coeffs.iter().enumerate().take(half).skip(1) {
            let e = Complex64::from_polar(1.0, j as f64 * omega * s);
            acc += 2.0 * (c * e).re;
        }
        if self.n.is_multiple_of(2) {
            acc += coeffs[half].re * (half as f64 * omega * s).cos();
        }
        acc
    }

    /// Value and first derivative of the interpolant at `s`.
    pub fn evaluate_with_slope(&self, coeffs: &[Complex64], s: f64) -> (f64, f64) {
        let omega = 2.0 * PI / self.period;
        let mut v = coeffs[0].re;
        let mut d = 0.0;
        let half = self.n / 2;
        for (j, c) in coeffs.iter().enumerate().take(half).skip(1) {
            let kw = j as f64 * omega;
            let ce = c * Complex64::from_polar(1.0, kw * s);
            v += 2.0 * ce.re;
            d -= 2.0 * kw * ce.im;
        }
        if self.n.is_multiple_of(2) {
            let kw = half as f64 * omega;
            v += coeffs[half].re * (kw * s).cos();
            d -= coeffs[half].re * kw * (kw * s).sin();
        }
        (v, d)
    }

    /// `∫₀^s f` of the interpolant: `ĉ₀·s + Σ ĉ_k (e^{ikωs} − 1)/(ikω)`.
    pub fn antiderivative(&self, coeffs: &[Complex64], s: f64) -> f64 {
        let omega = 2.0 * PI / self.period;
        let mut acc = coeffs[0].re * s;
        let half = self.n / 2;
        for (j, c) in coeffs.iter().enumerate().take(half).skip(1) {
            let kw = j as f64 * omega;
            let e = Complex64::from_polar(1.0, kw * s) - 1.0;
            acc += 2.0 * (c * e / Complex64::new(0.0, kw)).re;
        }
        if self.n.is_multiple_of(2) {
            let kw = half as f64 * omega;
            acc += coeffs[half].re * (kw * s).sin() / kw;
        }
        acc
    }

    /// Spectrally accurate mean value times period (equals the trapezoid rule).
    pub fn integral(&self, samples: &[f64]) -> f64 {
        samples.iter().sum::<f64>() * self.spacing()
    }

    /// L² norm by the periodic trapezoid rule.
    pub fn l2_norm(&self, samples: &[f64]) -> f64 {
        (samples.iter().map(|v| v * v).sum::<f64>() * self.spacing()).sqrt()
    }
}

/// Periodic derivative on the mesh `j·L/N`.
pub fn periodic_derivative(samples: &[f64], period: f64, order: usize, method: DerivativeMethod) -> Result<Vec<f64>, NumericsError> {
    if order > 3 {
        return Err(NumericsError::UnsupportedOrder(order));
    }
    let n = samples.len();
    if n < 8 {
        return Err(NumericsError::GridTooSmall(n));
    }
    match method {
        DerivativeMethod::Spectral => SpectralGrid::new(n, period)?.derivative(samples, order),
        DerivativeMethod::FiniteDifference4 => {
            let h = period / n as f64;
            let cur = samples;
            let mut out = vec![0.0; n];
            // Applying the first-derivative stencil `order` times loses accuracy, so
            // use dedicated stencils.
            let at = |v: &[f64], j: isize| v[j.rem_euclid(n as isize) as usize];
            for j in 0..n as isize {
                out[j as usize] = match order {
                    0 => at(cur, j),
                    1 => (at(cur, j - 2) - 8.0 * at(cur, j - 1) + 8.0 * at(cur, j + 1) - at(cur, j + 2)) / (12.0 * h),
                    2 => {
                        (-at(cur, j - 2) + 16.0 * at(cur, j - 1) - 30.0 * at(cur, j) + 16.0 * at(cur, j + 1) - at(cur, j + 2))
                            / (12.0 * h * h)
                    }
                    _ => {
                        (at(cur, j - 3) - 8.0 * at(cur, j - 2) + 13.0 * at(cur, j - 1) - 13.0 * at(cur, j + 1)
                            + 8.0 * at(cur, j + 2)
                            - at(cur, j + 3))
                            / (8.0 * h * h * h)
                    }
                };
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mesh(n: usize) -> Vec<f64> {
        (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect()
    }

    fn sup(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn sine_first_derivative() {
        let s = mesh(64);
        let f: Vec<f64> = s.iter().map(|x| x.sin()).collect();
        let d = periodic_derivative(&f, 2.0 * PI, 1, DerivativeMethod::Spectral).unwrap();
        let c: Vec<f64> = s.iter().map(|x| x.cos()).collect();
        assert!(sup(&d, &c) < 1e-10);
    }

    #[test]
    fn sine_third_derivative() {
        let s = mesh(64);
        let f: Vec<f64> = s.iter().map(|x| x.sin()).collect();
        let d = periodic_derivative(&f, 2.0 * PI, 3, DerivativeMethod::Spectral).unwrap();
        let c: Vec<f64> = s.iter().map(|x| -x.cos()).collect();
        assert!(sup(&d, &c) < 1e-8);
    }

    #[test]
    fn constants_are_annihilated() {
        let f = vec![3.5; 32];
        for order in 1..=3 {
            for m in [DerivativeMethod::Spectral, DerivativeMethod::FiniteDifference4] {
                let d = periodic_derivative(&f, 2.0 * PI, order, m).unwrap();
                assert!(d.iter().all(|v| v.abs() < 1e-10));
            }
        }
    }

    #[test]
    fn finite_difference_fourth_order() {
        let err = |n: usize, order: usize| {
            let s = mesh(n);
            let f: Vec<f64> = s.iter().map(|x| (x.sin()).exp()).collect();
            let exact = periodic_derivative(&f, 2.0 * PI, order, DerivativeMethod::Spectral).unwrap();
            let fd = periodic_derivative(&f, 2.0 * PI, order, DerivativeMethod::FiniteDifference4).unwrap();
            sup(&exact, &fd)
        };
        for order in 1..=3 {
            let ratio = err(64, order) / err(128, order);
            assert!(ratio > 12.0, "order {order}: ratio {ratio}");
        }
    }

    #[test]
    fn order_four_unsupported() {
        assert!(matches!(
            periodic_derivative(&[0.0; 16], 1.0, 4, DerivativeMethod::Spectral),
            Err(NumericsError::UnsupportedOrder(4))
        ));
    }

    #[test]
    fn arbitrary_period() {
        let l = 3.7;
        let g = SpectralGrid::new(48, l).unwrap();
        let w = 2.0 * PI / l;
        let f: Vec<f64> = g.nodes().iter().map(|s| (w * s).cos()).collect();
        let d = g.derivative(&f, 2).unwrap();
        let e: Vec<f64> = g.nodes().iter().map(|s| -w * w * (w * s).cos()).collect();
        assert!(sup(&d, &e) < 1e-10);
    }

    #[test]
    fn interpolant_and_antiderivative() {
        let g = SpectralGrid::new(32, 2.0 * PI).unwrap();
        let f: Vec<f64> = g.nodes().iter().map(|s| 2.0 + s.sin() + 0.3 * (3.0 * s).cos()).collect();
        let c = g.coefficients(&f);
        let x = 1.234;
        assert!((g.evaluate(&c, x) - (2.0 + x.sin() + 0.3 * (3.0 * x).cos())).abs() < 1e-13);
        let (_, d) = g.evaluate_with_slope(&c, x);
        assert!((d - (x.cos() - 0.9 * (3.0 * x).sin())).abs() < 1e-12);
        let prim = 2.0 * x + (1.0 - x.cos()) + 0.1 * (3.0 * x).sin();
        assert!((g.antiderivative(&c, x) - prim).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn derivative_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, order in 1usize..=3) {
            let s = mesh(32);
            let f: Vec<f64> = s.iter().map(|x| x.sin() + (2.0 * x).cos()).collect();
            let g: Vec<f64> = s.iter().map(|x| (x.cos()).exp()).collect();
            let h: Vec<f64> = f.iter().zip(&g).map(|(p, q)| a * p + b * q).collect();
            let grid = SpectralGrid::new(32, 2.0 * PI).unwrap();
            let df = grid.derivative(&f, order).unwrap();
            let dg = grid.derivative(&g, order).unwrap();
            let dh = grid.derivative(&h, order).unwrap();
            for j in 0..32 {
                prop_assert!((dh[j] - a * df[j] - b * dg[j]).abs() < 1e-10);
            }
        }
    }
}
