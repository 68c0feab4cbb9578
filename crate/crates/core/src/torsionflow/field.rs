use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::TorsionError;
use crate::numerics::{periodic_derivative, DerivativeMethod, SpectralGrid};

/// Positive torsion samples on the uniform mesh `s_j = 2πj/n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TorsionField {
    samples: Vec<f64>,
}

impl TorsionField {
    pub fn new(samples: Vec<f64>) -> Result<Self, TorsionError> {
        let n = samples.len();
        if n < 32 || !n.is_multiple_of(2) {
            return Err(TorsionError::Grid(format!("need an even grid of at least 32 points, got {n}")));
        }
        check_positive(&samples)?;
        Ok(Self { samples })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, TorsionError> {
        Self::new(mesh(n).into_iter().map(f).collect())
    }

    pub fn constant(n: usize, value: f64) -> Result<Self, TorsionError> {
        Self::new(vec![value; n])
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn nodes(&self) -> Vec<f64> {
        mesh(self.n())
    }

    pub fn min(&self) -> f64 {
        self.samples.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Trapezoid-rule L² distance on the periodic mesh.
    pub fn l2_distance(&self, other: &TorsionField) -> f64 {
        let h = TAU / self.n() as f64;
        (self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() * h).sqrt()
    }

    pub fn sup_distance(&self, other: &TorsionField) -> f64 {
        self.samples.iter().zip(&other.samples).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

pub(crate) fn mesh(n: usize) -> Vec<f64> {
    (0..n).map(|j| TAU * j as f64 / n as f64).collect()
}

pub(crate) fn check_positive(samples: &[f64]) -> Result<(), TorsionError> {
    match samples.iter().enumerate().find(|(_, v)| !(**v > 0.0)) {
        Some((index, &value)) => Err(TorsionError::Positivity { index, value }),
        None => Ok(()),
    }
}

/// Curvature of the evolving curve, which the flow preserves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum CurvatureProfile {
    Constant(f64),
    Samples(Vec<f64>),
}

impl CurvatureProfile {
    pub fn constant(k: f64) -> Result<Self, TorsionError> {
        if !(k > 0.0) || !k.is_finite() {
            return Err(TorsionError::Domain { name: "kappa", value: k, domain: "(0, inf)" });
        }
        Ok(Self::Constant(k))
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self, TorsionError> {
        let s: Vec<f64> = mesh(n).into_iter().map(f).collect();
        check_positive(&s)?;
        Ok(Self::Samples(s))
    }

    pub(crate) fn check_mesh(&self, n: usize) -> Result<(), TorsionError> {
        if let CurvatureProfile::Samples(s) = self {
            if s.len() != n {
                return Err(TorsionError::Grid(format!("curvature has {} samples, torsion has {n}", s.len())));
            }
        }
        Ok(())
    }
}

/// Pseudo-spectral right-hand side
/// `κ D(τ^{−1/2}) + D((D²τ^{−1/2} − τ^{3/2})/κ)` with reusable buffers.
pub struct TorsionRhs {
    grid: SpectralGrid,
    kappa: CurvatureProfile,
    f: Vec<Complex64>,
    g: Vec<Complex64>,
    h: Vec<Complex64>,
}

impl TorsionRhs {
    pub fn new(n: usize, kappa: CurvatureProfile) -> Result<Self, TorsionError> {
        kappa.check_mesh(n)?;
        let z = vec![Complex64::new(0.0, 0.0); n];
        Ok(Self { grid: SpectralGrid::new(n, TAU)?, kappa, f: z.clone(), g: z.clone(), h: z })
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    /// Writes the right-hand side into `out`; `tau` must be positive.
    pub fn eval(&mut self, tau: &[f64], out: &mut [f64]) {
        let n = tau.len();
        for (c, &t) in self.f.iter_mut().zip(tau) {
            *c = Complex64::new(1.0 / t.sqrt(), 0.0);
        }
        self.grid.forward(&mut self.f);
        let scale = 1.0 / n as f64;
        match &self.kappa {
            CurvatureProfile::Constant(k) => {
                let k = *k;
                // D(κf + (D²f − τ^{3/2})/κ): one second and one first derivative.
                for j in 0..n {
                    self.g[j] = self.f[j] * self.grid.multiplier(j, 2) * scale;
                }
                self.grid.inverse(&mut self.g);
                for ((h, g), &t) in self.h.iter_mut().zip(&self.g).zip(tau) {
                    *h = Complex64::new(k / t.sqrt() + (g.re - t * t.sqrt()) / k, 0.0);
                }
                self.grid.forward(&mut self.h);
                for j in 0..n {
                    self.h[j] *= self.grid.multiplier(j, 1) * scale;
                }
                self.grid.inverse(&mut self.h);
                for (o, h) in out.iter_mut().zip(&self.h) {
                    *o = h.re;
                }
            }
            CurvatureProfile::Samples(kappa) => {
                for j in 0..n {
                    self.g[j] = self.f[j] * self.grid.multiplier(j, 2) * scale;
                    self.f[j] *= self.grid.multiplier(j, 1) * scale;
                }
                self.grid.inverse(&mut self.g);
                self.grid.inverse(&mut self.f);
                for j in 0..n {
                    self.h[j] = Complex64::new((self.g[j].re - tau[j] * tau[j].sqrt()) / kappa[j], 0.0);
                }
                self.grid.forward(&mut self.h);
                for j in 0..n {
                    self.h[j] *= self.grid.multiplier(j, 1) * scale;
                }
                self.grid.inverse(&mut self.h);
                for j in 0..n {
                    out[j] = kappa[j] * self.f[j].re + self.h[j].re;
                }
            }
        }
    }
}

pub fn torsion_rhs(tau: &TorsionField, kappa: &CurvatureProfile) -> Result<Vec<f64>, TorsionError> {
    let mut rhs = TorsionRhs::new(tau.n(), kappa.clone())?;
    let mut out = vec![0.0; tau.n()];
    rhs.eval(tau.samples(), &mut out);
    Ok(out)
}

/// Same operator with fourth-order finite differences.
pub fn torsion_rhs_fd(tau: &TorsionField, kappa: &CurvatureProfile) -> Result<Vec<f64>, TorsionError> {
    let n = tau.n();
    kappa.check_mesh(n)?;
    let k: Vec<f64> = match kappa {
        CurvatureProfile::Constant(c) => vec![*c; n],
        CurvatureProfile::Samples(s) => s.clone(),
    };
    let fd = DerivativeMethod::FiniteDifference4;
    let f: Vec<f64> = tau.samples().iter().map(|t| 1.0 / t.sqrt()).collect();
    let df = periodic_derivative(&f, TAU, 1, fd)?;
    let d2f = periodic_derivative(&f, TAU, 2, fd)?;
    let h: Vec<f64> = (0..n).map(|j| (d2f[j] - tau.samples()[j].powf(1.5)) / k[j]).collect();
    let dh = periodic_derivative(&h, TAU, 1, fd)?;
    Ok((0..n).map(|j| k[j] * df[j] + dh[j]).collect())
}

/// `(∫√τ ds, ∫τ ds)` over the period by the trapezoid rule.
pub fn torsion_invariants(tau: &TorsionField) -> (f64, f64) {
    let h = TAU / tau.n() as f64;
    let s = tau.samples();
    (s.iter().map(|t| t.sqrt()).sum::<f64>() * h, s.iter().sum::<f64>() * h)
}
