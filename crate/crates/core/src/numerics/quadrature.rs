#![allow(clippy::excessive_precision)]

use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use super::NumericsError;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Result<Segment, NumericsError> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    let (k, g) = (k * h, g * h);
    if !k.is_finite() {
        return Err(NumericsError::Quadrature(format!("non-finite integrand on [{a}, {b}]")));
    }
    Ok(Segment { a, b, value: k, error: (k - g).abs() })
}

/// Adaptive Gauss–Kronrod (7/15) quadrature with global subdivision of the
/// segment carrying the largest error estimate.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError> {
    if !(b > a) {
        return Err(NumericsError::EmptySpan(a, b));
    }
    let mut heap = BinaryHeap::new();
    let first = kronrod(&mut f, a, b)?;
    let mut err = first.error;
    heap.push(first);
    let mut n = 1;
    while err > tol {
        if n > 5000 {
            return Err(NumericsError::Quadrature(format!("no convergence, error estimate {err:e}")));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(NumericsError::Quadrature("interval cannot be subdivided".into()));
        }
        let l = kronrod(&mut f, worst.a, mid)?;
        let r = kronrod(&mut f, mid, worst.b)?;
        err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
        n += 1;
        if n % 64 == 0 {
            // Resum to shed accumulated rounding in the running estimate.
            err = heap.iter().map(|s| s.error).sum();
        }
    }
    Ok(heap.iter().map(|s| s.value).sum())
}

/// Integral over `(a, b)` of a function with inverse-square-root behaviour at
/// both endpoints, using `t = m + h·sin u`.
pub fn integrate_singular(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64, NumericsError> {
    integrate_singular_with_offsets(|t, _, _| f(t), a, b, tol)
}

/// As [`integrate_singular`], but the integrand also receives `t − a` and
/// `b − t` computed without cancellation near the endpoints.
pub fn integrate_singular_with_offsets(
    mut f: impl FnMut(f64, f64, f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    if !(b > a) {
        return Err(NumericsError::EmptySpan(a, b));
    }
    let h = 0.5 * (b - a);
    let g = |u: f64| {
        let s = (std::f64::consts::FRAC_PI_4 - 0.5 * u).sin();
        let c = (std::f64::consts::FRAC_PI_4 - 0.5 * u).cos();
        let right = 2.0 * h * s * s;
        let left = 2.0 * h * c * c;
        let t = if u < 0.0 { a + left } else { b - right };
        f(t, left, right) * h * u.cos()
    };
    let value = integrate(g, -FRAC_PI_2, FRAC_PI_2, tol)?;
    if !value.is_finite() {
        return Err(NumericsError::Quadrature("non-integrable endpoint behaviour".into()));
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomial_exact() {
        let v = integrate(|x| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14).unwrap();
        assert!((v - 0.0).abs() < 1e-13);
    }

    #[test]
    fn arcsine_integral() {
        let v = integrate_singular(|t| 1.0 / (1.0 - t * t).sqrt(), -1.0, 1.0, 1e-12).unwrap();
        assert!((v - PI).abs() < 1e-10);
    }

    #[test]
    fn offsets_are_consistent() {
        integrate_singular_with_offsets(
            |t, l, r| {
                assert!((t - (-2.0 + l)).abs() < 1e-12 && (t - (3.0 - r)).abs() < 1e-12);
                assert!(l >= 0.0 && r >= 0.0);
                1.0
            },
            -2.0,
            3.0,
            1e-10,
        )
        .unwrap();
    }

    #[test]
    fn weighted_singular_integral() {
        // ∫_{-1}^{1} (1+t²)/√(1−t²) = 3π/2
        let v = integrate_singular(|t| (1.0 + t * t) / (1.0 - t * t).sqrt(), -1.0, 1.0, 1e-13).unwrap();
        assert!((v - 1.5 * PI).abs() < 1e-11);
    }

    #[test]
    fn resolution_invariance() {
        let f = |t: f64| t.exp() / ((t + 0.3) * (1.7 - t)).sqrt();
        let a = integrate_singular(f, -0.3, 1.7, 1e-10).unwrap();
        let b = integrate_singular(f, -0.3, 1.7, 1e-13).unwrap();
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn non_integrable_blowup_is_reported() {
        assert!(integrate_singular(|t| 1.0 / (1.0 - t * t), -1.0, 1.0, 1e-10).is_err());
    }
}
