use std::f64::consts::{FRAC_2_SQRT_PI, PI};

use super::NumericsError;

/// Complete elliptic integral of the first kind in the parameter convention,
/// `K(m) = ∫₀^{π/2} dθ/√(1 − m sin²θ)`, by the arithmetic–geometric mean.
pub fn elliptic_k(m: f64) -> Result<f64, NumericsError> {
    if !(0.0..1.0).contains(&m) {
        return Err(NumericsError::Domain { value: m, domain: "[0, 1)" });
    }
    let mut a = 1.0f64;
    let mut b = (1.0 - m).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let an = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = an;
    }
    Ok(PI / (2.0 * a))
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        return 2.0 - erfc(-x);
    }
    if x <= 1.0 {
        1.0 - erf_series(x)
    } else {
        erfc_continued_fraction(x)
    }
}

/// `erf(x) = 2x/√π · e^{−x²} · Σ (2x²)ⁿ / (1·3·…·(2n+1))`; all terms positive.
fn erf_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut n = 0.0;
    while term > 1e-17 * sum {
        n += 1.0;
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
    }
    FRAC_2_SQRT_PI * x * (-x2).exp() * sum
}

/// `erfc(x) = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …))))`, modified Lentz.
fn erfc_continued_fraction(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for k in 1..5000 {
        let a = k as f64 * 0.5;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k_by_trapezoid(m: f64) -> f64 {
        // Integrand is smooth and π-periodic in θ, so the periodic trapezoid rule
        // converges geometrically.
        let n = 400;
        let h = PI / n as f64;
        let sum: f64 = (0..n).map(|i| 1.0 / (1.0 - m * (i as f64 * h).sin().powi(2)).sqrt()).sum();
        0.5 * sum * h
    }

    fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0
    }

    #[test]
    fn k_at_zero() {
        assert_eq!(elliptic_k(0.0).unwrap(), PI / 2.0);
    }

    #[test]
    fn k_matches_quadrature() {
        for m in [0.5, 0.1, 0.9] {
            let k = elliptic_k(m).unwrap();
            assert!((k - k_by_trapezoid(m)).abs() < 1e-12, "m={m}");
        }
    }

    #[test]
    fn k_domain() {
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_k(-0.1).is_err());
    }

    #[test]
    fn sol_period_at_near_degenerate_level() {
        let beta: f64 = 0.999;
        let b2 = beta * beta;
        let p = 4.0 / (1.0 + b2).sqrt() * elliptic_k((1.0 - b2) / (1.0 + b2)).unwrap();
        assert!((p - 4.44622).abs() < 5e-3, "{p}");
    }

    #[test]
    fn erfc_basic_values() {
        assert_eq!(erfc(0.0), 1.0);
        let v = erfc(10.0);
        assert!(v > 0.0 && v < 1e-40);
        assert!((erfc(-1.0) + erfc(1.0) - 2.0).abs() < 1e-15);
    }

    #[test]
    fn erfc_matches_quadrature() {
        let g = |t: f64| FRAC_2_SQRT_PI * (-t * t).exp();
        for x in [1.0, 0.5, 1.5, 3.0] {
            let q = simpson(g, x, 9.0, 200_000);
            let e = erfc(x);
            assert!(((e - q) / q).abs() < 1e-12, "x={x}: {e} vs {q}");
        }
    }

    proptest! {
        #[test]
        fn k_increasing(m in 0.0f64..0.99, dm in 1e-6f64..0.009) {
            let a = elliptic_k(m).unwrap();
            let b = elliptic_k(m + dm).unwrap();
            prop_assert!(b > a);
            prop_assert!(a >= PI / 2.0);
        }

        #[test]
        fn erfc_continuous_across_split(d in 1e-9f64..1e-6) {
            prop_assert!((erfc(1.0 - d) - erfc(1.0 + d)).abs() < 3.0 * d);
        }
    }
}
