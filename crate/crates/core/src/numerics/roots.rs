use super::NumericsError;

/// Brent's method: inverse quadratic / secant steps safeguarded by bisection.
/// Returns once the bracket is narrower than `tol` or `f` vanishes exactly.
pub fn find_root(mut f: impl FnMut(f64) -> f64, bracket: (f64, f64), tol: f64) -> Result<f64, NumericsError> {
    let (mut a, mut b) = bracket;
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(NumericsError::Bracket { a, b });
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..500 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(NumericsError::Bracket { a, b });
        }
    }
    Ok(b)
}

/// Grows `[start, start + step·2^k]` geometrically until `f` changes sign.
/// `step` may be negative to search leftwards.
pub fn expand_bracket(mut f: impl FnMut(f64) -> f64, start: f64, step: f64, max_doublings: usize) -> Result<(f64, f64), NumericsError> {
    let f0 = f(start);
    let mut lo = start;
    let mut h = step;
    for _ in 0..max_doublings {
        let hi = start + h;
        let fh = f(hi);
        if fh.signum() != f0.signum() || fh == 0.0 {
            return Ok(if lo < hi { (lo, hi) } else { (hi, lo) });
        }
        lo = hi;
        h *= 2.0;
    }
    Err(NumericsError::Bracket { a: start, b: start + h })
}
