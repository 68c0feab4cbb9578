use serde::Serialize;

use super::group::{structure_field, Alpha};

type Vec3 = [f64; 3];

#[derive(Debug, Clone, Serialize)]
pub struct PlaneCurvatures {
    pub plane: &'static str,
    pub sectional: f64,
    pub intrinsic: f64,
    pub extrinsic: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvatureData {
    pub alpha: f64,
    /// `connection[i][j]` holds the frame components of `∇_{e_i} e_j` for `e = (X, Y, Z)`.
    pub connection: [[Vec3; 3]; 3],
    pub planes: Vec<PlaneCurvatures>,
    pub scalar: f64,
    /// `2α − 2 − 2α²`.
    pub scalar_formula: f64,
    /// `max |Σ_α(v) + ∇_v v|` over a grid of unit vectors.
    pub structure_field_defect: f64,
}

fn brackets(a: f64) -> [[Vec3; 3]; 3] {
    let mut c = [[[0.0; 3]; 3]; 3];
    // [Y, Z] = αY, [X, Z] = −X, [X, Y] = 0.
    c[1][2] = [0.0, a, 0.0];
    c[2][1] = [0.0, -a, 0.0];
    c[0][2] = [-1.0, 0.0, 0.0];
    c[2][0] = [1.0, 0.0, 0.0];
    c
}

/// Levi-Civita connection of the left-invariant metric from the Koszul formula
/// for an orthonormal frame.
fn connection(a: f64) -> [[Vec3; 3]; 3] {
    let c = brackets(a);
    let mut g = [[[0.0; 3]; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                g[i][j][k] = 0.5 * (c[i][j][k] - c[j][k][i] + c[k][i][j]);
            }
        }
    }
    g
}

fn covariant(g: &[[Vec3; 3]; 3], u: Vec3, w: Vec3) -> Vec3 {
    let mut out = [0.0; 3];
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                out[k] += u[i] * w[j] * g[i][j][k];
            }
        }
    }
    out
}

fn bracket(c: &[[Vec3; 3]; 3], u: Vec3, w: Vec3) -> Vec3 {
    covariant(c, u, w)
}

fn basis(i: usize) -> Vec3 {
    let mut e = [0.0; 3];
    e[i] = 1.0;
    e
}

fn riemann(g: &[[Vec3; 3]; 3], c: &[[Vec3; 3]; 3], u: Vec3, v: Vec3, w: Vec3) -> Vec3 {
    let a = covariant(g, u, covariant(g, v, w));
    let b = covariant(g, v, covariant(g, u, w));
    let d = covariant(g, bracket(c, u, v), w);
    [a[0] - b[0] - d[0], a[1] - b[1] - d[1], a[2] - b[2] - d[2]]
}

fn dot(p: Vec3, q: Vec3) -> f64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

pub fn curvature_data(alpha: Alpha) -> CurvatureData {
    let a = alpha.value();
    let g = connection(a);
    let c = brackets(a);
    let sectional = |i: usize, j: usize| dot(riemann(&g, &c, basis(i), basis(j), basis(j)), basis(i));
    let mut planes = Vec::new();
    for (name, i, j, n) in [("XY", 0, 1, 2), ("XZ", 0, 2, 1), ("YZ", 1, 2, 0)] {
        // Shape operator S(u) = −∇_u N restricted to the plane.
        let s = |u: usize, w: usize| -dot(covariant(&g, basis(u), basis(n)), basis(w));
        let (s11, s12, s21, s22) = (s(i, i), s(i, j), s(j, i), s(j, j));
        let extrinsic = s11 * s22 - s12 * s21;
        let k = sectional(i, j);
        planes.push(PlaneCurvatures { plane: name, sectional: k, intrinsic: extrinsic + k, extrinsic, mean: 0.5 * (s11 + s22) });
    }
    let scalar = 2.0 * planes.iter().map(|p| p.sectional).sum::<f64>();

    let mut defect: f64 = 0.0;
    for it in 0..=12 {
        for ip in 0..24 {
            let th = std::f64::consts::PI * it as f64 / 12.0;
            let ph = std::f64::consts::TAU * ip as f64 / 24.0;
            let v = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            let nab = covariant(&g, v, v);
            let s = structure_field(v, alpha);
            for k in 0..3 {
                defect = defect.max((s[k] + nab[k]).abs());
            }
        }
    }
    CurvatureData { alpha: a, connection: g, planes, scalar, scalar_formula: 2.0 * a - 2.0 - 2.0 * a * a, structure_field_defect: defect }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connection_table() {
        let a = 0.37;
        let d = curvature_data(Alpha::new(a).unwrap());
        let g = d.connection;
        assert_eq!(g[0][0], [0.0, 0.0, 1.0]);
        assert_eq!(g[0][2], [-1.0, 0.0, 0.0]);
        assert_eq!(g[1][1], [0.0, 0.0, -a]);
        assert_eq!(g[1][2], [0.0, a, 0.0]);
        for (i, j) in [(0, 1), (1, 0), (2, 0), (2, 1), (2, 2)] {
            assert_eq!(g[i][j], [0.0; 3]);
        }
        assert!(d.structure_field_defect < 1e-15);
    }

    #[test]
    fn plane_table_and_scalar() {
        for a in [-1.0, -0.3, 0.0, 0.25, 0.5, 1.0] {
            let d = curvature_data(Alpha::new(a).unwrap());
            let xy = &d.planes[0];
            assert!((xy.sectional - a).abs() < 1e-15 && xy.intrinsic.abs() < 1e-15);
            assert!((xy.extrinsic + a).abs() < 1e-15 && (xy.mean - (1.0 - a) / 2.0).abs() < 1e-15);
            let xz = &d.planes[1];
            assert!((xz.sectional + 1.0).abs() < 1e-15 && xz.extrinsic == 0.0 && xz.mean == 0.0);
            let yz = &d.planes[2];
            assert!((yz.sectional + a * a).abs() < 1e-15 && yz.extrinsic == 0.0 && yz.mean == 0.0);
            assert!((d.scalar - d.scalar_formula).abs() < 1e-14);
        }
        assert!((curvature_data(Alpha::new(0.5).unwrap()).scalar + 1.5).abs() < 1e-15);
        assert!((curvature_data(Alpha::new(-1.0).unwrap()).scalar + 6.0).abs() < 1e-15);
        for a in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let s = curvature_data(Alpha::new(a).unwrap()).scalar;
            let t = curvature_data(Alpha::new(1.0 - a).unwrap()).scalar;
            assert!((s - t).abs() < 1e-15);
        }
    }
}
