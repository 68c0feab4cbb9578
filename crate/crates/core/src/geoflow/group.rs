use std::ops::{Add, Mul};

use serde::Serialize;

use super::GeoError;

/// Deformation parameter of the family, in `[−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct Alpha(f64);

impl Alpha {
    pub fn new(value: f64) -> Result<Self, GeoError> {
        if !value.is_finite() || !(-1.0..=1.0).contains(&value) {
            return Err(GeoError::Domain { name: "alpha", value, range: "[-1, 1]".into() });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Operations that rely on loop level sets need `α ∈ (0, 1]`.
    pub fn require_positive(self) -> Result<f64, GeoError> {
        if self.0 > 0.0 {
            Ok(self.0)
        } else {
            Err(GeoError::Domain { name: "alpha", value: self.0, range: "(0, 1]".into() })
        }
    }
}

/// Point of `G_α ≅ ℝ³`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct GroupPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl GroupPoint {
    pub const IDENTITY: Self = Self { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        GroupPoint::new(self.x - other.x, self.y - other.y, self.z - other.z).norm()
    }
}

/// `(x, y, z) ∗ (x′, y′, z′) = (x′eᶻ + x, y′e^{−αz} + y, z′ + z)`.
pub fn group_mul(p: GroupPoint, q: GroupPoint, alpha: Alpha) -> GroupPoint {
    let a = alpha.value();
    GroupPoint { x: q.x * p.z.exp() + p.x, y: q.y * (-a * p.z).exp() + p.y, z: q.z + p.z }
}

pub fn group_inv(p: GroupPoint, alpha: Alpha) -> GroupPoint {
    let a = alpha.value();
    GroupPoint { x: -p.x * (-p.z).exp(), y: -p.y * (a * p.z).exp(), z: -p.z }
}

/// `exp(ε(aX + bY + cZ))`, the time-ε point of the one-parameter subgroup.
pub fn one_parameter_element(v: [f64; 3], eps: f64, alpha: Alpha) -> GroupPoint {
    let a = alpha.value();
    let c = v[2] * eps;
    // (e^{c} − 1)/c and (1 − e^{−αc})/(αc), both → 1 as c → 0.
    let fx = if c.abs() < 1e-300 { 1.0 } else { c.exp_m1() / c };
    let ac = a * c;
    let fy = if ac.abs() < 1e-300 { 1.0 } else { -(-ac).exp_m1() / ac };
    GroupPoint { x: v[0] * eps * fx, y: v[1] * eps * fy, z: c }
}

/// Unit vector of the Lie algebra in the orthonormal frame `{X, Y, Z}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitTangent {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitTangent {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, GeoError> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > 1e-10 {
            return Err(GeoError::Domain { name: "|v|^2", value: n2, range: "1 ± 1e-10".into() });
        }
        Ok(Self { x, y, z })
    }

    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, GeoError> {
        let n = (x * x + y * y + z * z).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(GeoError::Domain { name: "|v|", value: n, range: "(0, inf)".into() });
        }
        Ok(Self { x: x / n, y: y / n, z: z / n })
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }
}

impl Add for GroupPoint {
    type Output = GroupPoint;
    fn add(self, o: Self) -> Self {
        GroupPoint::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Mul<f64> for GroupPoint {
    type Output = GroupPoint;
    fn mul(self, s: f64) -> Self {
        GroupPoint::new(self.x * s, self.y * s, self.z * s)
    }
}

/// `Σ_α(x, y, z) = (xz, −αyz, αy² − x²)`.
pub fn structure_field(v: [f64; 3], alpha: Alpha) -> [f64; 3] {
    let a = alpha.value();
    let [x, y, z] = v;
    [x * z, -a * y * z, a * y * y - x * x]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(p: GroupPoint, q: GroupPoint, tol: f64) -> bool {
        p.distance(&q) < tol
    }

    #[test]
    fn identity_element() {
        let a = Alpha::new(0.5).unwrap();
        let p = GroupPoint::new(1.3, -0.2, 0.7);
        assert_eq!(group_mul(p, GroupPoint::IDENTITY, a), p);
        assert_eq!(group_mul(GroupPoint::IDENTITY, p, a), p);
    }

    #[test]
    fn alpha_range() {
        assert!(Alpha::new(1.5).is_err());
        assert!(Alpha::new(f64::NAN).is_err());
        assert!(Alpha::new(0.0).unwrap().require_positive().is_err());
    }

    #[test]
    fn equilibria_of_structure_field() {
        let a = Alpha::new(0.5).unwrap();
        assert_eq!(structure_field([0.0, 0.0, 1.0], a), [0.0, 0.0, 0.0]);
        let v = [(0.5f64 / 1.5).sqrt(), (1.0f64 / 1.5).sqrt(), 0.0];
        let s = structure_field(v, a);
        assert!(s.iter().all(|c| c.abs() < 1e-15), "{s:?}");
    }

    #[test]
    fn subgroup_element_is_a_homomorphism() {
        let a = Alpha::new(0.3).unwrap();
        let v = [0.6, -0.48, 0.64];
        let p = one_parameter_element(v, 0.7, a);
        let q = one_parameter_element(v, 0.5, a);
        let r = one_parameter_element(v, 1.2, a);
        assert!(close(group_mul(p, q, a), r, 1e-14));
        let flat = one_parameter_element([0.6, 0.8, 0.0], 2.0, a);
        assert_eq!(flat, GroupPoint::new(1.2, 1.6, 0.0));
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(x in -5.0f64..5.0, y in -5.0f64..5.0, z in -3.0f64..3.0, al in -1.0f64..=1.0) {
            let a = Alpha::new(al).unwrap();
            let p = GroupPoint::new(x, y, z);
            let scale = 1.0 + p.norm() * (3.0 * al.abs().max(1.0)).exp();
            prop_assert!(close(group_mul(p, group_inv(p, a), a), GroupPoint::IDENTITY, 1e-14 * scale));
            prop_assert!(close(group_mul(group_inv(p, a), p, a), GroupPoint::IDENTITY, 1e-14 * scale));
        }

        #[test]
        fn associativity(u in prop::array::uniform9(-2.0f64..2.0), al in -1.0f64..=1.0) {
            let a = Alpha::new(al).unwrap();
            let p = GroupPoint::new(u[0], u[1], u[2]);
            let q = GroupPoint::new(u[3], u[4], u[5]);
            let r = GroupPoint::new(u[6], u[7], u[8]);
            let lhs = group_mul(group_mul(p, q, a), r, a);
            let rhs = group_mul(p, group_mul(q, r, a), a);
            prop_assert!(close(lhs, rhs, 1e-12));
        }

        #[test]
        fn field_is_tangent_to_sphere(th in 0.0f64..std::f64::consts::PI, ph in 0.0f64..std::f64::consts::TAU, al in -1.0f64..=1.0) {
            let v = [th.sin() * ph.cos(), th.sin() * ph.sin(), th.cos()];
            let s = structure_field(v, Alpha::new(al).unwrap());
            prop_assert!((v[0] * s[0] + v[1] * s[1] + v[2] * s[2]).abs() < 1e-15);
        }
    }
}
