use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Below this norm a vector is treated as zero when normalizing, so an agent
/// sitting exactly on its reference point produces no force instead of NaN.
pub const EPS_ZERO: f64 = 1e-9;

/// Planar vector in meters. Positions, velocities and forces all use it.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        libm::hypot(self.x, self.y)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// `v / ‖v‖`, or the zero vector when `‖v‖ ≤ EPS_ZERO`. Total on finite input.
pub fn unit_vector(v: Vec2) -> Vec2 {
    let n = v.norm();
    if n <= EPS_ZERO {
        Vec2::ZERO
    } else {
        Vec2::new(v.x / n, v.y / n)
    }
}

/// Arithmetic mean of a non-empty point set.
pub fn center_of_mass(points: &[Vec2]) -> Result<Vec2> {
    if points.is_empty() {
        return Err(Error::InvalidInput("center_of_mass of empty set".into()));
    }
    let mut sum = Vec2::ZERO;
    for p in points {
        sum += *p;
    }
    let n = points.len() as f64;
    Ok(Vec2::new(sum.x / n, sum.y / n))
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_vector_scales_by_norm() {
        let u = unit_vector(Vec2::new(3.0, 4.0));
        assert!((u.x - 0.6).abs() < 1e-15);
        assert!((u.y - 0.8).abs() < 1e-15);
    }

    #[test]
    fn unit_vector_zero_is_zero() {
        assert_eq!(unit_vector(Vec2::ZERO), Vec2::ZERO);
    }

    #[test]
    fn unit_vector_axis() {
        assert_eq!(unit_vector(Vec2::new(-2.0, 0.0)), Vec2::new(-1.0, 0.0));
    }

    #[test]
    fn com_midpoint_singleton_mean() {
        let m = center_of_mass(&[Vec2::new(0.0, 0.0), Vec2::new(2.0, 0.0)]).unwrap();
        assert_eq!(m, Vec2::new(1.0, 0.0));
        let s = center_of_mass(&[Vec2::new(1.0, 1.0)]).unwrap();
        assert_eq!(s, Vec2::new(1.0, 1.0));
        let t = center_of_mass(&[
            Vec2::new(0.0, 0.0),
            Vec2::new(0.0, 3.0),
            Vec2::new(3.0, 0.0),
        ])
        .unwrap();
        assert_eq!(t, Vec2::new(1.0, 1.0));
    }

    #[test]
    fn com_empty_errors() {
        assert!(center_of_mass(&[]).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn finite() -> impl Strategy<Value = f64> {
            -1e6f64..1e6
        }

        proptest! {
            #[test]
            fn unit_vector_norm_is_one_or_zero(x in finite(), y in finite()) {
                let n = unit_vector(Vec2::new(x, y)).norm();
                prop_assert!(n == 0.0 || (n - 1.0).abs() < 1e-12);
            }

            #[test]
            fn com_translation_equivariant(
                pts in prop::collection::vec((finite(), finite()), 1..8),
                cx in finite(), cy in finite(),
            ) {
                let c = Vec2::new(cx, cy);
                let base: alloc::vec::Vec<Vec2> =
                    pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
                let shifted: alloc::vec::Vec<Vec2> =
                    base.iter().map(|&p| p + c).collect();
                let a = center_of_mass(&base).unwrap() + c;
                let b = center_of_mass(&shifted).unwrap();
                prop_assert!((a - b).norm() < 1e-6);
            }

            #[test]
            fn com_permutation_invariant(
                pts in prop::collection::vec((finite(), finite()), 2..8),
            ) {
                let base: alloc::vec::Vec<Vec2> =
                    pts.iter().map(|&(x, y)| Vec2::new(x, y)).collect();
                let mut rev = base.clone();
                rev.reverse();
                let a = center_of_mass(&base).unwrap();
                let b = center_of_mass(&rev).unwrap();
                prop_assert!((a - b).norm() < 1e-9);
            }
        }
    }
}
