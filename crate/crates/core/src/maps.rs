//! The cubic Hénon family `x' = y, y' = M1 + M2 y - J x + nu y^3`, its inverse,
//! its differential and the reversing involution `(x, y) -> (y, x)`.

use std::fmt;
use std::str::FromStr;

use nalgebra::Matrix2;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Mat2 = Matrix2<f64>;

/// A point of the phase plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

impl PlanePoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(&self, other: &PlanePoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn scaled(self, s: f64) -> PlanePoint {
        PlanePoint::new(self.x * s, self.y * s)
    }
}

impl std::ops::Add for PlanePoint {
    type Output = PlanePoint;
    fn add(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for PlanePoint {
    type Output = PlanePoint;
    fn sub(self, o: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.x - o.x, self.y - o.y)
    }
}

/// Sign of the cubic term: `Plus` selects the map C+, `Minus` selects C-.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_i32(v: i32) -> Result<Self> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::domain(format!("sign must be +1 or -1, got {v}"))),
        }
    }

    /// Sign of a nonzero real number.
    pub fn of(v: f64) -> Result<Self> {
        if v > 0.0 {
            Ok(Sign::Plus)
        } else if v < 0.0 {
            Ok(Sign::Minus)
        } else {
            Err(Error::domain(format!("sign of {v} is undefined")))
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

impl FromStr for Sign {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" | "+1" | "1" | "plus" => Ok(Sign::Plus),
            "-" | "-1" | "minus" => Ok(Sign::Minus),
            other => Err(Error::domain(format!("expected +1 or -1, got '{other}'"))),
        }
    }
}

/// Anything that maps the plane to itself and can report its linearization.
pub trait PlanarMap {
    fn apply(&self, p: PlanePoint) -> PlanePoint;
    fn differential(&self, p: PlanePoint) -> Mat2;
}

impl<M: PlanarMap + ?Sized> PlanarMap for &M {
    fn apply(&self, p: PlanePoint) -> PlanePoint {
        (**self).apply(p)
    }
    fn differential(&self, p: PlanePoint) -> Mat2 {
        (**self).differential(p)
    }
}

/// `x' = y`, `y' = M1 + M2 y - J x + nu y^3`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicHenonMap {
    nu: Sign,
    m1: f64,
    m2: f64,
    j: f64,
}

impl CubicHenonMap {
    /// The area-preserving member (`J = 1`).
    pub fn new(nu: Sign, m1: f64, m2: f64) -> Self {
        Self { nu, m1, m2, j: 1.0 }
    }

    pub fn with_jacobian(nu: Sign, m1: f64, m2: f64, j: f64) -> Result<Self> {
        if j == 0.0 || !j.is_finite() {
            return Err(Error::domain(format!("Jacobian must be finite and nonzero, got {j}")));
        }
        Ok(Self { nu, m1, m2, j })
    }

    pub fn nu(&self) -> Sign {
        self.nu
    }

    pub fn m1(&self) -> f64 {
        self.m1
    }

    pub fn m2(&self) -> f64 {
        self.m2
    }

    pub fn jacobian(&self) -> f64 {
        self.j
    }

    pub fn is_conservative(&self) -> bool {
        self.j == 1.0
    }

    pub fn with_params(&self, m1: f64, m2: f64) -> Self {
        Self { m1, m2, ..*self }
    }

    pub fn invert(&self, p: PlanePoint) -> PlanePoint {
        let xb = p.x;
        let x = (self.m1 + self.m2 * xb + self.nu.value() * xb * xb * xb - p.y) / self.j;
        PlanePoint::new(x, xb)
    }

    /// The map with the sign of the parameters `M1` flipped; conjugate to `self` by `p -> -p`.
    pub fn mirrored(&self) -> Self {
        Self { m1: -self.m1, ..*self }
    }
}

impl PlanarMap for CubicHenonMap {
    fn apply(&self, p: PlanePoint) -> PlanePoint {
        let y = p.y;
        PlanePoint::new(y, self.m1 + self.m2 * y - self.j * p.x + self.nu.value() * y * y * y)
    }

    fn differential(&self, p: PlanePoint) -> Mat2 {
        Mat2::new(0.0, 1.0, -self.j, self.m2 + 3.0 * self.nu.value() * p.y * p.y)
    }
}

/// The involution `(x, y) -> (y, x)` that reverses every conservative cubic Hénon map.
pub fn reversor(p: PlanePoint) -> PlanePoint {
    PlanePoint::new(p.y, p.x)
}

/// Applies `map` `n` times, returning the image and the product of differentials.
pub fn iterate_with_jacobian<M: PlanarMap + ?Sized>(map: &M, p: PlanePoint, n: usize) -> (PlanePoint, Mat2) {
    let mut q = p;
    let mut jac = Mat2::identity();
    for _ in 0..n {
        jac = map.differential(q) * jac;
        q = map.apply(q);
    }
    (q, jac)
}

pub fn iterate<M: PlanarMap + ?Sized>(map: &M, p: PlanePoint, n: usize) -> PlanePoint {
    (0..n).fold(p, |q, _| map.apply(q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn apply_examples() {
        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        assert_eq!(m.apply(PlanePoint::new(0.0, 0.0)), PlanePoint::new(0.0, 0.0));

        let m = CubicHenonMap::new(Sign::Plus, 1.0, 2.0);
        assert_eq!(m.apply(PlanePoint::new(1.0, 1.0)), PlanePoint::new(1.0, 3.0));

        let m = CubicHenonMap::new(Sign::Minus, 0.0, 3.0);
        assert_eq!(m.apply(PlanePoint::new(1.0, 1.0)), PlanePoint::new(1.0, 1.0));
    }

    #[test]
    fn invert_examples() {
        let m = CubicHenonMap::new(Sign::Plus, 0.3, -0.7);
        let p = PlanePoint::new(0.1, 0.2);
        let back = m.invert(m.apply(p));
        assert_abs_diff_eq!(back.x, p.x, epsilon = 1e-14);
        assert_abs_diff_eq!(back.y, p.y, epsilon = 1e-14);

        let m = CubicHenonMap::new(Sign::Plus, 0.0, 0.0);
        assert_eq!(m.invert(PlanePoint::new(0.0, 0.0)), PlanePoint::new(0.0, 0.0));

        let m = CubicHenonMap::new(Sign::Minus, 0.0, 3.0);
        assert_eq!(m.invert(PlanePoint::new(1.0, 1.0)), PlanePoint::new(1.0, 1.0));
    }

    #[test]
    fn differential_examples() {
        let m = CubicHenonMap::new(Sign::Plus, 0.4, -1.3);
        assert_eq!(m.differential(PlanePoint::new(5.0, 0.0)).trace(), -1.3);

        let m = CubicHenonMap::new(Sign::Plus, 2.0, -1.0);
        assert_eq!(m.differential(PlanePoint::new(1.0, 1.0)).trace(), 2.0);
    }

    #[test]
    fn reversor_examples() {
        assert_eq!(reversor(PlanePoint::new(1.0, 2.0)), PlanePoint::new(2.0, 1.0));
        let p = PlanePoint::new(-0.3, 7.5);
        assert_eq!(reversor(reversor(p)), p);
    }

    #[test]
    fn zero_jacobian_rejected() {
        assert!(CubicHenonMap::with_jacobian(Sign::Plus, 0.0, 0.0, 0.0).is_err());
        assert!(CubicHenonMap::with_jacobian(Sign::Plus, 0.0, 0.0, 0.3).is_ok());
    }

    #[test]
    fn dissipative_inverse_round_trip() {
        let m = CubicHenonMap::with_jacobian(Sign::Minus, 0.2, 0.9, 0.3).unwrap();
        let p = PlanePoint::new(0.7, -0.4);
        let back = m.invert(m.apply(p));
        assert_abs_diff_eq!(back.x, p.x, epsilon = 1e-14);
        assert_abs_diff_eq!(back.y, p.y, epsilon = 1e-14);
        assert_abs_diff_eq!(m.differential(p).determinant(), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn sign_parsing() {
        assert_eq!("+1".parse::<Sign>().unwrap(), Sign::Plus);
        assert_eq!("-".parse::<Sign>().unwrap(), Sign::Minus);
        assert!("0".parse::<Sign>().is_err());
        assert!(Sign::from_i32(2).is_err());
    }
}
