//! Planar vectors and the field's angle convention.
//!
//! The origin sits at the field center, `x` grows toward the right line and
//! `y` grows toward the bottom line. Because `y` points down, `atan2(y, x)`
//! already increases clockwise, with zero pointing at the right line.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    /// Unit vector pointing along a global angle in degrees.
    pub fn from_angle(degrees: f64) -> Self {
        let r = degrees.to_radians();
        Vec2::new(r.cos(), r.sin())
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Vec2) -> f64 {
        (other - self).norm()
    }

    /// Global angle of this vector in `[0, 360)`. The zero vector maps to 0.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x).to_degrees())
    }

    /// Rescales to `max_norm` when longer than it.
    pub fn clamp_norm(self, max_norm: f64) -> Self {
        let n = self.norm();
        if n > max_norm && n > 0.0 {
            self * (max_norm / n)
        } else {
            self
        }
    }

    /// Rotates clockwise (in field coordinates) by `degrees`.
    pub fn rotate(self, degrees: f64) -> Self {
        let (s, c) = degrees.to_radians().sin_cos();
        Vec2::new(self.x * c - self.y * s, self.x * s + self.y * c)
    }
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
    fn mul(self, rhs: f64) -> Vec2 {
        Vec2::new(self.x * rhs, self.y * rhs)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

/// Maps any angle in degrees onto `[0, 360)`.
pub fn normalize_angle(degrees: f64) -> f64 {
    let a = degrees.rem_euclid(360.0);
    // rem_euclid of a tiny negative value rounds up to exactly 360
    if a >= 360.0 {
        0.0
    } else {
        a
    }
}

/// Maps any angle in degrees onto `(-180, 180]`.
pub fn signed_angle(degrees: f64) -> f64 {
    let a = normalize_angle(degrees);
    if a > 180.0 {
        a - 360.0
    } else {
        a
    }
}

/// Global bearing from `from` to `to` in `[0, 360)`.
pub fn bearing(from: Vec2, to: Vec2) -> f64 {
    (to - from).angle()
}
