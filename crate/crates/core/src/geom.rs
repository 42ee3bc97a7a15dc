//! Planar points and rectangles.

use std::ops::{Add, Mul, Sub};

use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Real> Vec2<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    /// Unit vector pointing along `heading_deg` (0 = +x, 90 = +y).
    pub fn from_heading_deg(heading_deg: T) -> Self {
        let r = heading_deg.to_radians();
        Self::new(r.cos(), r.sin())
    }

    pub fn dot(self, other: Self) -> T {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> T {
        self.x.hypot(self.y)
    }

    pub fn distance(self, other: Self) -> T {
        (self - other).norm()
    }

    /// Heading of this vector in degrees, in `(-180, 180]`.
    pub fn heading_deg(self) -> T {
        self.y.atan2(self.x).to_degrees()
    }

    /// Counter-clockwise perpendicular (the left-hand side when facing along `self`).
    pub fn perp_left(self) -> Self {
        Self::new(-self.y, self.x)
    }

    pub fn lerp(self, other: Self, t: T) -> Self {
        self + (other - self) * t
    }

    /// Distance to the closed segment `a..b`.
    pub fn distance_to_segment(self, a: Self, b: Self) -> T {
        let ab = b - a;
        let len2 = ab.dot(ab);
        if !(len2 > T::zero()) {
            return self.distance(a);
        }
        let t = ((self - a).dot(ab) / len2).max(T::zero()).min(T::one());
        self.distance(a + ab * t)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Real> Add for Vec2<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Real> Sub for Vec2<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Real> Mul<T> for Vec2<T> {
    type Output = Self;
    fn mul(self, rhs: T) -> Self {
        Self::new(self.x * rhs, self.y * rhs)
    }
}

/// Axis-aligned rectangle, closed on all sides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect<T> {
    pub min: Vec2<T>,
    pub max: Vec2<T>,
}

impl<T: Real> Rect<T> {
    pub fn new(min: Vec2<T>, max: Vec2<T>) -> Self {
        Self { min, max }
    }

    pub fn from_origin_size(origin: Vec2<T>, width: T, height: T) -> Self {
        Self::new(origin, Vec2::new(origin.x + width, origin.y + height))
    }

    pub fn width(&self) -> T {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> T {
        self.max.y - self.min.y
    }

    pub fn area(&self) -> T {
        self.width() * self.height()
    }

    pub fn center(&self) -> Vec2<T> {
        self.min.lerp(self.max, lit(0.5))
    }

    /// True when both extents are positive and finite.
    pub fn is_proper(&self) -> bool {
        self.min.is_finite()
            && self.max.is_finite()
            && self.max.x > self.min.x
            && self.max.y > self.min.y
    }

    pub fn contains(&self, p: Vec2<T>) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    /// Bounding box of two points grown by `margin` on every side.
    pub fn around(a: Vec2<T>, b: Vec2<T>, margin: T) -> Self {
        Self::new(
            Vec2::new(a.x.min(b.x) - margin, a.y.min(b.y) - margin),
            Vec2::new(a.x.max(b.x) + margin, a.y.max(b.y) + margin),
        )
    }

    pub fn intersect(&self, other: &Self) -> Self {
        Self::new(
            Vec2::new(self.min.x.max(other.min.x), self.min.y.max(other.min.y)),
            Vec2::new(self.max.x.min(other.max.x), self.max.y.min(other.max.y)),
        )
    }

    /// Shrinks every side by `margin`.
    pub fn inset(&self, margin: T) -> Self {
        Self::new(
            Vec2::new(self.min.x + margin, self.min.y + margin),
            Vec2::new(self.max.x - margin, self.max.y - margin),
        )
    }

    pub fn clamp(&self, p: Vec2<T>) -> Vec2<T> {
        Vec2::new(
            p.x.max(self.min.x).min(self.max.x),
            p.y.max(self.min.y).min(self.max.y),
        )
    }
}
