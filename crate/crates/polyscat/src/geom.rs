//! Plane geometry primitives shared by every module: points, segments,
//! lines with unit normals, and reflections.
//!
//! Everything is plain `f64`; lengths are dimensionless. Reflections are
//! exact isometries up to rounding, which is what the involution tests
//! assert (`reflect(reflect(x)) == x` to 1e-12).

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ZERO: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    #[inline]
    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the cross product `self × other`.
    #[inline]
    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    /// Unit vector in the same direction. Returns `None` for (near-)zero input.
    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        if n < 1e-300 {
            None
        } else {
            Some(self / n)
        }
    }

    /// Rotation by +90 degrees (counterclockwise).
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    #[inline]
    pub fn rotated(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn from_angle(theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c, s)
    }

    #[inline]
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Div<f64> for Point {
    type Output = Point;
    #[inline]
    fn div(self, s: f64) -> Point {
        Point::new(self.x / s, self.y / s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

/// Closed segment between two points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    #[inline]
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    #[inline]
    pub fn midpoint(&self) -> Point {
        (self.a + self.b) * 0.5
    }

    #[inline]
    pub fn point_at(&self, t: f64) -> Point {
        self.a + (self.b - self.a) * t
    }

    /// Unit tangent a -> b. Degenerate segments yield `None`.
    pub fn tangent(&self) -> Option<Point> {
        (self.b - self.a).normalized()
    }

    /// Parameter of the point on the segment closest to `p`, clamped to [0,1].
    pub fn closest_t(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len_sq = d.norm_sq();
        if len_sq == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / len_sq).clamp(0.0, 1.0)
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        p.dist(self.point_at(self.closest_t(p)))
    }

    /// Minimum distance between two closed segments.
    pub fn distance_to_segment(&self, other: &Segment) -> f64 {
        if self.intersects(other) {
            return 0.0;
        }
        let d1 = self.distance_to_point(other.a).min(self.distance_to_point(other.b));
        let d2 = other.distance_to_point(self.a).min(other.distance_to_point(self.b));
        d1.min(d2)
    }

    /// Proper or touching intersection test (closed segments).
    pub fn intersects(&self, other: &Segment) -> bool {
        let d1 = orient(other.a, other.b, self.a);
        let d2 = orient(other.a, other.b, self.b);
        let d3 = orient(self.a, self.b, other.a);
        let d4 = orient(self.a, self.b, other.b);
        if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
            && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
        {
            return true;
        }
        (d1 == 0.0 && on_segment(other.a, other.b, self.a))
            || (d2 == 0.0 && on_segment(other.a, other.b, self.b))
            || (d3 == 0.0 && on_segment(self.a, self.b, other.a))
            || (d4 == 0.0 && on_segment(self.a, self.b, other.b))
    }
}

/// Signed area of the triangle (a, b, c); > 0 for counterclockwise order.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// A line in the plane stored as a point on the line plus a unit normal.
///
/// The reflection it induces is `x -> x - 2((x - p)·ν)ν`, an involution.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HyperplaneLine {
    pub point: Point,
    pub normal: Point,
}

impl HyperplaneLine {
    /// Builds a line, normalizing `normal`. Returns `None` if it is (near) zero
    /// or not finite.
    pub fn new(point: Point, normal: Point) -> Option<Self> {
        if !normal.x.is_finite() || !normal.y.is_finite() {
            return None;
        }
        let normal = normal.normalized()?;
        Some(HyperplaneLine { point, normal })
    }

    /// Line `{x : ν·x = c}` from a unit normal and offset.
    pub fn from_normal_offset(normal: Point, c: f64) -> Option<Self> {
        let normal = normal.normalized()?;
        Some(HyperplaneLine { point: normal * c, normal })
    }

    /// Signed distance of `p` from the line (positive on the normal side).
    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        (p - self.point).dot(self.normal)
    }

    /// Offset `c` such that the line is `{x : ν·x = c}`.
    #[inline]
    pub fn offset(&self) -> f64 {
        self.point.dot(self.normal)
    }

    /// Mirror image of `p` across the line.
    #[inline]
    pub fn reflect_point(&self, p: Point) -> Point {
        p - self.normal * (2.0 * self.signed_distance(p))
    }

    /// Mirror image of a direction vector (linear part of the reflection).
    #[inline]
    pub fn reflect_vector(&self, v: Point) -> Point {
        v - self.normal * (2.0 * v.dot(self.normal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_point_across_x_axis() {
        let pi = HyperplaneLine::new(Point::ZERO, Point::new(0.0, 1.0)).unwrap();
        let p = pi.reflect_point(Point::new(1.0, 2.0));
        assert_eq!(p, Point::new(1.0, -2.0));
    }

    #[test]
    fn reflect_fixed_point_on_line() {
        let pi = HyperplaneLine::new(Point::new(3.0, 0.0), Point::new(1.0, 0.0)).unwrap();
        let p = Point::new(3.0, -7.5);
        assert!(pi.reflect_point(p).dist(p) < 1e-15);
    }

    #[test]
    fn segment_distances() {
        let s = Segment::new(Point::ZERO, Point::new(10.0, 0.0));
        assert!((s.distance_to_point(Point::new(5.0, 3.0)) - 3.0).abs() < 1e-15);
        assert!((s.distance_to_point(Point::new(-4.0, 3.0)) - 5.0).abs() < 1e-15);
        let t = Segment::new(Point::new(0.0, 2.0), Point::new(10.0, 2.0));
        assert!((s.distance_to_segment(&t) - 2.0).abs() < 1e-15);
        let u = Segment::new(Point::new(5.0, -1.0), Point::new(5.0, 1.0));
        assert_eq!(s.distance_to_segment(&u), 0.0);
    }

    #[test]
    fn crossing_segments_intersect() {
        let s = Segment::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0));
        let t = Segment::new(Point::new(-1.0, 1.0), Point::new(1.0, -1.0));
        assert!(s.intersects(&t));
        let far = Segment::new(Point::new(5.0, 5.0), Point::new(6.0, 5.0));
        assert!(!s.intersects(&far));
    }
}
