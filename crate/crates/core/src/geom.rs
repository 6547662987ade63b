//! Planar points and the orientation/intersection predicates shared by the
//! scene validator and the distance kernels.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_l1(self) -> f64 {
        self.x.abs() + self.y.abs()
    }

    pub fn norm_inf(self) -> f64 {
        self.x.abs().max(self.y.abs())
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Sign of the turn a -> b -> c: +1 counter-clockwise, -1 clockwise, 0 collinear.
pub fn orient(a: Point, b: Point, c: Point) -> i8 {
    let v = (b - a).cross(c - a);
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

/// A parametrised piece of a line: `origin + s * dir` for `s` in `[0, s_max]`.
/// `s_max` is infinite for rays.
#[derive(Debug, Clone, Copy)]
pub struct Param {
    pub origin: Point,
    pub dir: Point,
    pub s_max: f64,
}

impl Param {
    pub fn at(&self, s: f64) -> Point {
        self.origin + self.dir * s
    }

    fn contains_param(&self, s: f64) -> bool {
        s >= 0.0 && s <= self.s_max
    }
}

/// How two edges meet.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Contact {
    Disjoint,
    /// A single common point, with the parameter on each edge.
    Point { at: Point, s: f64, u: f64 },
    /// Collinear with a common piece of positive length; `at` is one point of it.
    Overlap { at: Point },
}

/// Intersection of two parametrised pieces.
pub fn contact(p: &Param, q: &Param) -> Contact {
    let denom = p.dir.cross(q.dir);
    let w = q.origin - p.origin;
    if denom != 0.0 {
        let s = w.cross(q.dir) / denom;
        let u = w.cross(p.dir) / denom;
        // Exact endpoint hits are common in authored scenes; snap the
        // parameters there so shared vertices are recognised as such.
        let s = snap_param(s, p.s_max);
        let u = snap_param(u, q.s_max);
        if p.contains_param(s) && q.contains_param(u) {
            let at = if s == 0.0 {
                p.origin
            } else if u == 0.0 {
                q.origin
            } else {
                p.at(s)
            };
            return Contact::Point { at, s, u };
        }
        return Contact::Disjoint;
    }
    if w.cross(p.dir) != 0.0 {
        return Contact::Disjoint;
    }
    // Collinear: project q onto p's parameter line.
    let dd = p.dir.dot(p.dir);
    let s0 = w.dot(p.dir) / dd;
    let s1 = if q.s_max.is_finite() {
        (q.at(q.s_max) - p.origin).dot(p.dir) / dd
    } else if q.dir.dot(p.dir) > 0.0 {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    let (lo, hi) = if s0 <= s1 { (s0, s1) } else { (s1, s0) };
    let lo = lo.max(0.0);
    let hi = hi.min(p.s_max);
    if lo > hi {
        Contact::Disjoint
    } else if lo == hi {
        Contact::Point {
            at: p.at(lo),
            s: lo,
            u: (p.at(lo) - q.origin).dot(q.dir) / q.dir.dot(q.dir),
        }
    } else {
        let mid = if hi.is_finite() { 0.5 * (lo + hi) } else { lo + 1.0 };
        Contact::Overlap { at: p.at(mid) }
    }
}

fn snap_param(s: f64, s_max: f64) -> f64 {
    const EPS: f64 = 1e-12;
    if s.abs() <= EPS {
        0.0
    } else if s_max.is_finite() && (s - s_max).abs() <= EPS * s_max.max(1.0) {
        s_max
    } else {
        s
    }
}
