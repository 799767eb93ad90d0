//! Plane primitives and polyline intersection.
//!
//! A [`PolyLine`] is a chain of vertices optionally followed by a terminal ray
//! that leaves the last vertex toward increasing `x` with a given slope. The
//! Example-2 chart is built entirely out of these.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerances::{PARALLEL_EPS, PARAM_EPS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Returns the point unchanged, or `NonFinite` naming the producer.
    pub fn finite(self, what: &'static str) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::NonFinite(what))
        }
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Point { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
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

/// Vertex chain with an optional terminal ray `{last + s·(1, slope) : s ≥ 0}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyLine {
    pub vertices: Vec<Point>,
    pub terminal_ray_slope: Option<f64>,
}

impl PolyLine {
    pub fn new(vertices: Vec<Point>, terminal_ray_slope: Option<f64>) -> Result<Self> {
        let line = PolyLine {
            vertices,
            terminal_ray_slope,
        };
        line.validate()?;
        Ok(line)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertices.is_empty() {
            return Err(Error::MalformedPolyline("no vertices".into()));
        }
        if let Some(p) = self.vertices.iter().find(|p| !p.is_finite()) {
            return Err(Error::MalformedPolyline(format!("non-finite vertex {p}")));
        }
        if let Some(w) = self.vertices.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedPolyline(format!(
                "repeated consecutive vertex {}",
                w[0]
            )));
        }
        if let Some(s) = self.terminal_ray_slope {
            if !s.is_finite() {
                return Err(Error::MalformedPolyline(format!("ray slope {s}")));
            }
        }
        Ok(())
    }

    /// Both coordinates nondecreasing along the chain and the ray.
    pub fn is_monotone(&self) -> bool {
        let chain_ok = self
            .vertices
            .windows(2)
            .all(|w| w[1].x >= w[0].x && w[1].y >= w[0].y);
        chain_ok && self.terminal_ray_slope.is_none_or(|s| s >= 0.0)
    }

    fn pieces(&self) -> impl Iterator<Item = Piece> + '_ {
        let segments = self.vertices.windows(2).map(|w| Piece {
            origin: w[0],
            dir: w[1] - w[0],
            t_max: 1.0,
        });
        let last = *self.vertices.last().expect("validated non-empty");
        let ray = self.terminal_ray_slope.map(|s| Piece {
            origin: last,
            dir: Point::new(1.0, s),
            t_max: f64::INFINITY,
        });
        segments.chain(ray)
    }

    /// Euclidean distance from `p` to the nearest segment or ray.
    pub fn distance_to(&self, p: Point) -> f64 {
        if self.vertices.len() == 1 && self.terminal_ray_slope.is_none() {
            return p.dist(self.vertices[0]);
        }
        self.pieces()
            .map(|piece| {
                let t = ((p - piece.origin).dot(piece.dir) / piece.dir.dot(piece.dir))
                    .clamp(0.0, piece.t_max);
                p.dist(piece.at(t))
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    origin: Point,
    dir: Point,
    t_max: f64,
}

impl Piece {
    fn at(&self, t: f64) -> Point {
        self.origin + self.dir * t
    }

    /// Axis-parallel pieces pin one coordinate exactly.
    fn snap(&self, mut p: Point) -> Point {
        if self.dir.x == 0.0 {
            p.x = self.origin.x;
        }
        if self.dir.y == 0.0 {
            p.y = self.origin.y;
        }
        p
    }
}

/// Smallest parameter along `a` where `a` meets `b`, with the meeting point.
fn piece_hit(a: &Piece, b: &Piece) -> Option<(f64, Point)> {
    let d = a.dir;
    let e = b.dir;
    let w = b.origin - a.origin;
    let den = d.cross(e);
    let scale = d.norm() * e.norm();

    if den.abs() <= PARALLEL_EPS * scale {
        // Parallel: only collinear pieces can meet.
        let offset = w.cross(d).abs() / d.norm();
        if offset > PARAM_EPS * (1.0 + w.norm()) {
            return None;
        }
        let dd = d.dot(d);
        let t0 = w.dot(d) / dd;
        let t1 = if b.t_max.is_finite() {
            (w + e).dot(d) / dd
        } else if e.dot(d) > 0.0 {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        let start = t0.min(t1).max(0.0);
        let end = t0.max(t1).min(a.t_max);
        if start > end + PARAM_EPS {
            return None;
        }
        return Some((start, a.snap(a.at(start))));
    }

    let t = w.cross(e) / den;
    let u = w.cross(d) / den;
    let t_ok = t >= -PARAM_EPS && t <= a.t_max + PARAM_EPS;
    let u_ok = u >= -PARAM_EPS && u <= b.t_max + PARAM_EPS;
    if !(t_ok && u_ok) {
        return None;
    }
    let t = t.clamp(0.0, a.t_max);
    Some((t, b.snap(a.snap(a.at(t)))))
}

/// First intersection point in traversal order of `a`.
pub fn intersect(a: &PolyLine, b: &PolyLine) -> Result<Option<Point>> {
    a.validate()?;
    b.validate()?;
    for pa in a.pieces() {
        let best = b
            .pieces()
            .filter_map(|pb| piece_hit(&pa, &pb))
            .min_by(|x, y| x.0.total_cmp(&y.0));
        if let Some((_, p)) = best {
            return Ok(Some(p));
        }
    }
    // A lone vertex with no ray has no pieces.
    if a.vertices.len() == 1 && a.terminal_ray_slope.is_none() {
        let p = a.vertices[0];
        if b.distance_to(p) <= PARAM_EPS {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Every distinct intersection point (duplicates within `1e-12` merged).
pub fn intersect_all(a: &PolyLine, b: &PolyLine) -> Result<Vec<Point>> {
    a.validate()?;
    b.validate()?;
    let mut out: Vec<Point> = Vec::new();
    for pa in a.pieces() {
        for pb in b.pieces() {
            if let Some((_, p)) = piece_hit(&pa, &pb) {
                if !out.iter().any(|q| q.dist(p) <= 1e-12 * (1.0 + p.norm())) {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}
