//! Systems glued from one first-quadrant system per quadrant by reflection.

use std::sync::Arc;

use crate::dynamics::{Chart, Region};
use crate::error::Result;
use crate::geom::Point;

/// Quadrant order: I (`x >= 0, y >= 0`), II, III, IV, counterclockwise.
/// Axes belong to the quadrant with the nonnegative sign.
pub fn quadrant_of(p: Point) -> usize {
    match (p.x < 0.0, p.y < 0.0) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

fn signs(q: usize) -> (f64, f64) {
    [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)][q]
}

fn reflect(p: Point, (sx, sy): (f64, f64)) -> Point {
    // Adding 0.0 turns -0.0 into 0.0.
    Point::new(sx * p.x + 0.0, sy * p.y + 0.0)
}

/// Charts for each quadrant, each defined on the closed first quadrant and
/// fixing the axes.
#[derive(Clone)]
pub struct CompositeChart {
    pub quadrants: [Arc<dyn Chart>; 4],
}

impl CompositeChart {
    fn via(&self, p: Point, to_model: bool) -> Result<Point> {
        let q = quadrant_of(p);
        let s = signs(q);
        let local = reflect(p, s);
        let c = &self.quadrants[q];
        let image = if to_model {
            c.to_model(local)?
        } else {
            c.from_model(local)?
        };
        Ok(reflect(image, s))
    }
}

impl Chart for CompositeChart {
    fn to_model(&self, p: Point) -> Result<Point> {
        self.via(p, true)
    }
    fn from_model(&self, p: Point) -> Result<Point> {
        self.via(p, false)
    }
    fn source(&self) -> Region {
        Region::WholePlane
    }
    /// Only approximate: each quadrant's model image may be a proper subset.
    fn target(&self) -> Region {
        Region::WholePlane
    }
    fn tolerance(&self) -> f64 {
        self.quadrants
            .iter()
            .map(|c| c.tolerance())
            .fold(0.0, f64::max)
    }
}
