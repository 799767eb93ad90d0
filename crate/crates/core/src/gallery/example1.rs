//! The rational chart `H(x, y) = (x(1+y)/(1-xy), y(1+x)/(1-xy))` from Ω onto
//! the closed first quadrant.

use std::sync::Arc;

use crate::dynamics::{
    Chart, ConjugatedMap, Direction, LinearMap, LinearModel, PlanarSystem, Region,
};
use crate::error::Result;
use crate::geom::Point;
use crate::lyapunov::{PullbackLyapunov, SplitLyapunov};

pub const LAMBDA: f64 = 2.0;

/// `H`: Ω → Λ. Fixes both axes pointwise.
pub fn h(p: Point) -> Result<Point> {
    Region::Omega.check(p)?;
    let den = 1.0 - p.x * p.y;
    Point::new(p.x * (1.0 + p.y) / den, p.y * (1.0 + p.x) / den).finite("example 1 chart")
}

/// `H⁻¹(X, Y) = (X/(1+Y), Y/(1+X))`: Λ → Ω.
pub fn h_inv(p: Point) -> Result<Point> {
    Region::Quadrant.check(p)?;
    Point::new(p.x / (1.0 + p.y), p.y / (1.0 + p.x)).finite("example 1 inverse chart")
}

/// `Forward` is `H` (model to system), `Inverse` is `H⁻¹`.
pub fn example1_chart(p: Point, dir: Direction) -> Result<Point> {
    match dir {
        Direction::Forward => h(p),
        Direction::Inverse => h_inv(p),
    }
}

/// System coordinates are Λ; model coordinates are Ω.
#[derive(Clone, Copy, Debug, Default)]
pub struct Example1Chart;

impl Chart for Example1Chart {
    fn to_model(&self, p: Point) -> Result<Point> {
        h_inv(p)
    }
    fn from_model(&self, p: Point) -> Result<Point> {
        h(p)
    }
    fn source(&self) -> Region {
        Region::Quadrant
    }
    fn target(&self) -> Region {
        Region::Omega
    }
}

pub fn system() -> PlanarSystem {
    let chart: Arc<dyn Chart> = Arc::new(Example1Chart);
    let base = LinearMap::on(LAMBDA, Region::Omega).expect("lambda 2 is valid");
    PlanarSystem {
        name: "example1".into(),
        map: Arc::new(ConjugatedMap {
            base,
            chart: chart.clone(),
        }),
        metric: Arc::new(PullbackLyapunov {
            base: SplitLyapunov::new(LAMBDA).expect("lambda 2 is valid"),
            chart: chart.clone(),
        }),
        fixed_point: Point::ORIGIN,
        model: Some(LinearModel {
            chart,
            lambda: LAMBDA,
        }),
        findings: Vec::new(),
    }
}
