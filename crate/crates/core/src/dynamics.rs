//! Planar maps, regions, charts to the linear model, and orbit iteration.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Point;
use crate::lyapunov::{DifferenceTriple, Metric};

/// Where a map or chart is defined.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Region {
    WholePlane,
    /// Closed first quadrant `x >= 0, y >= 0`.
    Quadrant,
    /// `x >= 0, y >= 0, x y < 1`.
    Omega,
    Rect {
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
    },
}

impl Region {
    pub fn contains(&self, p: Point) -> bool {
        if !p.is_finite() {
            return false;
        }
        match *self {
            Region::WholePlane => true,
            Region::Quadrant => p.x >= 0.0 && p.y >= 0.0,
            Region::Omega => p.x >= 0.0 && p.y >= 0.0 && p.x * p.y < 1.0,
            Region::Rect {
                xmin,
                xmax,
                ymin,
                ymax,
            } => p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax,
        }
    }

    pub fn check(&self, p: Point) -> Result<Point> {
        if self.contains(p) {
            Ok(p)
        } else {
            Err(Error::out_of(p, self))
        }
    }

    /// True for regions inside the closed first quadrant.
    pub fn is_first_quadrant(&self) -> bool {
        match *self {
            Region::Quadrant | Region::Omega => true,
            Region::Rect { xmin, ymin, .. } => xmin >= 0.0 && ymin >= 0.0,
            Region::WholePlane => false,
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::WholePlane => write!(f, "the plane"),
            Region::Quadrant => write!(f, "the closed first quadrant"),
            Region::Omega => write!(f, "omega {{x >= 0, y >= 0, xy < 1}}"),
            Region::Rect {
                xmin,
                xmax,
                ymin,
                ymax,
            } => write!(f, "[{xmin}, {xmax}] x [{ymin}, {ymax}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// An invertible planar map.
pub trait PlanarMap: Send + Sync {
    fn forward(&self, p: Point) -> Result<Point>;
    fn inverse(&self, p: Point) -> Result<Point>;
    fn domain(&self) -> Region;
}

/// Bijection from system coordinates into linear-model coordinates.
pub trait Chart: Send + Sync {
    fn to_model(&self, p: Point) -> Result<Point>;
    fn from_model(&self, p: Point) -> Result<Point>;
    fn source(&self) -> Region;
    fn target(&self) -> Region;

    /// Bisection tolerance behind the chart, zero for closed forms.
    fn tolerance(&self) -> f64 {
        0.0
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IdentityChart(pub Region);

impl Chart for IdentityChart {
    fn to_model(&self, p: Point) -> Result<Point> {
        self.0.check(p)
    }
    fn from_model(&self, p: Point) -> Result<Point> {
        self.0.check(p)
    }
    fn source(&self) -> Region {
        self.0
    }
    fn target(&self) -> Region {
        self.0
    }
}

/// `(x, y) -> (lambda x, y / lambda)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearMap {
    lambda: f64,
    domain: Region,
}

impl LinearMap {
    pub fn new(lambda: f64) -> Result<Self> {
        Self::on(lambda, Region::WholePlane)
    }

    pub fn on(lambda: f64, domain: Region) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(LinearMap { lambda, domain })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub(crate) fn fwd(&self, p: Point) -> Point {
        Point::new(self.lambda * p.x, p.y / self.lambda)
    }

    pub(crate) fn inv(&self, p: Point) -> Point {
        Point::new(p.x / self.lambda, self.lambda * p.y)
    }
}

pub(crate) fn check_lambda(lambda: f64) -> Result<()> {
    if lambda.is_finite() && lambda > 1.0 {
        Ok(())
    } else {
        Err(Error::BadLambda(lambda))
    }
}

impl PlanarMap for LinearMap {
    fn forward(&self, p: Point) -> Result<Point> {
        self.domain.check(p)?;
        self.fwd(p).finite("linear forward")
    }
    fn inverse(&self, p: Point) -> Result<Point> {
        self.domain.check(p)?;
        self.inv(p).finite("linear inverse")
    }
    fn domain(&self) -> Region {
        self.domain
    }
}

/// `F = chart^-1 . f . chart` for the linear model `f`.
#[derive(Clone)]
pub struct ConjugatedMap {
    pub base: LinearMap,
    pub chart: Arc<dyn Chart>,
}

impl PlanarMap for ConjugatedMap {
    fn forward(&self, p: Point) -> Result<Point> {
        let m = self.chart.to_model(p)?;
        self.chart.from_model(self.base.fwd(m))
    }
    fn inverse(&self, p: Point) -> Result<Point> {
        let m = self.chart.to_model(p)?;
        self.chart.from_model(self.base.inv(m))
    }
    fn domain(&self) -> Region {
        self.chart.source()
    }
}

/// Chart plus the expansion factor of the linear model it targets.
#[derive(Clone)]
pub struct LinearModel {
    pub chart: Arc<dyn Chart>,
    pub lambda: f64,
}

/// A map with its Lyapunov metric, fixed point and optional chart.
#[derive(Clone)]
pub struct PlanarSystem {
    pub name: String,
    pub map: Arc<dyn PlanarMap>,
    pub metric: Arc<dyn Metric>,
    pub fixed_point: Point,
    pub model: Option<LinearModel>,
    /// Validation notes that did not prevent construction.
    pub findings: Vec<String>,
}

impl fmt::Debug for PlanarSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PlanarSystem")
            .field("name", &self.name)
            .field("fixed_point", &self.fixed_point)
            .field("domain", &self.map.domain())
            .field("charted", &self.model.is_some())
            .finish()
    }
}

impl PlanarSystem {
    pub fn domain(&self) -> Region {
        self.map.domain()
    }

    pub fn u(&self, p: Point, q: Point) -> Result<f64> {
        self.metric.eval(p, q)
    }

    pub fn forward(&self, p: Point) -> Result<Point> {
        self.map.forward(p)
    }

    pub fn inverse(&self, p: Point) -> Result<Point> {
        self.map.inverse(p)
    }

    /// `f^n(p)` for any integer `n`.
    pub fn iterate(&self, p: Point, n: i64) -> Result<Point> {
        let mut q = p;
        for i in 0..n.unsigned_abs() {
            let step = i as i64 + 1;
            q = if n >= 0 {
                self.map.forward(q).map_err(|e| e.at_step(step))?
            } else {
                self.map.inverse(q).map_err(|e| e.at_step(-step))?
            };
        }
        Ok(q)
    }

    pub fn model(&self) -> Result<&LinearModel> {
        self.model.as_ref().ok_or(Error::MissingChart)
    }

    pub fn chart(&self) -> Result<&Arc<dyn Chart>> {
        Ok(&self.model()?.chart)
    }

    pub fn differences(&self, p: Point, q: Point) -> Result<DifferenceTriple> {
        crate::lyapunov::differences(self, p, q)
    }
}

pub fn apply(m: &dyn PlanarMap, p: Point, dir: Direction) -> Result<Point> {
    match dir {
        Direction::Forward => m.forward(p),
        Direction::Inverse => m.inverse(p),
    }
}

/// `f^n(p)` for `n = n_min..=n_max`.
///
/// A range entirely on one side of zero is reached by iterating through the
/// skipped indices first.
pub fn orbit(m: &dyn PlanarMap, p: Point, n_min: i64, n_max: i64) -> Result<Vec<Point>> {
    if n_min > n_max {
        return Err(Error::BadParameter(format!(
            "orbit range {n_min}..{n_max} is empty"
        )));
    }
    m.domain().check(p).map_err(|e| e.at_step(0))?;
    let len = (n_max - n_min + 1) as usize;
    let mut out = vec![p; len];

    let mut q = p;
    for n in 1..=n_max.max(0) {
        q = m.forward(q).map_err(|e| e.at_step(n))?;
        if n >= n_min {
            out[(n - n_min) as usize] = q;
        }
    }
    let mut q = p;
    for n in (n_min.min(0)..0).rev() {
        q = m.inverse(q).map_err(|e| e.at_step(n))?;
        if n <= n_max {
            out[(n - n_min) as usize] = q;
        }
    }
    Ok(out)
}

/// Time-`t` map of the flow `chart^-1 . phi_t . chart`, where
/// `phi_t(x, y) = (lambda^t x, y / lambda^t)`.
pub fn flow_time(sys: &PlanarSystem, t: f64, p: Point) -> Result<Point> {
    let model = sys.model()?;
    if !t.is_finite() {
        return Err(Error::BadParameter(format!("flow time {t}")));
    }
    let m = model.chart.to_model(p)?;
    let s = model.lambda.powf(t);
    let moved = Point::new(s * m.x, m.y / s).finite("flow")?;
    model.chart.from_model(moved)
}
