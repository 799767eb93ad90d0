//! Lyapunov metrics and the difference operators `V = ΔU`, `W = Δ²U`.

use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::{check_lambda, Chart, PlanarSystem};
use crate::error::{Error, Result};
use crate::geom::Point;

/// A candidate Lyapunov function `U(p, q)`.
pub trait Metric: Send + Sync {
    fn eval(&self, p: Point, q: Point) -> Result<f64>;
}

/// `D = D_s + D_u` with `D_u = |Δx|`, `D_s = |Δy|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitLyapunov {
    lambda: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SplitValues {
    pub d_s: f64,
    pub d_u: f64,
    pub d: f64,
}

impl SplitLyapunov {
    pub fn new(lambda: f64) -> Result<Self> {
        check_lambda(lambda)?;
        Ok(SplitLyapunov { lambda })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn split(&self, p: Point, q: Point) -> SplitValues {
        let d_u = (p.x - q.x).abs();
        let d_s = (p.y - q.y).abs();
        SplitValues {
            d_s,
            d_u,
            d: d_s + d_u,
        }
    }

    /// `(λ-1) D_u - (1-1/λ) D_s`, the first difference under the linear model.
    pub fn v_closed_form(&self, p: Point, q: Point) -> f64 {
        let s = self.split(p, q);
        (self.lambda - 1.0) * s.d_u - (1.0 - 1.0 / self.lambda) * s.d_s
    }

    /// `(λ-1)² D_u + (1-1/λ)² D_s`.
    pub fn w_closed_form(&self, p: Point, q: Point) -> f64 {
        let s = self.split(p, q);
        let a = self.lambda - 1.0;
        let b = 1.0 - 1.0 / self.lambda;
        a * a * s.d_u + b * b * s.d_s
    }
}

impl Metric for SplitLyapunov {
    fn eval(&self, p: Point, q: Point) -> Result<f64> {
        Ok(self.split(p, q).d)
    }
}

pub fn split_eval(lambda: f64, p: Point, q: Point) -> Result<SplitValues> {
    Ok(SplitLyapunov::new(lambda)?.split(p, q))
}

/// `L(p, q) = D(chart(p), chart(q))`.
#[derive(Clone)]
pub struct PullbackLyapunov {
    pub base: SplitLyapunov,
    pub chart: Arc<dyn Chart>,
}

impl Metric for PullbackLyapunov {
    fn eval(&self, p: Point, q: Point) -> Result<f64> {
        let a = self.chart.to_model(p)?;
        let b = self.chart.to_model(q)?;
        Ok(self.base.split(a, b).d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DifferenceTriple {
    #[serde(rename = "U")]
    pub u: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "W")]
    pub w: f64,
}

/// `U`, `V` and `W` by evaluating the metric along two steps of the orbit.
pub fn differences(sys: &PlanarSystem, p: Point, q: Point) -> Result<DifferenceTriple> {
    let p1 = sys.forward(p).map_err(|e| e.at_step(1))?;
    let q1 = sys.forward(q).map_err(|e| e.at_step(1))?;
    let p2 = sys.forward(p1).map_err(|e| e.at_step(2))?;
    let q2 = sys.forward(q1).map_err(|e| e.at_step(2))?;
    let u0 = sys.u(p, q)?;
    let u1 = sys.u(p1, q1)?;
    let u2 = sys.u(p2, q2)?;
    let v0 = u1 - u0;
    let v1 = u2 - u1;
    Ok(DifferenceTriple {
        u: u0,
        v: v0,
        w: v1 - v0,
    })
}

/// First difference only; one orbit step.
pub fn first_difference(sys: &PlanarSystem, p: Point, q: Point) -> Result<f64> {
    let p1 = sys.forward(p)?;
    let q1 = sys.forward(q)?;
    Ok(sys.u(p1, q1)? - sys.u(p, q)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AxiomKind {
    Symmetry,
    Identity,
    Triangle,
    Evaluation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxiomViolation {
    pub kind: AxiomKind,
    pub points: Vec<Point>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub samples: usize,
    pub violations: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: AxiomKind) -> usize {
        self.violations.iter().filter(|v| v.kind == kind).count()
    }
}

/// Symmetry, identity of indiscernibles and the triangle inequality over all
/// sampled pairs and triples.
pub fn metric_axioms_check(metric: &dyn Metric, points: &[Point]) -> Result<AxiomReport> {
    if points.len() < 3 {
        return Err(Error::BadParameter(format!(
            "need at least 3 sample points, got {}",
            points.len()
        )));
    }
    let n = points.len();
    let mut report = AxiomReport {
        samples: n,
        violations: Vec::new(),
    };
    let mut d = vec![vec![f64::NAN; n]; n];
    for i in 0..n {
        for j in 0..n {
            match metric.eval(points[i], points[j]) {
                Ok(v) => d[i][j] = v,
                Err(e) => report.violations.push(AxiomViolation {
                    kind: AxiomKind::Evaluation,
                    points: vec![points[i], points[j]],
                    detail: e.to_string(),
                }),
            }
        }
    }
    for i in 0..n {
        if d[i][i] != 0.0 && !d[i][i].is_nan() {
            report.violations.push(AxiomViolation {
                kind: AxiomKind::Identity,
                points: vec![points[i]],
                detail: format!("U(p, p) = {}", d[i][i]),
            });
        }
        for j in (i + 1)..n {
            let (a, b) = (d[i][j], d[j][i]);
            if a.is_nan() || b.is_nan() {
                continue;
            }
            if (a - b).abs() > 1e-12 * (1.0 + a.abs().max(b.abs())) {
                report.violations.push(AxiomViolation {
                    kind: AxiomKind::Symmetry,
                    points: vec![points[i], points[j]],
                    detail: format!("U(p, q) = {a} but U(q, p) = {b}"),
                });
            }
            let distinct = points[i] != points[j];
            if (distinct && a <= 0.0) || (!distinct && a != 0.0) || a < 0.0 {
                report.violations.push(AxiomViolation {
                    kind: AxiomKind::Identity,
                    points: vec![points[i], points[j]],
                    detail: format!("U(p, q) = {a}"),
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if j == i {
                continue;
            }
            for m in 0..n {
                if m == i || m == j {
                    continue;
                }
                let (direct, via) = (d[i][m], d[i][j] + d[j][m]);
                if direct.is_nan() || via.is_nan() {
                    continue;
                }
                if direct > via + 1e-12 * (1.0 + via.abs()) {
                    report.violations.push(AxiomViolation {
                        kind: AxiomKind::Triangle,
                        points: vec![points[i], points[j], points[m]],
                        detail: format!("U(a, c) = {direct} > U(a, b) + U(b, c) = {via}"),
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Squared;
    impl Metric for Squared {
        fn eval(&self, p: Point, q: Point) -> Result<f64> {
            let d = (p.x - q.x).abs() + (p.y - q.y).abs();
            Ok(d * d)
        }
    }

    #[test]
    fn split_values() {
        let s = split_eval(2.0, Point::new(1.0, 2.0), Point::new(4.0, 6.0)).unwrap();
        assert_eq!((s.d_s, s.d_u, s.d), (4.0, 3.0, 7.0));
        let z = split_eval(2.0, Point::new(1.0, 2.0), Point::new(1.0, 2.0)).unwrap();
        assert_eq!((z.d_s, z.d_u, z.d), (0.0, 0.0, 0.0));
        assert!(matches!(
            split_eval(0.5, Point::ORIGIN, Point::ORIGIN),
            Err(Error::BadLambda(_))
        ));
    }

    #[test]
    fn squared_taxicab_breaks_triangle() {
        let pts = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
        ];
        let r = metric_axioms_check(&Squared, &pts).unwrap();
        assert!(r.count(AxiomKind::Triangle) > 0);
        assert_eq!(r.count(AxiomKind::Symmetry), 0);
    }

    #[test]
    fn too_few_points() {
        let m = SplitLyapunov::new(2.0).unwrap();
        assert!(metric_axioms_check(&m, &[Point::ORIGIN, Point::new(1.0, 0.0)]).is_err());
    }
}
