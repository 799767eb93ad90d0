//! The polygonal chart built from nested stable and unstable polyline families.
//!
//! A model point `(x0, y0)` in Ω is sent to the intersection of the stable
//! polyline with parameter `k = x0` and the unstable polyline with parameter
//! `k' = 1/y0`. Both axes are fixed pointwise.

use std::sync::Arc;

use serde::Serialize;

use crate::dynamics::{
    Chart, ConjugatedMap, Direction, LinearMap, LinearModel, PlanarSystem, Region,
};
use crate::error::{Error, Result};
use crate::geom::{intersect, Point, PolyLine};
use crate::lyapunov::{PullbackLyapunov, SplitLyapunov};
use crate::numeric::bisect;
use crate::tolerances::CHART_BISECTION_TOL;

pub const LAMBDA: f64 = 2.0;

/// Interpolant with `g(1/2) = 1`, `g(2) = 1/6`, clamped outside `[1/2, 2]`.
pub fn g(k: f64) -> f64 {
    if k <= 0.5 {
        1.0
    } else if k <= 2.0 {
        1.0 / 6.0 + (5.0 / 9.0) * (2.0 - k)
    } else {
        1.0 / 6.0
    }
}

/// Height at which the stable polyline for `k` leaves its vertical piece.
pub fn stable_break(k: f64) -> f64 {
    if k <= 2.0 {
        1.0 / k - g(k)
    } else {
        1.0 / (1.0 + k)
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k > 0.0 {
        Ok(())
    } else {
        Err(Error::BadParameter(format!(
            "polyline parameter must be finite and > 0, got {k}"
        )))
    }
}

/// Abscissa where the unstable polyline for `k` leaves its horizontal piece:
/// the root of `1/k0 - 1/k = g(k0)` found by bisection on `(0, k)`.
pub fn unstable_break(k: f64, tol: f64) -> Result<f64> {
    check_k(k)?;
    let inv_k = 1.0 / k;
    bisect(|k0| 1.0 / k0 - inv_k - g(k0), 0.0, k, tol, "unstable break")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Stable,
    Unstable,
}

pub fn example2_polyline(kind: CurveKind, k: f64) -> Result<PolyLine> {
    example2_polyline_tol(kind, k, CHART_BISECTION_TOL)
}

pub fn example2_polyline_tol(kind: CurveKind, k: f64, tol: f64) -> Result<PolyLine> {
    check_k(k)?;
    let slope = 1.0 / k;
    match kind {
        CurveKind::Stable => PolyLine::new(
            vec![Point::new(k, 0.0), Point::new(k, stable_break(k))],
            Some(slope),
        ),
        CurveKind::Unstable => {
            let h = 1.0 / k;
            let k0 = unstable_break(k, tol)?;
            PolyLine::new(vec![Point::new(0.0, h), Point::new(k0, h)], Some(slope))
        }
    }
}

/// System coordinates: the image of Ω inside Λ. Model coordinates: Ω.
#[derive(Clone, Copy, Debug)]
pub struct Example2Chart {
    pub tol: f64,
}

impl Default for Example2Chart {
    fn default() -> Self {
        Example2Chart {
            tol: CHART_BISECTION_TOL,
        }
    }
}

impl Example2Chart {
    pub fn new(tol: f64) -> Result<Self> {
        if !(tol.is_finite() && tol > 0.0) {
            return Err(Error::BadParameter(format!("bisection tolerance {tol}")));
        }
        Ok(Example2Chart { tol })
    }

    /// Model to system: intersection of the two polylines.
    pub fn h(&self, p: Point) -> Result<Point> {
        Region::Omega.check(p)?;
        if p.x == 0.0 || p.y == 0.0 {
            return Ok(p);
        }
        let s = example2_polyline_tol(CurveKind::Stable, p.x, self.tol)?;
        let u = example2_polyline_tol(CurveKind::Unstable, 1.0 / p.y, self.tol)?;
        intersect(&s, &u)?.ok_or(Error::NoIntersection(p))
    }

    /// System to model: stable parameter, then unstable height.
    pub fn h_inv(&self, p: Point) -> Result<Point> {
        Region::Quadrant.check(p)?;
        if p.x == 0.0 || p.y == 0.0 {
            return Ok(p);
        }
        let k = self.stable_parameter(p)?;
        let h = self.unstable_height(p)?;
        let m = Point::new(k, h);
        if !Region::Omega.contains(m) {
            return Err(Error::out_of(p, "the image of the example 2 chart"));
        }
        Ok(m)
    }

    /// The `k` whose stable polyline passes through `p`.
    fn stable_parameter(&self, p: Point) -> Result<f64> {
        let (x, y) = (p.x, p.y);
        if y <= stable_break(x) {
            return Ok(x);
        }
        // Height reached at abscissa x along the ray of polyline k; strictly
        // decreasing in k, unbounded as k -> 0.
        let along = |k: f64| stable_break(k) + (x - k) / k - y;
        let (lo, hi) = geometric_bracket(x, |k| along(k) > 0.0)?;
        bisect(along, lo, hi, self.tol, "stable parameter")
    }

    /// The height `h` whose unstable polyline passes through `p`.
    fn unstable_height(&self, p: Point) -> Result<f64> {
        let (x, y) = (p.x, p.y);
        if x <= unstable_break(1.0 / y, self.tol)? {
            return Ok(y);
        }
        let reach = |h: f64| -> Result<f64> {
            let k0 = unstable_break(1.0 / h, self.tol)?;
            Ok(h * (1.0 + (x - k0).max(0.0)))
        };
        let (lo, hi) = geometric_bracket(y, |h| reach(h).is_ok_and(|v| v < y))?;
        let h = bisect(
            |h| reach(h).map_or(f64::NAN, |v| v - y),
            lo,
            hi,
            self.tol,
            "unstable height",
        )?;
        // The family can jump; points in a gap have no preimage.
        let miss = (reach(h)? - y).abs();
        if miss > 1e-9 * y.max(1.0) {
            return Err(Error::out_of(p, "the image of the example 2 chart"));
        }
        Ok(h)
    }
}

/// Halves from `top` until `below` holds; returns `[lo, min(2 lo, top)]`.
fn geometric_bracket<P>(top: f64, mut below: P) -> Result<(f64, f64)>
where
    P: FnMut(f64) -> bool,
{
    let mut lo = top;
    for _ in 0..2100 {
        lo *= 0.5;
        if lo == 0.0 {
            break;
        }
        if below(lo) {
            return Ok((lo, (2.0 * lo).min(top)));
        }
    }
    Err(Error::RootNotBracketed {
        what: "chart parameter",
        lo: 0.0,
        hi: top,
    })
}

impl Chart for Example2Chart {
    fn to_model(&self, p: Point) -> Result<Point> {
        self.h_inv(p)
    }
    fn from_model(&self, p: Point) -> Result<Point> {
        self.h(p)
    }
    fn source(&self) -> Region {
        Region::Quadrant
    }
    fn target(&self) -> Region {
        Region::Omega
    }
    fn tolerance(&self) -> f64 {
        self.tol
    }
}

/// `Forward` is the model-to-system chart, `Inverse` its inverse.
pub fn example2_chart(p: Point, dir: Direction) -> Result<Point> {
    let c = Example2Chart::default();
    match dir {
        Direction::Forward => c.h(p),
        Direction::Inverse => c.h_inv(p),
    }
}

pub fn system() -> PlanarSystem {
    system_with_tol(CHART_BISECTION_TOL).expect("default tolerance is valid")
}

pub fn system_with_tol(tol: f64) -> Result<PlanarSystem> {
    let chart: Arc<dyn Chart> = Arc::new(Example2Chart::new(tol)?);
    Ok(PlanarSystem {
        name: "example2".into(),
        map: Arc::new(ConjugatedMap {
            base: LinearMap::on(LAMBDA, Region::Omega)?,
            chart: chart.clone(),
        }),
        metric: Arc::new(PullbackLyapunov {
            base: SplitLyapunov::new(LAMBDA)?,
            chart: chart.clone(),
        }),
        fixed_point: Point::ORIGIN,
        model: Some(LinearModel {
            chart,
            lambda: LAMBDA,
        }),
        findings: Vec::new(),
    })
}

/// Measured discontinuities of the unstable break `k0(k')`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeamReport {
    /// `k0` at `k' = 2`, where the interpolant stops changing.
    pub k0_at_two: f64,
    /// Location of the largest jump of `k0` over the scanned range.
    pub jump_at: f64,
    pub k0_left: f64,
    pub k0_right: f64,
    pub gap: f64,
    pub scan: (f64, f64, usize),
}

/// Scans `k'` over `[lo, hi]` and localizes the largest jump of `k0` by
/// bisection on `k'`.
pub fn seam_report(lo: f64, hi: f64, n: usize, tol: f64) -> Result<SeamReport> {
    if !(lo > 0.0 && hi > lo && n >= 2) {
        return Err(Error::BadParameter(format!(
            "seam scan needs 0 < lo < hi and n >= 2, got ({lo}, {hi}, {n})"
        )));
    }
    let ks: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let vals = ks
        .iter()
        .map(|&k| unstable_break(k, tol))
        .collect::<Result<Vec<_>>>()?;
    let (i, _) = vals
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .enumerate()
        .fold(
            (0, -1.0),
            |best, (i, d)| if d > best.1 { (i, d) } else { best },
        );
    let (mut a, mut b) = (ks[i], ks[i + 1]);
    let (va, vb) = (vals[i], vals[i + 1]);
    let mid_value = 0.5 * (va + vb);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if (unstable_break(m, tol)? < mid_value) == (va < mid_value) {
            a = m;
        } else {
            b = m;
        }
    }
    let (left, right) = (unstable_break(a, tol)?, unstable_break(b, tol)?);
    Ok(SeamReport {
        k0_at_two: unstable_break(2.0, tol)?,
        jump_at: 0.5 * (a + b),
        k0_left: left,
        k0_right: right,
        gap: (right - left).abs(),
        scan: (lo, hi, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolant_endpoints_are_exact() {
        assert_eq!(g(0.5), 1.0);
        assert_eq!(g(2.0), 1.0 / 6.0);
        assert_eq!(g(0.1), 1.0);
        assert_eq!(g(7.0), 1.0 / 6.0);
    }

    #[test]
    fn small_case_polylines() {
        let s = example2_polyline(CurveKind::Stable, 0.25).unwrap();
        assert_eq!(
            s.vertices,
            vec![Point::new(0.25, 0.0), Point::new(0.25, 3.0)]
        );
        assert_eq!(s.terminal_ray_slope, Some(4.0));

        let u = example2_polyline(CurveKind::Unstable, 0.25).unwrap();
        assert_eq!(u.vertices[0], Point::new(0.0, 4.0));
        assert!((u.vertices[1].x - 0.2).abs() < 1e-12);
        assert_eq!(u.terminal_ray_slope, Some(4.0));
    }

    #[test]
    fn mid_case_polylines() {
        let s = example2_polyline(CurveKind::Stable, 1.0).unwrap();
        assert!((s.vertices[1].y - 5.0 / 18.0).abs() < 1e-15);
        let u = example2_polyline(CurveKind::Unstable, 1.0).unwrap();
        assert!((u.vertices[1].x - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bad_parameter() {
        assert!(matches!(
            example2_polyline(CurveKind::Stable, 0.0),
            Err(Error::BadParameter(_))
        ));
        assert!(example2_polyline(CurveKind::Unstable, -1.0).is_err());
    }

    #[test]
    fn identity_zone_is_exact() {
        let p = Point::new(0.25, 2.0);
        assert_eq!(example2_chart(p, Direction::Forward).unwrap(), p);
        assert_eq!(example2_chart(p, Direction::Inverse).unwrap(), p);
    }

    #[test]
    fn axes_fixed() {
        for p in [Point::new(3.0, 0.0), Point::new(0.0, 5.0)] {
            assert_eq!(example2_chart(p, Direction::Forward).unwrap(), p);
            assert_eq!(example2_chart(p, Direction::Inverse).unwrap(), p);
        }
    }
}
