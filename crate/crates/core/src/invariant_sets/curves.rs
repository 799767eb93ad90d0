use crate::dynamics::{PlanarSystem, Region};
use crate::error::{Error, Result};
use crate::gallery::CurveKind;
use crate::geom::{Point, PolyLine};

/// Range of the free model coordinate along a vertical (stable) or
/// horizontal (unstable) line whose fixed coordinate is `c`.
fn allowed_range(target: Region, c: f64) -> (f64, f64) {
    match target {
        Region::WholePlane => (f64::NEG_INFINITY, f64::INFINITY),
        Region::Quadrant => (0.0, f64::INFINITY),
        Region::Omega => (0.0, if c > 0.0 { 1.0 / c } else { f64::INFINITY }),
        Region::Rect { .. } => (f64::NEG_INFINITY, f64::INFINITY),
    }
}

/// Parameters from `lo` toward `hi`, geometrically refined toward `hi`.
fn geometric(lo: f64, hi: f64, scale: f64, n: usize) -> Vec<f64> {
    let last = (n.max(2) - 1) as f64;
    (0..n)
        .map(|i| {
            let t = i as f64 / last;
            if hi.is_finite() {
                lo + (hi - lo) * (1.0 - 1e-6f64.powf(t))
            } else {
                lo + scale * (1e6f64.powf(t) - 1.0)
            }
        })
        .collect()
}

fn sample_params(lo: f64, hi: f64, around: f64, n: usize) -> Vec<f64> {
    let scale = around.abs().max(1.0);
    if lo.is_finite() {
        return geometric(lo, hi, scale, n);
    }
    // Unbounded on both sides: spread outward from the base point.
    let half = n / 2;
    let mut below: Vec<f64> = geometric(0.0, f64::INFINITY, scale, n - half)
        .into_iter()
        .skip(1)
        .map(|s| around - s)
        .collect();
    below.reverse();
    let above = geometric(0.0, f64::INFINITY, scale, half + 1)
        .into_iter()
        .map(|s| around + s);
    below.into_iter().chain(above).collect()
}

/// The stable or unstable curve through `p`: the chart preimage of the
/// vertical or horizontal line through `chart(p)`.
///
/// `span` restricts the free model coordinate; by default it runs over the
/// whole line inside the chart's target, refined toward its boundary.
/// Samples whose model point has no preimage are dropped.
pub fn trace_curve(
    sys: &PlanarSystem,
    p: Point,
    kind: CurveKind,
    span: Option<(f64, f64)>,
    n_samples: usize,
) -> Result<PolyLine> {
    let chart = sys.chart()?;
    if n_samples < 2 {
        return Err(Error::BadParameter("need at least 2 samples".into()));
    }
    let m = chart.to_model(p)?;
    let (fixed, free) = match kind {
        CurveKind::Stable => (m.x, m.y),
        CurveKind::Unstable => (m.y, m.x),
    };
    let (lo, hi) = allowed_range(chart.target(), fixed);
    let params = match span {
        Some((a, b)) => {
            if !(a.is_finite() && b.is_finite() && a < b && a >= lo && b <= hi) {
                return Err(Error::BadParameter(format!(
                    "span ({a}, {b}) is outside the allowed range ({lo}, {hi})"
                )));
            }
            (0..n_samples)
                .map(|i| a + (b - a) * i as f64 / (n_samples - 1) as f64)
                .collect()
        }
        None => sample_params(lo, hi, free, n_samples),
    };
    let mut vertices: Vec<Point> = Vec::with_capacity(params.len());
    for s in params {
        let q = match kind {
            CurveKind::Stable => Point::new(fixed, s),
            CurveKind::Unstable => Point::new(s, fixed),
        };
        let Ok(image) = chart.from_model(q) else {
            continue;
        };
        if vertices.last() != Some(&image) {
            vertices.push(image);
        }
    }
    if vertices.is_empty() {
        return Err(Error::out_of(p, "the chart image along the traced line"));
    }
    PolyLine::new(vertices, None)
}

/// Intersection of the stable curve through `a` (on the fixed point's
/// unstable curve) and the unstable curve through `b` (on its stable curve).
///
/// `None` when the model point `(chart(a).x, chart(b).y)` has no preimage.
pub fn curve_intersection(sys: &PlanarSystem, a: Point, b: Point) -> Result<Option<Point>> {
    let chart = sys.chart()?;
    let origin = chart.to_model(sys.fixed_point)?;
    let ma = chart.to_model(a)?;
    let mb = chart.to_model(b)?;
    let close = |u: f64, v: f64| (u - v).abs() <= 1e-12 * (1.0 + u.abs().max(v.abs()));
    if !close(ma.y, origin.y) {
        return Err(Error::NotOnAxis {
            point: a,
            axis: "unstable",
        });
    }
    if !close(mb.x, origin.x) {
        return Err(Error::NotOnAxis {
            point: b,
            axis: "stable",
        });
    }
    let q = Point::new(ma.x, mb.y);
    if !chart.target().contains(q) {
        return Ok(None);
    }
    match chart.from_model(q) {
        Ok(p) => Ok(Some(p)),
        Err(Error::OutOfDomain { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}
