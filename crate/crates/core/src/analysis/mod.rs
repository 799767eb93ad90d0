//! Numeric checkers for the sign property, HP, HL, HA and usual-metric
//! comparability, plus witnesses, the convexity scan and sector counting.

mod comparability;
mod convexity;
mod ha;
mod hl;
mod hp;
mod sectors;
mod signs;
mod witness;

use std::f64::consts::{FRAC_PI_2, TAU};

use serde::Serialize;
use serde_json::{Map, Value};

pub use comparability::{comparability_check, ComparabilityPlan};
pub use convexity::{convexity_scan, ConvexityViolation};
pub use ha::ha_check;
pub use hl::{hl_estimate, HlPlan, HlReport};
pub use hp::{hp_estimate, HpPlan};
pub use sectors::{sector_count, sign_blocks};
pub use signs::sign_condition_check;
pub use witness::{expansive_witness, WitnessResult};

use crate::dynamics::{PlanarSystem, Region};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::numeric::bisect;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionId {
    #[serde(rename = "signs")]
    Signs,
    #[serde(rename = "HP")]
    Hp,
    #[serde(rename = "HL-V")]
    HlV,
    #[serde(rename = "HL-W")]
    HlW,
    #[serde(rename = "HA")]
    Ha,
    #[serde(rename = "comparability")]
    Comparability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsNumerically,
    FailsNumerically,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HoldsNumerically => "holds-numerically",
            Verdict::FailsNumerically => "fails-numerically",
            Verdict::Inconclusive => "inconclusive",
        }
    }

    /// Worst of two verdicts: any failure fails, then any doubt is doubt.
    pub fn and(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (FailsNumerically, _) | (_, FailsNumerically) => FailsNumerically,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => HoldsNumerically,
        }
    }
}

/// Column-major description, row-major numeric data.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SampleTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SampleTable {
    pub fn new(columns: &[&str]) -> Self {
        SampleTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition_id: ConditionId,
    /// Sampling plan and thresholds, sorted by key.
    pub parameters: Map<String, Value>,
    pub samples: SampleTable,
    pub verdict: Verdict,
}

impl ConditionReport {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        self.samples.column(name)
    }
}

/// Builds a parameter record from `(key, value)` pairs.
pub(crate) fn params<I, K>(items: I) -> Map<String, Value>
where
    I: IntoIterator<Item = (K, Value)>,
    K: Into<String>,
{
    items.into_iter().map(|(k, v)| (k.into(), v)).collect()
}

pub(crate) fn point_json(p: Point) -> Value {
    serde_json::json!([p.x, p.y])
}

/// Unit vector at angle `theta`, with exact zeros on the axes.
pub fn unit(theta: f64) -> Point {
    let (s, c) = theta.sin_cos();
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    Point::new(snap(c), snap(s))
}

/// Directions for sampling around a point: the full circle starting on the
/// positive x-axis, or the open first quadrant for first-quadrant domains.
pub fn ray_directions(domain: Region, n: usize) -> Vec<f64> {
    if domain.is_first_quadrant() {
        (0..n)
            .map(|i| (i as f64 + 0.5) * FRAC_PI_2 / n as f64)
            .collect()
    } else {
        (0..n).map(|i| TAU * i as f64 / n as f64).collect()
    }
}

/// Point `x + t e` on the level set `U(x, ·) = k` along direction `e`.
///
/// Doubles `t` until `U` exceeds `k`, then bisects inside the last bracket,
/// so the first crossing found at dyadic resolution is returned.
pub fn level_set_point(sys: &PlanarSystem, x: Point, e: Point, k: f64, tol: f64) -> Result<Point> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidRadius(k));
    }
    let fail = |why: String| Error::BisectionFailure(format!("level set U = {k} from {x}: {why}"));
    let along = |t: f64| -> Result<f64> { Ok(sys.u(x, x + e * t)? - k) };
    let mut lo = 0.0;
    let mut hi = k * 1e-3;
    let mut found = false;
    for _ in 0..200 {
        match along(hi) {
            Ok(v) if v > 0.0 => {
                found = true;
                break;
            }
            Ok(_) => {
                lo = hi;
                hi *= 2.0;
            }
            Err(err) => return Err(fail(err.to_string())),
        }
    }
    if !found {
        return Err(fail("U never reaches k along this direction".into()));
    }
    let t = bisect(|t| along(t).unwrap_or(f64::NAN), lo, hi, 1e-15, "level set")
        .map_err(|err| fail(err.to_string()))?;
    let p = x + e * t;
    let miss = (sys.u(x, p)? - k).abs();
    if miss > tol * k.max(1.0) {
        return Err(fail(format!("residual {miss:e}")));
    }
    Ok(p)
}

/// True when `values` never grows by more than `slack` relative.
pub(crate) fn nonincreasing(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
}
