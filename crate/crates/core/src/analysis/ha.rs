use serde_json::json;

use super::{params, point_json, ConditionId, ConditionReport, SampleTable, Verdict};
use crate::dynamics::{orbit, PlanarSystem};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Table of `U(fⁿx, fⁿ⁺¹x)` for `n = -N..=N`.
///
/// Holds when the value exceeds `threshold` at both ends. The parameters
/// record which end(s) exceeded it.
pub fn ha_check(sys: &PlanarSystem, x: Point, n: u32, threshold: f64) -> Result<ConditionReport> {
    if !threshold.is_finite() {
        return Err(Error::BadParameter(format!("threshold {threshold}")));
    }
    let n = n as i64;
    let pts = orbit(sys.map.as_ref(), x, -n, n + 1)?;
    let mut table = SampleTable::new(&["n", "value"]);
    for (i, w) in pts.windows(2).enumerate() {
        table.push(vec![(i as i64 - n) as f64, sys.u(w[0], w[1])?]);
    }
    let first = table.rows.first().map_or(0.0, |r| r[1]);
    let last = table.rows.last().map_or(0.0, |r| r[1]);
    let (backward, forward) = (first > threshold, last > threshold);
    let verdict = if forward && backward {
        Verdict::HoldsNumerically
    } else {
        Verdict::FailsNumerically
    };
    Ok(ConditionReport {
        condition_id: ConditionId::Ha,
        parameters: params([
            ("system", json!(sys.name)),
            ("x", point_json(x)),
            ("N", json!(n)),
            ("threshold", json!(threshold)),
            ("forward_exceeds", json!(forward)),
            ("backward_exceeds", json!(backward)),
        ]),
        samples: table,
        verdict,
    })
}
