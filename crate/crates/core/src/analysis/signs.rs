use serde_json::json;

use super::{
    level_set_point, params, point_json, unit, ConditionId, ConditionReport, SampleTable, Verdict,
};
use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::lyapunov::first_difference;
use crate::tolerances::{LEVEL_SET_TOL, SIGN_DEADBAND};

/// Looks for both signs of `V(x, ·)` on the level set `U(x, ·) = k`.
///
/// Directions along which the level set cannot be reached inside the domain
/// are skipped and counted.
pub fn sign_condition_check(
    sys: &PlanarSystem,
    x: Point,
    k: f64,
    n_dirs: usize,
) -> Result<ConditionReport> {
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::InvalidRadius(k));
    }
    if n_dirs == 0 {
        return Err(Error::BadParameter("n_dirs must be positive".into()));
    }
    let mut table = SampleTable::new(&["theta", "y_x", "y_y", "V"]);
    let (mut pos, mut neg) = (false, false);
    let mut skipped = 0usize;
    for i in 0..n_dirs {
        let theta = std::f64::consts::TAU * i as f64 / n_dirs as f64;
        let y = match level_set_point(sys, x, unit(theta), k, LEVEL_SET_TOL) {
            Ok(y) => y,
            Err(Error::BisectionFailure(_) | Error::OutOfDomain { .. }) => {
                skipped += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let v = first_difference(sys, x, y)?;
        pos |= v > SIGN_DEADBAND;
        neg |= v < -SIGN_DEADBAND;
        table.push(vec![theta, y.x, y.y, v]);
    }
    let verdict = if pos && neg {
        Verdict::HoldsNumerically
    } else if skipped == 0 {
        Verdict::FailsNumerically
    } else {
        Verdict::Inconclusive
    };
    Ok(ConditionReport {
        condition_id: ConditionId::Signs,
        parameters: params([
            ("system", json!(sys.name)),
            ("x", point_json(x)),
            ("k", json!(k)),
            ("n_dirs", json!(n_dirs)),
            ("skipped", json!(skipped)),
            ("deadband", json!(SIGN_DEADBAND)),
            ("level_set_tol", json!(LEVEL_SET_TOL)),
        ]),
        samples: table,
        verdict,
    })
}
