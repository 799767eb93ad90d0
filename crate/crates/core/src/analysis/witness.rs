use serde::Serialize;

use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WitnessResult {
    /// First index in the order `0, 1, -1, 2, -2, ...` with `U > k`.
    pub n: i64,
    pub value: f64,
    /// `max(ceil((k - U) / V), 1)` when `V(x, y) > 0` and `U(x, y) <= k`.
    pub guarantee_bound: Option<i64>,
}

/// Scans both time directions for an iterate separating `x` and `y` by more
/// than `k`.
pub fn expansive_witness(
    sys: &PlanarSystem,
    x: Point,
    y: Point,
    k: f64,
    n_max: u32,
) -> Result<WitnessResult> {
    if x == y {
        return Err(Error::IdenticalPoints);
    }
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::NonPositiveK(k));
    }
    let u0 = sys.u(x, y)?;
    if u0 > k {
        return Ok(WitnessResult {
            n: 0,
            value: u0,
            guarantee_bound: None,
        });
    }
    let (mut fx, mut fy) = (sys.forward(x)?, sys.forward(y)?);
    let u1 = sys.u(fx, fy)?;
    let v = u1 - u0;
    let guarantee_bound = (v > 0.0).then(|| (((k - u0) / v).ceil() as i64).max(1));
    let (mut bx, mut by) = (x, y);
    for n in 1..=n_max as i64 {
        if n > 1 {
            fx = sys.forward(fx).map_err(|e| e.at_step(n))?;
            fy = sys.forward(fy).map_err(|e| e.at_step(n))?;
        }
        let uf = if n == 1 { u1 } else { sys.u(fx, fy)? };
        if uf > k {
            return Ok(WitnessResult {
                n,
                value: uf,
                guarantee_bound,
            });
        }
        bx = sys.inverse(bx).map_err(|e| e.at_step(-n))?;
        by = sys.inverse(by).map_err(|e| e.at_step(-n))?;
        let ub = sys.u(bx, by)?;
        if ub > k {
            return Ok(WitnessResult {
                n: -n,
                value: ub,
                guarantee_bound,
            });
        }
    }
    Err(Error::NotFound { n_max })
}
