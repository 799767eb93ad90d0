use super::unit;
use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::lyapunov::first_difference;
use crate::tolerances::SIGN_DEADBAND;

/// Number of maximal constant-sign runs in a cyclic sequence, ignoring values
/// inside the deadband. `None` when every value is inside it.
pub fn sign_blocks(values: &[f64], deadband: f64) -> Option<usize> {
    let signs: Vec<bool> = values
        .iter()
        .filter(|v| v.abs() > deadband)
        .map(|&v| v > 0.0)
        .collect();
    if signs.is_empty() {
        return None;
    }
    let changes = (0..signs.len())
        .filter(|&i| signs[i] != signs[(i + 1) % signs.len()])
        .count();
    Some(changes.max(1))
}

/// Sign blocks of `θ -> V(x, x + r(cos θ, sin θ))`; 4 at a regular point.
pub fn sector_count(sys: &PlanarSystem, x: Point, r: f64, n_samples: usize) -> Result<usize> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::InvalidRadius(r));
    }
    if n_samples < 4 {
        return Err(Error::BadParameter(format!(
            "need at least 4 samples, got {n_samples}"
        )));
    }
    let values = (0..n_samples)
        .map(|i| {
            let theta = std::f64::consts::TAU * i as f64 / n_samples as f64;
            first_difference(sys, x, x + unit(theta) * r)
        })
        .collect::<Result<Vec<f64>>>()?;
    sign_blocks(&values, SIGN_DEADBAND).ok_or(Error::Degenerate)
}
