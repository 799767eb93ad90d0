use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{Chart, PlanarSystem};
use crate::error::{Error, Result};
use crate::geom::Point;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct ResidualStats {
    /// Largest `|f_B(h(p)) - h(f_A(p))|` over verified grid points.
    pub max: f64,
    pub mean: f64,
    /// Largest `|h⁻¹(h(p)) - p|`.
    pub roundtrip_max: f64,
    pub verified: usize,
    /// Grid points where some evaluation left a domain.
    pub unverifiable: usize,
}

/// `h = chart_B⁻¹ ∘ chart_A` with its measured conjugation residual.
#[derive(Clone)]
pub struct ConjugacyMap {
    a: Arc<dyn Chart>,
    b: Arc<dyn Chart>,
    pub residual_stats: ResidualStats,
}

impl ConjugacyMap {
    pub fn forward(&self, p: Point) -> Result<Point> {
        self.b.from_model(self.a.to_model(p)?)
    }

    pub fn inverse(&self, q: Point) -> Result<Point> {
        self.a.from_model(self.b.to_model(q)?)
    }
}

/// Composes the charts of two systems targeting the same linear model and
/// measures `h ∘ f_A = f_B ∘ h` on `grid`.
pub fn build_conjugacy(a: &PlanarSystem, b: &PlanarSystem, grid: &[Point]) -> Result<ConjugacyMap> {
    let (ma, mb) = (a.model()?, b.model()?);
    if ma.lambda != mb.lambda {
        return Err(Error::ChartMismatch {
            a: ma.lambda,
            b: mb.lambda,
        });
    }
    let mut h = ConjugacyMap {
        a: ma.chart.clone(),
        b: mb.chart.clone(),
        residual_stats: ResidualStats::default(),
    };
    let checks: Vec<Option<(f64, f64)>> = grid
        .par_iter()
        .map(|&p| {
            let hp = h.forward(p).ok()?;
            let lhs = b.forward(hp).ok()?;
            let rhs = h.forward(a.forward(p).ok()?).ok()?;
            let back = h.inverse(hp).ok()?;
            Some((lhs.dist(rhs), back.dist(p)))
        })
        .collect();
    let mut stats = ResidualStats::default();
    let mut sum = 0.0;
    for (r, rt) in checks.iter().flatten() {
        stats.max = stats.max.max(*r);
        stats.roundtrip_max = stats.roundtrip_max.max(*rt);
        sum += r;
        stats.verified += 1;
    }
    stats.unverifiable = grid.len() - stats.verified;
    stats.mean = if stats.verified > 0 {
        sum / stats.verified as f64
    } else {
        0.0
    };
    h.residual_stats = stats;
    Ok(h)
}
