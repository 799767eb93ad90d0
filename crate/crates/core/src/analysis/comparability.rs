use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{level_set_point, params, unit, ConditionId, ConditionReport, SampleTable, Verdict};
use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::sampling::{angle, domain_point, rng};
use crate::tolerances::LEVEL_SET_TOL;

/// Sampling plan and thresholds for [`comparability_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComparabilityPlan {
    pub ks: Vec<f64>,
    /// Geometrically growing window half-widths.
    pub windows: Vec<f64>,
    pub samples: usize,
    pub seed: u64,
    /// Growth of `k'` from the first to the last window at or below this holds.
    pub stable_growth: f64,
    /// Growth at or above this fails.
    pub unbounded_growth: f64,
}

impl ComparabilityPlan {
    pub fn new(ks: Vec<f64>, samples: usize, seed: u64) -> Self {
        ComparabilityPlan {
            ks,
            windows: vec![1.0, 10.0, 100.0, 1000.0],
            samples,
            seed,
            stable_growth: 1.5,
            unbounded_growth: 5.0,
        }
    }
}

/// `k'(k)`: the largest Euclidean distance between sampled pairs with
/// `U(x, y) < k`, per window.
pub fn comparability_check(
    sys: &PlanarSystem,
    plan: &ComparabilityPlan,
) -> Result<ConditionReport> {
    if plan.ks.is_empty() {
        return Err(Error::BadK("no k values".into()));
    }
    if let Some(k) = plan.ks.iter().find(|k| !(k.is_finite() && **k > 0.0)) {
        return Err(Error::BadK(format!("k must be finite and > 0, got {k}")));
    }
    if plan.samples == 0 {
        return Err(Error::BadK("samples must be positive".into()));
    }
    if plan.windows.is_empty() {
        return Err(Error::BadK("no windows".into()));
    }
    let mut r = rng(plan.seed);
    let mut table = SampleTable::new(&["k", "window", "k_prime", "skipped"]);
    let mut growths = Vec::new();
    for &k in &plan.ks {
        let mut per_window = Vec::new();
        for &w in &plan.windows {
            let mut jobs: Vec<(Point, f64, f64)> = Vec::with_capacity(plan.samples);
            for i in 0..plan.samples {
                let x = domain_point(sys, &mut r, w)?;
                let frac = if i % 2 == 0 {
                    1.0 - 1e-9
                } else {
                    r.gen_range(0.05..1.0)
                };
                jobs.push((x, angle(&mut r), frac));
            }
            let dists: Vec<Option<f64>> = jobs
                .par_iter()
                .map(|&(x, theta, frac)| {
                    let y = level_set_point(sys, x, unit(theta), k * frac, LEVEL_SET_TOL).ok()?;
                    Some(x.dist(y))
                })
                .collect();
            let skipped = dists.iter().filter(|d| d.is_none()).count();
            let kp = dists.into_iter().flatten().fold(0.0, f64::max);
            table.push(vec![k, w, kp, skipped as f64]);
            per_window.push(kp);
        }
        let first = per_window[0];
        let last = per_window[per_window.len() - 1];
        growths.push(if first > 0.0 {
            last / first
        } else {
            f64::INFINITY
        });
    }
    let verdict = if growths.iter().any(|&g| g >= plan.unbounded_growth) {
        Verdict::FailsNumerically
    } else if growths.iter().all(|&g| g <= plan.stable_growth) {
        Verdict::HoldsNumerically
    } else {
        Verdict::Inconclusive
    };
    Ok(ConditionReport {
        condition_id: ConditionId::Comparability,
        parameters: params([
            ("system", json!(sys.name)),
            ("ks", json!(plan.ks)),
            ("windows", json!(plan.windows)),
            ("samples", json!(plan.samples)),
            ("seed", json!(plan.seed)),
            ("stable_growth", json!(plan.stable_growth)),
            ("unbounded_growth", json!(plan.unbounded_growth)),
            ("growth", json!(growths)),
        ]),
        samples: table,
        verdict,
    })
}
