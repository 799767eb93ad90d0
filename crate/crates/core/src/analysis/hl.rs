use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{level_set_point, params, unit, ConditionId, ConditionReport, SampleTable, Verdict};
use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::lyapunov::first_difference;
use crate::sampling::{angle, domain_point, rng};
use crate::tolerances::{LEVEL_SET_TOL, MONOTONE_SLACK};

/// Sampling plan and thresholds for [`hl_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct HlPlan {
    pub deltas: Vec<f64>,
    /// Half-widths of the sampling windows for base points.
    pub window_scales: Vec<f64>,
    pub centers_per_window: usize,
    /// Random `(y, z)` pairs per base point for the modulus.
    pub pairs_per_center: usize,
    /// Directions around each base point for the `W` lower bound.
    pub n_dirs: usize,
    /// Level sets `U = δ(1 + η)` probed for the `W` lower bound.
    pub etas: Vec<f64>,
    pub seed: u64,
    pub slack: f64,
    /// The modulus at the smallest δ must be at most this fraction of the
    /// modulus at the largest δ.
    pub tail_fraction: f64,
    /// Every `a(δ)` must exceed this.
    pub w_floor: f64,
}

impl HlPlan {
    pub fn new(deltas: Vec<f64>, seed: u64) -> Self {
        HlPlan {
            deltas,
            window_scales: vec![1.0, 10.0, 100.0],
            centers_per_window: 8,
            pairs_per_center: 16,
            n_dirs: 16,
            etas: vec![1e-6, 1e-3, 0.1, 1.0, 10.0],
            seed,
            slack: MONOTONE_SLACK,
            tail_fraction: 0.5,
            w_floor: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HlReport {
    /// Modulus of continuity of `V` in its second argument.
    pub v: ConditionReport,
    /// Lower bound `a(δ)` of `W` off the δ-diagonal.
    pub w: ConditionReport,
}

impl HlReport {
    pub fn verdict(&self) -> Verdict {
        self.v.verdict.and(self.w.verdict)
    }

    /// Columns `delta, modulus_sup, a_min`.
    pub fn combined(&self) -> SampleTable {
        let mut t = SampleTable::new(&["delta", "modulus_sup", "a_min"]);
        for (rv, rw) in self.v.samples.rows.iter().zip(&self.w.samples.rows) {
            t.push(vec![rv[0], rv[1], rw[1]]);
        }
        t
    }
}

struct Probe {
    x: Point,
    y: Point,
    y_angle: f64,
    frac: f64,
}

fn modulus_at(sys: &PlanarSystem, delta: f64, probes: &[Probe]) -> (f64, usize) {
    let vals: Vec<Option<f64>> = probes
        .par_iter()
        .map(|pr| {
            let z = level_set_point(sys, pr.y, unit(pr.y_angle), delta * pr.frac, LEVEL_SET_TOL)
                .ok()?;
            let vz = first_difference(sys, pr.x, z).ok()?;
            let vy = first_difference(sys, pr.x, pr.y).ok()?;
            Some((vz - vy).abs())
        })
        .collect();
    let skipped = vals.iter().filter(|v| v.is_none()).count();
    (vals.into_iter().flatten().fold(0.0, f64::max), skipped)
}

fn a_min_at(sys: &PlanarSystem, delta: f64, centers: &[Point], plan: &HlPlan) -> (f64, usize) {
    let jobs: Vec<(Point, f64, f64)> = centers
        .iter()
        .flat_map(|&x| {
            plan.etas.iter().flat_map(move |&eta| {
                (0..plan.n_dirs).map(move |j| {
                    (
                        x,
                        eta,
                        std::f64::consts::TAU * j as f64 / plan.n_dirs as f64,
                    )
                })
            })
        })
        .collect();
    let vals: Vec<Option<f64>> = jobs
        .par_iter()
        .map(|&(x, eta, theta)| {
            let y =
                level_set_point(sys, x, unit(theta), delta * (1.0 + eta), LEVEL_SET_TOL).ok()?;
            Some(sys.differences(x, y).ok()?.w)
        })
        .collect();
    let skipped = vals.iter().filter(|v| v.is_none()).count();
    (
        vals.into_iter().flatten().fold(f64::INFINITY, f64::min),
        skipped,
    )
}

/// Estimates the HL modulus of `V` and the lower bound `a(δ)` of `W`.
pub fn hl_estimate(sys: &PlanarSystem, plan: &HlPlan) -> Result<HlReport> {
    if plan.deltas.is_empty() {
        return Err(Error::BadParameter("no deltas given".into()));
    }
    if let Some(&d) = plan.deltas.iter().find(|d| !(d.is_finite() && **d > 0.0)) {
        return Err(Error::BadDelta(d));
    }
    if plan.window_scales.is_empty() || plan.centers_per_window == 0 || plan.n_dirs == 0 {
        return Err(Error::BadParameter("empty HL sampling plan".into()));
    }

    let mut r = rng(plan.seed);
    let mut centers = Vec::new();
    let mut probes = Vec::new();
    for &s in &plan.window_scales {
        for _ in 0..plan.centers_per_window {
            let x = domain_point(sys, &mut r, s)?;
            centers.push(x);
            for i in 0..plan.pairs_per_center {
                let y = domain_point(sys, &mut r, s)?;
                let y_angle = angle(&mut r);
                // Half the pairs sit just inside the δ-ball, where the sup lives.
                let frac = if i % 2 == 0 {
                    1.0 - 1e-6
                } else {
                    r.gen_range(0.05..1.0)
                };
                probes.push(Probe {
                    x,
                    y,
                    y_angle,
                    frac,
                });
            }
        }
    }

    let mut vt = SampleTable::new(&["delta", "modulus_sup", "skipped"]);
    let mut wt = SampleTable::new(&["delta", "a_min", "a_over_delta", "skipped"]);
    for &delta in &plan.deltas {
        let (m, ms) = modulus_at(sys, delta, &probes);
        vt.push(vec![delta, m, ms as f64]);
        let (a, ws) = a_min_at(sys, delta, &centers, plan);
        wt.push(vec![delta, a, a / delta, ws as f64]);
    }

    let mut by_delta: Vec<(f64, f64)> = vt.rows.iter().map(|r| (r[0], r[1])).collect();
    by_delta.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (first, last) = (by_delta[0].1, by_delta[by_delta.len() - 1].1);
    let grows = by_delta
        .windows(2)
        .all(|w| w[0].1 <= w[1].1 * (1.0 + plan.slack));
    let v_verdict = if by_delta.len() < 2 || probes.is_empty() {
        Verdict::Inconclusive
    } else if grows && first <= plan.tail_fraction * last {
        Verdict::HoldsNumerically
    } else if first >= last * (1.0 - plan.slack) {
        Verdict::FailsNumerically
    } else {
        Verdict::Inconclusive
    };

    let a_values: Vec<f64> = wt.rows.iter().map(|r| r[1]).collect();
    let w_verdict = if a_values.iter().any(|a| a.is_infinite()) {
        Verdict::Inconclusive
    } else if a_values.iter().all(|&a| a > plan.w_floor) {
        Verdict::HoldsNumerically
    } else {
        Verdict::FailsNumerically
    };

    let common = params([
        ("system", json!(sys.name)),
        ("deltas", json!(plan.deltas)),
        ("window_scales", json!(plan.window_scales)),
        ("centers_per_window", json!(plan.centers_per_window)),
        ("seed", json!(plan.seed)),
        ("level_set_tol", json!(LEVEL_SET_TOL)),
    ]);
    let mut vp = common.clone();
    vp.extend(params([
        ("pairs_per_center", json!(plan.pairs_per_center)),
        ("slack", json!(plan.slack)),
        ("tail_fraction", json!(plan.tail_fraction)),
    ]));
    let mut wp = common;
    wp.extend(params([
        ("n_dirs", json!(plan.n_dirs)),
        ("etas", json!(plan.etas)),
        ("w_floor", json!(plan.w_floor)),
    ]));
    Ok(HlReport {
        v: ConditionReport {
            condition_id: ConditionId::HlV,
            parameters: vp,
            samples: vt,
            verdict: v_verdict,
        },
        w: ConditionReport {
            condition_id: ConditionId::HlW,
            parameters: wp,
            samples: wt,
            verdict: w_verdict,
        },
    })
}
