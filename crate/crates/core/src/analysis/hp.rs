use rayon::prelude::*;
use serde_json::json;

use super::{
    nonincreasing, params, ray_directions, unit, ConditionId, ConditionReport, SampleTable, Verdict,
};
use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::sampling::Rect;
use crate::tolerances::{HP_MIN_W, MONOTONE_SLACK};

/// Sampling plan and thresholds for [`hp_estimate`].
#[derive(Clone, Debug, PartialEq)]
pub struct HpPlan {
    /// Compact set `C`, sampled on a grid.
    pub rect: Rect,
    pub step: f64,
    pub radii: Vec<f64>,
    pub n_dirs: usize,
    pub slack: f64,
    /// Final ratio at or below this (with a nonincreasing ladder) holds.
    pub tolerance: f64,
    /// Final ratio at or above this fails.
    pub fail_floor: f64,
}

impl HpPlan {
    pub fn new(rect: Rect, step: f64, radii: Vec<f64>) -> Self {
        HpPlan {
            rect,
            step,
            radii,
            n_dirs: 16,
            slack: MONOTONE_SLACK,
            tolerance: 3e-4,
            fail_floor: 1e-2,
        }
    }
}

struct Best {
    ratio: f64,
    x: Point,
}

/// Largest `|V(x,y) - V(x,z)| / W(x,y)` over `y, z` in the grid for one `x`.
fn ratio_at(sys: &PlanarSystem, x: Point, grid: &[Point]) -> Result<f64> {
    let mut vw = Vec::with_capacity(grid.len());
    for &y in grid {
        let d = sys.differences(x, y)?;
        vw.push((d.v, d.w));
    }
    let vmax = vw.iter().map(|t| t.0).fold(f64::NEG_INFINITY, f64::max);
    let vmin = vw.iter().map(|t| t.0).fold(f64::INFINITY, f64::min);
    Ok(vw
        .iter()
        .filter(|(_, w)| *w > HP_MIN_W)
        .map(|&(v, w)| (vmax - v).max(v - vmin) / w)
        .fold(0.0, f64::max))
}

/// For each radius `R`, the HP ratio maximized over `x` on `|x| = R` along
/// the plan's ray directions and over grid pairs in `C`.
pub fn hp_estimate(sys: &PlanarSystem, plan: &HpPlan) -> Result<ConditionReport> {
    if plan.radii.is_empty() {
        return Err(Error::EmptyRadii);
    }
    if plan.radii.windows(2).any(|w| w[1] <= w[0]) || plan.radii[0] <= 0.0 {
        return Err(Error::BadParameter(
            "radii must be positive and strictly increasing".into(),
        ));
    }
    if plan.n_dirs == 0 {
        return Err(Error::BadParameter("n_dirs must be positive".into()));
    }
    let domain = sys.domain();
    let grid = plan.rect.grid(plan.step)?;
    for &c in &grid {
        domain.check(c)?;
    }
    let dirs = ray_directions(domain, plan.n_dirs);

    let mut table = SampleTable::new(&["radius", "ratio_max", "x_at_max_x", "x_at_max_y"]);
    let mut ratios = Vec::with_capacity(plan.radii.len());
    for &r in &plan.radii {
        let per_dir = dirs
            .par_iter()
            .map(|&theta| {
                let x = unit(theta) * r;
                domain.check(x)?;
                Ok(Best {
                    ratio: ratio_at(sys, x, &grid)?,
                    x,
                })
            })
            .collect::<Result<Vec<Best>>>()?;
        // First direction wins ties, independent of scheduling.
        let best = per_dir
            .into_iter()
            .reduce(|a, b| if b.ratio > a.ratio { b } else { a })
            .expect("at least one direction");
        ratios.push(best.ratio);
        table.push(vec![r, best.ratio, best.x.x, best.x.y]);
    }

    let last = *ratios.last().expect("non-empty");
    let monotone = nonincreasing(&ratios, plan.slack);
    let verdict = if monotone && last <= plan.tolerance {
        Verdict::HoldsNumerically
    } else if last >= plan.fail_floor {
        Verdict::FailsNumerically
    } else {
        Verdict::Inconclusive
    };
    Ok(ConditionReport {
        condition_id: ConditionId::Hp,
        parameters: params([
            ("system", json!(sys.name)),
            (
                "C",
                json!([
                    plan.rect.xmin,
                    plan.rect.xmax,
                    plan.rect.ymin,
                    plan.rect.ymax
                ]),
            ),
            ("grid_step", json!(plan.step)),
            ("radii", json!(plan.radii)),
            ("n_dirs", json!(plan.n_dirs)),
            (
                "directions",
                json!(if domain.is_first_quadrant() {
                    "open first quadrant, offset half a step"
                } else {
                    "full circle from the positive x-axis"
                }),
            ),
            ("min_w", json!(HP_MIN_W)),
            ("slack", json!(plan.slack)),
            ("tolerance", json!(plan.tolerance)),
            ("fail_floor", json!(plan.fail_floor)),
            ("nonincreasing", json!(monotone)),
        ]),
        samples: table,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::linear_system;

    #[test]
    fn empty_radii() {
        let sys = linear_system(2.0).unwrap();
        let plan = HpPlan::new(Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), 0.25, vec![]);
        assert!(matches!(hp_estimate(&sys, &plan), Err(Error::EmptyRadii)));
    }

    #[test]
    fn linear_ratio_decreases() {
        let sys = linear_system(2.0).unwrap();
        let plan = HpPlan::new(
            Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(),
            0.25,
            vec![10.0, 100.0, 1000.0, 10000.0],
        );
        let r = hp_estimate(&sys, &plan).unwrap();
        let ratios = r.column("ratio_max").unwrap();
        assert!(nonincreasing(&ratios, 0.05), "{ratios:?}");
    }
}
