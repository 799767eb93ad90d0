use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use super::membership::{membership, MembershipPlan, SetVerdict};
use crate::dynamics::PlanarSystem;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::sampling::Rect;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridLabel {
    MemberInComponent,
    MemberOffComponent,
    Escapes,
    Undecided,
    /// The node or one of its iterates is outside where the system is defined.
    OutOfDomain,
}

impl GridLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            GridLabel::MemberInComponent => "member-in-component",
            GridLabel::MemberOffComponent => "member-off-component",
            GridLabel::Escapes => "escapes",
            GridLabel::Undecided => "undecided",
            GridLabel::OutOfDomain => "out-of-domain",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridClassification {
    pub window: Rect,
    pub resolution: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major, `labels[iy * nx + ix]`.
    pub labels: Vec<GridLabel>,
    pub center: (usize, usize),
    pub center_point: Point,
}

impl GridClassification {
    pub fn label(&self, ix: usize, iy: usize) -> GridLabel {
        self.labels[iy * self.nx + ix]
    }

    /// Nodes sit at `center_point + (ix - cx, iy - cy) * resolution`, so the
    /// center point is itself a node.
    pub fn node(&self, ix: usize, iy: usize) -> Point {
        let dx = ix as f64 - self.center.0 as f64;
        let dy = iy as f64 - self.center.1 as f64;
        Point::new(
            self.center_point.x + dx * self.resolution,
            self.center_point.y + dy * self.resolution,
        )
    }

    pub fn count(&self, label: GridLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// `(ix, iy, point, label)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, Point, GridLabel)> + '_ {
        (0..self.ny).flat_map(move |iy| {
            (0..self.nx).map(move |ix| (ix, iy, self.node(ix, iy), self.label(ix, iy)))
        })
    }
}

/// Classifies every node of a grid aligned on `x` by [`membership`] and marks
/// the 4-connected component of members containing `x`.
pub fn component_grid(
    sys: &PlanarSystem,
    x: Point,
    window: Rect,
    resolution: f64,
    plan: &MembershipPlan,
) -> Result<GridClassification> {
    if !(resolution.is_finite() && resolution > 0.0) {
        return Err(Error::BadParameter(format!("resolution {resolution}")));
    }
    if !window.contains(x) {
        return Err(Error::BadParameter(format!(
            "center {x} is outside the window"
        )));
    }
    let steps = |span: f64| (span / resolution + 1e-9).floor() as usize;
    let (left, right) = (steps(x.x - window.xmin), steps(window.xmax - x.x));
    let (below, above) = (steps(x.y - window.ymin), steps(window.ymax - x.y));
    let (nx, ny) = (left + right + 1, below + above + 1);
    if nx.saturating_mul(ny) > 25_000_000 {
        return Err(Error::BadParameter(format!(
            "grid of {nx} x {ny} nodes is too large"
        )));
    }

    let mut grid = GridClassification {
        window,
        resolution,
        nx,
        ny,
        labels: Vec::new(),
        center: (left, below),
        center_point: x,
    };
    let nodes: Vec<Point> = (0..ny)
        .flat_map(|iy| (0..nx).map(move |ix| (ix, iy)))
        .map(|(ix, iy)| grid.node(ix, iy))
        .collect();
    let verdicts = nodes
        .par_iter()
        .map(|&p| match membership(sys, x, p, plan) {
            Ok(SetVerdict::Member) => Ok(GridLabel::MemberOffComponent),
            Ok(SetVerdict::Escapes { .. }) => Ok(GridLabel::Escapes),
            Ok(SetVerdict::Undecided { .. }) => Ok(GridLabel::Undecided),
            Err(Error::OutOfDomain { .. }) => Ok(GridLabel::OutOfDomain),
            Err(e) => Err(e),
        })
        .collect::<Result<Vec<GridLabel>>>()?;
    grid.labels = verdicts;

    let start = grid.center.1 * nx + grid.center.0;
    if grid.labels[start] == GridLabel::MemberOffComponent {
        let mut queue = VecDeque::from([start]);
        grid.labels[start] = GridLabel::MemberInComponent;
        while let Some(i) = queue.pop_front() {
            let (ix, iy) = (i % nx, i / nx);
            let mut visit = |j: usize| {
                if grid.labels[j] == GridLabel::MemberOffComponent {
                    grid.labels[j] = GridLabel::MemberInComponent;
                    queue.push_back(j);
                }
            };
            if ix > 0 {
                visit(i - 1);
            }
            if ix + 1 < nx {
                visit(i + 1);
            }
            if iy > 0 {
                visit(i - nx);
            }
            if iy + 1 < ny {
                visit(i + nx);
            }
        }
    }
    Ok(grid)
}
