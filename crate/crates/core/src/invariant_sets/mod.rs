//! Stable and unstable sets: membership decisions, component grids, curves
//! traced through charts, their intersections, and conjugacies.

mod conjugacy;
mod curves;
mod grid;
mod membership;

pub use conjugacy::{build_conjugacy, ConjugacyMap, ResidualStats};
pub use curves::{curve_intersection, trace_curve};
pub use grid::{component_grid, GridClassification, GridLabel};
pub use membership::{membership, MembershipPlan, SetVerdict};
