//! Computable pieces of the Lyapunov-metric theory of expansive plane
//! homeomorphisms: example systems, difference operators, condition checkers,
//! stable-set tools and conjugacies to the linear hyperbolic model.

pub mod analysis;
pub mod dsl;
pub mod dynamics;
pub mod error;
pub mod gallery;
pub mod geom;
pub mod invariant_sets;
pub mod lyapunov;
pub mod numeric;
pub mod sampling;
pub mod tolerances;

pub use analysis::{ConditionId, ConditionReport, SampleTable, Verdict};
pub use dynamics::{apply, flow_time, orbit, Chart, Direction, PlanarMap, PlanarSystem, Region};
pub use error::{Error, Result};
pub use gallery::{make_system, CurveKind, SystemSpec};
pub use geom::{intersect, Point, PolyLine};
pub use invariant_sets::{GridClassification, GridLabel, SetVerdict};
pub use lyapunov::{
    differences, split_eval, DifferenceTriple, Metric, PullbackLyapunov, SplitLyapunov,
};
pub use sampling::Rect;
