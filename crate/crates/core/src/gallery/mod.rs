//! Built-in systems and construction from specs.

pub mod composite;
pub mod example1;
pub mod example2;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use crate::dynamics::Chart;
pub use composite::CompositeChart;
pub use example1::{example1_chart, Example1Chart};
pub use example2::{example2_chart, example2_polyline, CurveKind, Example2Chart};

use crate::dsl::DslConfig;
use crate::dynamics::{ConjugatedMap, IdentityChart, LinearMap, LinearModel, PlanarSystem, Region};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::lyapunov::{PullbackLyapunov, SplitLyapunov};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SystemSpec {
    Linear { lambda: f64 },
    Example1,
    Example2,
    Composite { quadrants: Vec<SystemSpec> },
    Dsl(DslConfig),
}

impl SystemSpec {
    /// Composite with Example 1 in quadrant I, Example 2 in III, linear elsewhere.
    pub fn default_composite() -> Self {
        let lin = SystemSpec::Linear { lambda: 2.0 };
        SystemSpec::Composite {
            quadrants: vec![SystemSpec::Example1, lin.clone(), SystemSpec::Example2, lin],
        }
    }

    pub fn builtins() -> Vec<SystemSpec> {
        vec![
            SystemSpec::Linear { lambda: 2.0 },
            SystemSpec::Example1,
            SystemSpec::Example2,
            SystemSpec::default_composite(),
        ]
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemSpec::Linear { lambda } => write!(f, "linear:{lambda}"),
            SystemSpec::Example1 => write!(f, "example1"),
            SystemSpec::Example2 => write!(f, "example2"),
            SystemSpec::Composite { quadrants } => {
                let parts: Vec<String> = quadrants.iter().map(|q| q.to_string()).collect();
                write!(f, "composite[{}]", parts.join(","))
            }
            SystemSpec::Dsl(cfg) => write!(f, "dsl(fx={}, fy={})", cfg.fx, cfg.fy),
        }
    }
}

impl FromStr for SystemSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "example1" => return Ok(SystemSpec::Example1),
            "example2" => return Ok(SystemSpec::Example2),
            "composite" => return Ok(SystemSpec::default_composite()),
            "linear" => return Ok(SystemSpec::Linear { lambda: 2.0 }),
            _ => {}
        }
        if let Some(l) = s.strip_prefix("linear:") {
            let lambda: f64 = l
                .parse()
                .map_err(|_| Error::BadParameter(format!("bad lambda in system name {s:?}")))?;
            return Ok(SystemSpec::Linear { lambda });
        }
        Err(Error::BadParameter(format!(
            "unknown system {s:?}; expected linear:<lambda>, example1, example2 or composite"
        )))
    }
}

pub fn linear_system(lambda: f64) -> Result<PlanarSystem> {
    Ok(PlanarSystem {
        name: format!("linear:{lambda}"),
        map: Arc::new(LinearMap::new(lambda)?),
        metric: Arc::new(SplitLyapunov::new(lambda)?),
        fixed_point: Point::ORIGIN,
        model: Some(LinearModel {
            chart: Arc::new(IdentityChart(Region::WholePlane)),
            lambda,
        }),
        findings: Vec::new(),
    })
}

/// Chart of a first-quadrant building block and its model expansion factor.
fn quadrant_chart(spec: &SystemSpec) -> Result<(Arc<dyn Chart>, f64)> {
    match spec {
        SystemSpec::Linear { lambda } => {
            crate::dynamics::check_lambda(*lambda)?;
            Ok((Arc::new(IdentityChart(Region::Quadrant)), *lambda))
        }
        SystemSpec::Example1 => Ok((Arc::new(Example1Chart), example1::LAMBDA)),
        SystemSpec::Example2 => Ok((Arc::new(Example2Chart::default()), example2::LAMBDA)),
        other => Err(Error::BadParameter(format!(
            "composite quadrants must be linear, example1 or example2, got {other}"
        ))),
    }
}

pub fn composite_system(quadrants: &[SystemSpec]) -> Result<PlanarSystem> {
    if quadrants.len() != 4 {
        return Err(Error::BadParameter(format!(
            "composite needs 4 quadrant specs, got {}",
            quadrants.len()
        )));
    }
    let parts = quadrants
        .iter()
        .map(quadrant_chart)
        .collect::<Result<Vec<_>>>()?;
    let lambda = parts[0].1;
    if let Some(&(_, other)) = parts.iter().find(|(_, l)| *l != lambda) {
        return Err(Error::ChartMismatch {
            a: lambda,
            b: other,
        });
    }
    let charts: Vec<Arc<dyn Chart>> = parts.into_iter().map(|(c, _)| c).collect();
    let chart: Arc<dyn Chart> = Arc::new(CompositeChart {
        quadrants: [
            charts[0].clone(),
            charts[1].clone(),
            charts[2].clone(),
            charts[3].clone(),
        ],
    });
    let name = SystemSpec::Composite {
        quadrants: quadrants.to_vec(),
    }
    .to_string();
    Ok(PlanarSystem {
        name,
        map: Arc::new(ConjugatedMap {
            base: LinearMap::new(lambda)?,
            chart: chart.clone(),
        }),
        metric: Arc::new(PullbackLyapunov {
            base: SplitLyapunov::new(lambda)?,
            chart: chart.clone(),
        }),
        fixed_point: Point::ORIGIN,
        model: Some(LinearModel { chart, lambda }),
        findings: Vec::new(),
    })
}

pub fn make_system(spec: &SystemSpec) -> Result<PlanarSystem> {
    match spec {
        SystemSpec::Linear { lambda } => linear_system(*lambda),
        SystemSpec::Example1 => Ok(example1::system()),
        SystemSpec::Example2 => Ok(example2::system()),
        SystemSpec::Composite { quadrants } => composite_system(quadrants),
        SystemSpec::Dsl(cfg) => crate::dsl::compile_system(cfg),
    }
}
