use thiserror::Error;

use crate::dsl::{EvalError, ParseError};
use crate::geom::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point} lies outside {region}{}", step_suffix(*.step))]
    OutOfDomain {
        point: Point,
        region: String,
        /// Orbit index at which the exit happened, when known.
        step: Option<i64>,
    },
    #[error("non-finite value produced at {0}")]
    NonFinite(&'static str),
    #[error("malformed polyline: {0}")]
    MalformedPolyline(String),
    #[error("expansion factor must be finite and > 1, got {0}")]
    BadLambda(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("root not bracketed on ({lo}, {hi}) while solving {what}")]
    RootNotBracketed {
        what: &'static str,
        lo: f64,
        hi: f64,
    },
    #[error("polylines do not intersect for model point {0}")]
    NoIntersection(Point),
    #[error("system has no chart to the linear model")]
    MissingChart,
    #[error("system has no inverse map")]
    MissingInverse,
    #[error("level-set radius must be > 0, got {0}")]
    InvalidRadius(f64),
    #[error("bisection failed: {0}")]
    BisectionFailure(String),
    #[error("radius ladder is empty")]
    EmptyRadii,
    #[error("delta must be finite and > 0, got {0}")]
    BadDelta(f64),
    #[error("bad comparability request: {0}")]
    BadK(String),
    #[error("points are identical")]
    IdenticalPoints,
    #[error("no witness found with |n| <= {n_max}")]
    NotFound { n_max: u32 },
    #[error("all sampled values fall inside the deadband")]
    Degenerate,
    #[error("k must be > 0, got {0}")]
    NonPositiveK(f64),
    #[error("point {point} is not on the {axis} curve of the fixed point")]
    NotOnAxis { point: Point, axis: &'static str },
    #[error("charts target different linear models (lambda {a} vs {b})")]
    ChartMismatch { a: f64, b: f64 },
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("validation failed: {}", .0.join("; "))]
    ValidationFailure(Vec<String>),
}

fn step_suffix(step: Option<i64>) -> String {
    match step {
        Some(n) => format!(" at n = {n}"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn out_of(point: Point, region: impl ToString) -> Self {
        Error::OutOfDomain {
            point,
            region: region.to_string(),
            step: None,
        }
    }

    /// Attach an orbit index to a domain violation; other errors pass through.
    pub(crate) fn at_step(self, n: i64) -> Self {
        match self {
            Error::OutOfDomain { point, region, .. } => Error::OutOfDomain {
                point,
                region,
                step: Some(n),
            },
            other => other,
        }
    }
}
