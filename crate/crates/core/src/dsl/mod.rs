//! A small expression language for user-defined maps and metrics.

mod ast;
mod eval;
mod lexer;
mod parser;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ast::{BinOp, CmpOp, Cond, Expr, Func};
pub use eval::{eval, Bindings, Scope};
pub use parser::{parse, MAX_EXPONENT};

use crate::dynamics::{PlanarMap, PlanarSystem, Region};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::lyapunov::{metric_axioms_check, AxiomKind, Metric};
use crate::tolerances::DSL_VALIDATION_TOL;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error{} at offset {offset}: expected {expected}", field_suffix(.field))]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
    /// Config field the text came from, when known.
    pub field: Option<String>,
}

fn field_suffix(field: &Option<String>) -> String {
    field
        .as_ref()
        .map(|f| format!(" in {f}"))
        .unwrap_or_default()
}

impl ParseError {
    pub fn new(offset: usize, expected: impl Into<String>) -> Self {
        ParseError {
            offset,
            expected: expected.into(),
            field: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvalErrorKind {
    DivisionByZero,
    LogNonpositive,
    SqrtNegative,
    UnboundVariable,
}

impl fmt::Display for EvalErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EvalErrorKind::DivisionByZero => "division-by-zero",
            EvalErrorKind::LogNonpositive => "log-nonpositive",
            EvalErrorKind::SqrtNegative => "sqrt-negative",
            EvalErrorKind::UnboundVariable => "unbound-variable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("evaluation error ({kind}): {detail}")]
pub struct EvalError {
    pub kind: EvalErrorKind,
    pub detail: String,
}

/// User system definition as it appears in a JSON config.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DslConfig {
    pub fx: String,
    pub fy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_fx: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inv_fy: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
    pub fixed_point: Point,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(default = "whole_plane")]
    pub domain: Region,
}

fn whole_plane() -> Region {
    Region::WholePlane
}

const MAP_VARS: [&str; 2] = ["x", "y"];
const METRIC_VARS: [&str; 4] = ["px", "py", "qx", "qy"];

fn parse_field(field: &str, src: &str) -> Result<Expr> {
    parse(src).map_err(|mut e| {
        e.field = Some(field.to_string());
        Error::Parse(e)
    })
}

fn free_variables(
    field: &str,
    e: &Expr,
    allowed: &[&str],
    constants: &BTreeMap<String, f64>,
    out: &mut Vec<String>,
) {
    for v in e.variables() {
        if !allowed.contains(&v.as_str()) && !constants.contains_key(&v) {
            out.push(format!("{field}: unknown variable {v:?}"));
        }
    }
}

pub struct DslMap {
    fx: Expr,
    fy: Expr,
    inverse: Option<(Expr, Expr)>,
    constants: BTreeMap<String, f64>,
    domain: Region,
}

impl DslMap {
    fn eval_pair(&self, a: &Expr, b: &Expr, p: Point) -> Result<Point> {
        self.domain.check(p)?;
        let locals = [("x", p.x), ("y", p.y)];
        let scope = Scope {
            locals: &locals,
            constants: &self.constants,
        };
        Point::new(eval(a, &scope)?, eval(b, &scope)?).finite("user map")
    }
}

impl PlanarMap for DslMap {
    fn forward(&self, p: Point) -> Result<Point> {
        self.eval_pair(&self.fx, &self.fy, p)
    }
    fn inverse(&self, p: Point) -> Result<Point> {
        let (a, b) = self.inverse.as_ref().ok_or(Error::MissingInverse)?;
        self.eval_pair(a, b, p)
    }
    fn domain(&self) -> Region {
        self.domain
    }
}

pub struct DslMetric {
    expr: Expr,
    constants: BTreeMap<String, f64>,
}

impl Metric for DslMetric {
    fn eval(&self, p: Point, q: Point) -> Result<f64> {
        let locals = [("px", p.x), ("py", p.y), ("qx", q.x), ("qy", q.y)];
        let scope = Scope {
            locals: &locals,
            constants: &self.constants,
        };
        let v = eval(&self.expr, &scope)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("user metric"))
        }
    }
}

/// `|Δx| + |Δy|`, used when a config gives no metric.
#[derive(Clone, Copy, Debug, Default)]
pub struct Taxicab;

impl Metric for Taxicab {
    fn eval(&self, p: Point, q: Point) -> Result<f64> {
        Ok((p.y - q.y).abs() + (p.x - q.x).abs())
    }
}

fn probe_points(center: Point, domain: Region) -> Vec<Point> {
    let steps = [-1.0, -0.5, -0.25, 0.0, 0.25, 0.5, 1.0];
    let mut out = Vec::new();
    for &dx in &steps {
        for &dy in &steps {
            let p = Point::new(center.x + dx, center.y + dy);
            if domain.contains(p) {
                out.push(p);
            }
        }
    }
    out
}

/// Parses, checks and assembles a user system.
///
/// Fixed-point, inverse round-trip, symmetry and identity problems are fatal;
/// triangle-inequality violations are attached to the system as findings.
pub fn compile_system(cfg: &DslConfig) -> Result<PlanarSystem> {
    let fx = parse_field("fx", &cfg.fx)?;
    let fy = parse_field("fy", &cfg.fy)?;
    let inverse = match (&cfg.inv_fx, &cfg.inv_fy) {
        (Some(a), Some(b)) => Some((parse_field("inv_fx", a)?, parse_field("inv_fy", b)?)),
        (None, None) => None,
        _ => {
            return Err(Error::ValidationFailure(vec![
                "inv_fx and inv_fy must be given together".into(),
            ]))
        }
    };
    let metric_expr = cfg
        .metric
        .as_deref()
        .map(|m| parse_field("metric", m))
        .transpose()?;

    let mut fatal = Vec::new();
    for name in cfg.constants.keys() {
        if MAP_VARS.contains(&name.as_str()) || METRIC_VARS.contains(&name.as_str()) {
            fatal.push(format!("constant {name:?} shadows a variable"));
        }
    }
    if let Some((name, _)) = cfg.constants.iter().find(|(_, v)| !v.is_finite()) {
        fatal.push(format!("constant {name:?} is not finite"));
    }
    free_variables("fx", &fx, &MAP_VARS, &cfg.constants, &mut fatal);
    free_variables("fy", &fy, &MAP_VARS, &cfg.constants, &mut fatal);
    if let Some((a, b)) = &inverse {
        free_variables("inv_fx", a, &MAP_VARS, &cfg.constants, &mut fatal);
        free_variables("inv_fy", b, &MAP_VARS, &cfg.constants, &mut fatal);
    }
    if let Some(m) = &metric_expr {
        free_variables("metric", m, &METRIC_VARS, &cfg.constants, &mut fatal);
    }
    if !fatal.is_empty() {
        return Err(Error::ValidationFailure(fatal));
    }

    let map = DslMap {
        fx,
        fy,
        inverse,
        constants: cfg.constants.clone(),
        domain: cfg.domain,
    };
    let mut findings = Vec::new();
    let fp = cfg.fixed_point;
    match map.forward(fp) {
        Ok(image) if image.dist(fp) <= DSL_VALIDATION_TOL => {}
        Ok(image) => fatal.push(format!("fixed point {fp} maps to {image}")),
        Err(e) => fatal.push(format!("fixed point {fp} cannot be evaluated: {e}")),
    }

    let probes = probe_points(fp, cfg.domain);
    if map.inverse.is_some() {
        for &p in &probes {
            let Ok(image) = map.forward(p) else {
                findings.push(format!("forward map undefined at probe {p}"));
                continue;
            };
            match map.inverse(image) {
                Ok(back) if back.dist(p) <= DSL_VALIDATION_TOL * (1.0 + p.norm()) => {}
                Ok(back) => fatal.push(format!("inverse(forward({p})) = {back}")),
                Err(e) => fatal.push(format!("inverse undefined at {image}: {e}")),
            }
        }
    }

    let metric: Arc<dyn Metric> = match metric_expr {
        Some(expr) => {
            let m = DslMetric {
                expr,
                constants: cfg.constants.clone(),
            };
            if probes.len() >= 3 {
                let report = metric_axioms_check(&m, &probes)?;
                for v in &report.violations {
                    let line = format!("metric {:?}: {}", v.kind, v.detail);
                    if v.kind == AxiomKind::Triangle {
                        findings.push(line);
                    } else {
                        fatal.push(line);
                    }
                }
            }
            Arc::new(m)
        }
        None => {
            findings.push("no metric given; using |dx| + |dy|".into());
            Arc::new(Taxicab)
        }
    };
    if !fatal.is_empty() {
        return Err(Error::ValidationFailure(fatal));
    }
    Ok(PlanarSystem {
        name: "dsl".into(),
        map: Arc::new(map),
        metric,
        fixed_point: fp,
        model: None,
        findings,
    })
}
