//! Front end for the `explab` binary: argument parsing, config loading and
//! report emission.

pub mod args;
pub mod emit;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use explab::analysis::{
    comparability_check, expansive_witness, ha_check, hl_estimate, hp_estimate, sector_count,
    sign_condition_check, ComparabilityPlan, HlPlan, HpPlan,
};
use explab::dsl::{compile_system, eval, parse};
use explab::invariant_sets::{
    build_conjugacy, component_grid, curve_intersection, trace_curve, MembershipPlan,
};
use explab::sampling::{domain_point, omega_grid, rng};
use explab::{
    make_system, orbit, ConditionReport, CurveKind, Direction, Error, PlanarSystem, Point, Rect,
    SystemSpec,
};
use serde::Deserialize;
use serde_json::{json, Map, Value};

use args::{CheckCommand, Cli, Command, Family, GalleryAction, Outputs, SystemArgs};
use emit::{Cell, Csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Runtime(Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        use Error::*;
        match e {
            Parse(_)
            | ValidationFailure(_)
            | BadLambda(_)
            | BadParameter(_)
            | InvalidRadius(_)
            | BadDelta(_)
            | BadK(_)
            | NonPositiveK(_)
            | EmptyRadii
            | IdenticalPoints
            | ChartMismatch { .. }
            | MissingChart
            | MissingInverse
            | MalformedPolyline(_) => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

/// Contents of a `--config` file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub system: SystemSpec,
}

pub fn read_config(path: &Path) -> CliResult<Config> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Runs the tool with `argv` (without the program name) on the process's
/// standard streams and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let full = std::iter::once(OsString::from("explab")).chain(argv.into_iter().map(Into::into));
    let cli = match Cli::try_parse_from(full) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                2
            } else {
                let _ = write!(out, "{text}");
                0
            };
        }
    };
    let mut ctx = Ctx {
        seed: cli.seed.unwrap_or(0),
        out,
    };
    match ctx.dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

struct Ctx<'a> {
    seed: u64,
    out: &'a mut dyn Write,
}

struct Loaded {
    spec: SystemSpec,
    sys: PlanarSystem,
}

fn load(args: &SystemArgs) -> CliResult<Loaded> {
    let spec = match (&args.system, &args.config) {
        (Some(s), _) => s.clone(),
        (None, Some(path)) => read_config(path)?.system,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --system or --config is required".into(),
            ))
        }
    };
    let sys = make_system(&spec)?;
    Ok(Loaded { spec, sys })
}

fn kind(f: Family) -> CurveKind {
    match f {
        Family::Stable => CurveKind::Stable,
        Family::Unstable => CurveKind::Unstable,
    }
}

impl Ctx<'_> {
    fn print(&mut self, text: &str) -> CliResult<()> {
        self.out
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: PathBuf::from("<stdout>"),
                source,
            })
    }

    fn line(&mut self, text: &str) -> CliResult<()> {
        self.print(&format!("{text}\n"))
    }

    /// Writes to `path`, or to stdout when no path is given.
    fn deliver(&mut self, path: Option<&Path>, text: &str) -> CliResult<()> {
        match path {
            Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            }),
            None => self.print(text),
        }
    }

    fn run_params(&self, spec: &SystemSpec) -> Map<String, Value> {
        let mut m = Map::new();
        m.insert("seed".into(), json!(self.seed));
        m.insert(
            "system_spec".into(),
            serde_json::to_value(spec).expect("specs serialize"),
        );
        m
    }

    fn dispatch(&mut self, cmd: Command) -> CliResult<()> {
        match cmd {
            Command::Gallery {
                action: GalleryAction::List,
            } => {
                for spec in SystemSpec::builtins() {
                    let j = serde_json::to_string(&spec).expect("specs serialize");
                    self.line(&format!("{spec}\t{j}"))?;
                }
                Ok(())
            }
            Command::Orbit(a) => {
                let l = load(&a.sys)?;
                let pts = orbit(l.sys.map.as_ref(), a.point, a.from, a.to)?;
                let mut csv = Csv::new(&["n", "x", "y"]);
                for (i, p) in pts.iter().enumerate() {
                    csv.row(&[Cell::I(a.from + i as i64), Cell::F(p.x), Cell::F(p.y)]);
                }
                self.deliver(a.out.as_deref(), &csv.into_string())
            }
            Command::Check { condition } => self.check(condition),
            Command::Witness(a) => {
                let l = load(&a.sys)?;
                let w = expansive_witness(&l.sys, a.x, a.y, a.k, a.n_max)?;
                let mut csv = Csv::new(&["n", "value", "guarantee_bound"]);
                csv.row(&[
                    Cell::I(w.n),
                    Cell::F(w.value),
                    w.guarantee_bound.map_or(Cell::Empty, Cell::I),
                ]);
                self.deliver(a.out.as_deref(), &csv.into_string())
            }
            Command::StableSet(a) => {
                let l = load(&a.sys)?;
                let dir = match a.family {
                    Family::Stable => Direction::Forward,
                    Family::Unstable => Direction::Inverse,
                };
                let plan = MembershipPlan::new(a.k, dir).horizon(a.horizon);
                let g = component_grid(&l.sys, a.point, a.window, a.resolution, &plan)?;
                if let Some(p) = &a.svg {
                    self.deliver(Some(p), &emit::svg_grid(&g))?;
                }
                if a.out.is_some() || a.svg.is_none() {
                    self.deliver(a.out.as_deref(), &emit::grid_csv(&g))?;
                }
                use explab::GridLabel::*;
                let summary = format!(
                    "{}-set {}: {} in component, {} other members, {} escape, {} undecided, {} out of domain",
                    if a.family == Family::Stable { "stable" } else { "unstable" },
                    l.sys.name,
                    g.count(MemberInComponent),
                    g.count(MemberOffComponent),
                    g.count(Escapes),
                    g.count(Undecided),
                    g.count(OutOfDomain)
                );
                if a.out.is_some() || a.svg.is_some() {
                    self.line(&summary)?;
                }
                Ok(())
            }
            Command::Curve(a) => {
                let l = load(&a.sys)?;
                let span = match a.span.as_deref() {
                    None => None,
                    Some([lo, hi]) => Some((*lo, *hi)),
                    Some(_) => return Err(CliError::Usage("--span takes lo,hi".into())),
                };
                let c = trace_curve(&l.sys, a.point, kind(a.family), span, a.samples)?;
                if let Some(p) = &a.svg {
                    let view = a.view.unwrap_or_else(|| default_view(a.point, &c.vertices));
                    self.deliver(Some(p), &emit::svg_curves(view, &[("curve", &c.vertices)]))?;
                }
                if a.out.is_some() || a.svg.is_none() {
                    self.deliver(a.out.as_deref(), &emit::points_csv(["x", "y"], &c.vertices))?;
                }
                Ok(())
            }
            Command::Intersect(a) => {
                let l = load(&a.sys)?;
                let hit = curve_intersection(&l.sys, a.a, a.b)?;
                let pts: Vec<Point> = hit.into_iter().collect();
                self.deliver(a.out.as_deref(), &emit::points_csv(["x", "y"], &pts))?;
                if a.out.is_some() {
                    match hit {
                        Some(p) => self.line(&format!("intersection at {p}"))?,
                        None => self.line("no intersection")?,
                    }
                }
                Ok(())
            }
            Command::Conjugacy(a) => self.conjugacy(a),
            Command::Sectors(a) => {
                let l = load(&a.sys)?;
                let mut points = a.point.clone();
                let mut r = rng(self.seed);
                for _ in 0..a.random {
                    points.push(domain_point(&l.sys, &mut r, 3.0)?);
                }
                if points.is_empty() {
                    return Err(CliError::Usage("give --point or --random".into()));
                }
                let mut csv = Csv::new(&["x", "y", "count"]);
                for p in points {
                    let count = match sector_count(&l.sys, p, a.r, a.samples) {
                        Ok(c) => Cell::I(c as i64),
                        Err(Error::Degenerate) => Cell::S("degenerate".into()),
                        Err(e) => return Err(e.into()),
                    };
                    csv.row(&[Cell::F(p.x), Cell::F(p.y), count]);
                }
                self.deliver(a.out.as_deref(), &csv.into_string())
            }
            Command::EvalDsl(a) => self.eval_dsl(a),
        }
    }

    fn emit_report(
        &mut self,
        spec: &SystemSpec,
        report: &ConditionReport,
        out: &Outputs,
        integer_columns: &[&str],
    ) -> CliResult<()> {
        let extra = self.run_params(spec);
        if let Some(p) = &out.out {
            self.deliver(Some(p), &emit::table_csv(&report.samples, integer_columns))?;
        }
        let j = emit::json_text(&emit::report_json(report, &extra));
        if out.json.is_some() || out.out.is_none() {
            self.deliver(out.json.as_deref(), &j)?;
        }
        Ok(())
    }

    fn summary(
        &mut self,
        report: &ConditionReport,
        sys: &PlanarSystem,
        detail: &str,
    ) -> CliResult<()> {
        let id = serde_json::to_value(report.condition_id).expect("ids serialize");
        self.line(&format!(
            "{} {}: {}{}",
            id.as_str().unwrap_or("?"),
            sys.name,
            report.verdict.as_str(),
            detail
        ))
    }

    fn check(&mut self, c: CheckCommand) -> CliResult<()> {
        match c {
            CheckCommand::Signs {
                sys,
                point,
                k,
                dirs,
                out,
            } => {
                let l = load(&sys)?;
                let r = sign_condition_check(&l.sys, point, k, dirs)?;
                self.emit_report(&l.spec, &r, &out, &[])?;
                self.summary(&r, &l.sys, "")
            }
            CheckCommand::Hp {
                sys,
                rect,
                step,
                radii,
                dirs,
                tolerance,
                fail_floor,
                out,
            } => {
                let l = load(&sys)?;
                let mut plan = HpPlan::new(rect, step, radii);
                plan.n_dirs = dirs;
                if let Some(t) = tolerance {
                    plan.tolerance = t;
                }
                if let Some(f) = fail_floor {
                    plan.fail_floor = f;
                }
                let r = hp_estimate(&l.sys, &plan)?;
                self.emit_report(&l.spec, &r, &out, &[])?;
                let last = r.samples.rows.last().map_or(f64::NAN, |row| row[1]);
                self.summary(&r, &l.sys, &format!(" (final ratio {last:.3e})"))
            }
            CheckCommand::Hl { sys, deltas, out } => {
                let l = load(&sys)?;
                let report = hl_estimate(&l.sys, &HlPlan::new(deltas, self.seed))?;
                let extra = self.run_params(&l.spec);
                if let Some(p) = &out.out {
                    self.deliver(Some(p), &emit::table_csv(&report.combined(), &[]))?;
                }
                if out.json.is_some() || out.out.is_none() {
                    let both = json!([
                        emit::report_json(&report.v, &extra),
                        emit::report_json(&report.w, &extra)
                    ]);
                    self.deliver(out.json.as_deref(), &emit::json_text(&both))?;
                }
                self.line(&format!(
                    "HL {}: {} (HL-V {}, HL-W {})",
                    l.sys.name,
                    report.verdict().as_str(),
                    report.v.verdict.as_str(),
                    report.w.verdict.as_str()
                ))
            }
            CheckCommand::Ha {
                sys,
                point,
                n,
                threshold,
                out,
            } => {
                let l = load(&sys)?;
                let r = ha_check(&l.sys, point, n, threshold)?;
                self.emit_report(&l.spec, &r, &out, &["n"])?;
                let flag = |k: &str| {
                    r.parameters
                        .get(k)
                        .and_then(Value::as_bool)
                        .unwrap_or(false)
                };
                let detail = format!(
                    " (forward {}, backward {})",
                    if flag("forward_exceeds") {
                        "diverges"
                    } else {
                        "does not diverge"
                    },
                    if flag("backward_exceeds") {
                        "diverges"
                    } else {
                        "does not diverge"
                    }
                );
                self.summary(&r, &l.sys, &detail)
            }
            CheckCommand::Comparability {
                sys,
                ks,
                samples,
                out,
            } => {
                let l = load(&sys)?;
                let r =
                    comparability_check(&l.sys, &ComparabilityPlan::new(ks, samples, self.seed))?;
                self.emit_report(&l.spec, &r, &out, &["skipped"])?;
                self.summary(&r, &l.sys, "")
            }
        }
    }

    fn conjugacy(&mut self, a: args::ConjugacyArgs) -> CliResult<()> {
        let from = make_system(&a.from)?;
        let to = make_system(&a.to)?;
        let chart = from.chart()?.clone();
        let grid: Vec<Point> = omega_grid(a.grid, a.xmax, a.cmax)
            .into_iter()
            .filter_map(|m| chart.from_model(m).ok())
            .collect();
        let h = build_conjugacy(&from, &to, &grid)?;
        if let Some(p) = &a.out {
            let mut csv = Csv::new(&["x", "y", "hx", "hy"]);
            for &q in &grid {
                if let Ok(hq) = h.forward(q) {
                    csv.row(&[Cell::F(q.x), Cell::F(q.y), Cell::F(hq.x), Cell::F(hq.y)]);
                }
            }
            self.deliver(Some(p), &csv.into_string())?;
        }
        let s = h.residual_stats;
        let report = json!({
            "from": a.from,
            "to": a.to,
            "parameters": {"grid": a.grid, "xmax": a.xmax, "cmax": a.cmax, "seed": self.seed},
            "residual": s,
        });
        if a.json.is_some() || a.out.is_none() {
            self.deliver(a.json.as_deref(), &emit::json_text(&report))?;
        }
        self.line(&format!(
            "conjugacy {} -> {}: max residual {:.3e}, round trip {:.3e}, {} verified, {} unverifiable",
            from.name, to.name, s.max, s.roundtrip_max, s.verified, s.unverifiable
        ))
    }

    fn eval_dsl(&mut self, a: args::EvalDslArgs) -> CliResult<()> {
        if let Some(src) = &a.expr {
            let e = parse(src).map_err(|e| CliError::Usage(e.to_string()))?;
            let env: BTreeMap<String, f64> = a.vars.iter().cloned().collect();
            let v = eval(&e, &env).map_err(|e| CliError::Runtime(Error::Eval(e)))?;
            self.line(&e.to_string())?;
            return self.line(&emit::float(v));
        }
        let Some(path) = &a.config else {
            return Err(CliError::Usage("give --expr or --config".into()));
        };
        let cfg = match read_config(path)?.system {
            SystemSpec::Dsl(cfg) => cfg,
            other => {
                return Err(CliError::Usage(format!(
                    "{other} is not a user-defined system"
                )))
            }
        };
        let sys = compile_system(&cfg)?;
        for f in &sys.findings {
            self.line(&format!("finding: {f}"))?;
        }
        if let Some(p) = a.point {
            let mut csv = Csv::new(&["direction", "x", "y"]);
            let fwd = sys.forward(p)?;
            csv.row(&[Cell::S("forward".into()), Cell::F(fwd.x), Cell::F(fwd.y)]);
            match sys.inverse(p) {
                Ok(q) => csv.row(&[Cell::S("inverse".into()), Cell::F(q.x), Cell::F(q.y)]),
                Err(Error::MissingInverse) => {}
                Err(e) => return Err(e.into()),
            }
            self.print(&csv.into_string())?;
        } else {
            self.line("ok")?;
        }
        Ok(())
    }
}

/// Bounding box of `pts` clipped to a box of half-width 5 around `p`.
fn default_view(p: Point, pts: &[Point]) -> Rect {
    let clip = Rect::square(5.0);
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (p.x, p.x, p.y, p.y);
    for q in pts {
        xmin = xmin.min(q.x.max(p.x + clip.xmin));
        xmax = xmax.max(q.x.min(p.x + clip.xmax));
        ymin = ymin.min(q.y.max(p.y + clip.ymin));
        ymax = ymax.max(q.y.min(p.y + clip.ymax));
    }
    let pad = 0.05 * (xmax - xmin).max(ymax - ymin).max(1e-3);
    Rect {
        xmin: xmin - pad,
        xmax: xmax + pad,
        ymin: ymin - pad,
        ymax: ymax + pad,
    }
}
