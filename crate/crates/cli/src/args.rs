use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use explab::{Point, Rect, SystemSpec};

#[derive(Debug, Parser)]
#[command(
    name = "explab",
    version,
    about = "Lyapunov-metric experiments on expansive plane maps"
)]
pub struct Cli {
    /// Seed for every randomized sampler.
    #[arg(long, global = true, env = "EXPLAB_SEED")]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

/// Where the system comes from: a built-in name or a JSON config file.
#[derive(Debug, Clone, Args)]
pub struct SystemArgs {
    /// linear:<lambda>, example1, example2 or composite.
    #[arg(long, value_parser = parse_system, conflicts_with = "config")]
    pub system: Option<SystemSpec>,

    /// JSON file of the form {"system": {...}}.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Built-in systems.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Orbit segment as CSV `n,x,y`.
    Orbit(OrbitArgs),
    /// Condition checkers.
    Check {
        #[command(subcommand)]
        condition: CheckCommand,
    },
    /// First iterate separating two points by more than k.
    Witness(WitnessArgs),
    /// Grid classification of a k-stable or k-unstable set.
    StableSet(StableSetArgs),
    /// Stable or unstable curve through a point.
    Curve(CurveArgs),
    /// Meeting point of a stable curve and an unstable curve.
    Intersect(IntersectArgs),
    /// Composed chart between two charted systems and its residual.
    Conjugacy(ConjugacyArgs),
    /// Sign blocks of V on a small circle.
    Sectors(SectorsArgs),
    /// Evaluate an expression or a user-defined system.
    EvalDsl(EvalDslArgs),
}

#[derive(Debug, Subcommand)]
pub enum GalleryAction {
    List,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Point,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub from: i64,
    #[arg(long, default_value_t = 10, allow_hyphen_values = true)]
    pub to: i64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Outputs {
    /// CSV table.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON report.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum CheckCommand {
    /// Both signs of V on a level set of U.
    Signs {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, default_value_t = 1.0)]
        k: f64,
        #[arg(long, default_value_t = 16)]
        dirs: usize,
        #[command(flatten)]
        out: Outputs,
    },
    /// Decay of |V(x,y) - V(x,z)| / W(x,y) as |x| grows.
    Hp {
        #[command(flatten)]
        sys: SystemArgs,
        /// xmin,xmax,ymin,ymax of the compact set.
        #[arg(long, value_parser = parse_rect, default_value = "0,1,0,1", allow_hyphen_values = true)]
        rect: Rect,
        #[arg(long, default_value_t = 0.25)]
        step: f64,
        #[arg(long, value_delimiter = ',', default_value = "10,100,1000,10000")]
        radii: Vec<f64>,
        #[arg(long, default_value_t = 16)]
        dirs: usize,
        #[arg(long)]
        tolerance: Option<f64>,
        #[arg(long)]
        fail_floor: Option<f64>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Modulus of V and lower bound of W off the diagonal.
    Hl {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.1,1,10")]
        deltas: Vec<f64>,
        #[command(flatten)]
        out: Outputs,
    },
    /// Growth of U(fⁿx, fⁿ⁺¹x) in both time directions.
    Ha {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        point: Point,
        #[arg(long, default_value_t = 12)]
        n: u32,
        #[arg(long, default_value_t = 1000.0)]
        threshold: f64,
        #[command(flatten)]
        out: Outputs,
    },
    /// Euclidean size of U-balls across windows.
    Comparability {
        #[command(flatten)]
        sys: SystemArgs,
        #[arg(long, value_delimiter = ',', default_value = "0.1,1")]
        ks: Vec<f64>,
        #[arg(long, default_value_t = 256)]
        samples: usize,
        #[command(flatten)]
        out: Outputs,
    },
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub x: Point,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub y: Point,
    #[arg(long)]
    pub k: f64,
    #[arg(long, default_value_t = 200)]
    pub n_max: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Stable,
    Unstable,
}

#[derive(Debug, Args)]
pub struct StableSetArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Point,
    #[arg(long)]
    pub k: f64,
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    pub window: Rect,
    #[arg(long, default_value_t = 0.02)]
    pub resolution: f64,
    #[arg(long, value_enum, default_value_t = Family::Stable)]
    pub family: Family,
    #[arg(long, default_value_t = 64)]
    pub horizon: u32,
    /// CSV `ix,iy,x,y,label`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Point,
    #[arg(long, value_enum, default_value_t = Family::Stable)]
    pub family: Family,
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// Range of the free model coordinate, as lo,hi.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub span: Option<Vec<f64>>,
    /// CSV `x,y`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// SVG view as xmin,xmax,ymin,ymax.
    #[arg(long, value_parser = parse_rect, allow_hyphen_values = true)]
    pub view: Option<Rect>,
}

#[derive(Debug, Args)]
pub struct IntersectArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Point on the fixed point's unstable curve; its stable curve is used.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub a: Point,
    /// Point on the fixed point's stable curve; its unstable curve is used.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub b: Point,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConjugacyArgs {
    #[arg(long, value_parser = parse_system)]
    pub from: SystemSpec,
    #[arg(long, value_parser = parse_system)]
    pub to: SystemSpec,
    /// Grid points per side; the grid is the source chart's image of an Ω grid.
    #[arg(long, default_value_t = 50)]
    pub grid: usize,
    #[arg(long, default_value_t = 3.0)]
    pub xmax: f64,
    #[arg(long, default_value_t = 0.95)]
    pub cmax: f64,
    /// JSON summary.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// CSV `x,y,hx,hy` of the composed chart on the grid.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SectorsArgs {
    #[command(flatten)]
    pub sys: SystemArgs,
    /// Base point; repeat for several.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Vec<Point>,
    /// Number of additional random base points drawn with the seed.
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub r: f64,
    #[arg(long, default_value_t = 360)]
    pub samples: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalDslArgs {
    /// Expression to parse and evaluate.
    #[arg(long, conflicts_with = "config")]
    pub expr: Option<String>,
    /// Variable binding name=value; repeatable.
    #[arg(long = "var", value_parser = parse_binding, allow_hyphen_values = true)]
    pub vars: Vec<(String, f64)>,
    /// Config with a user-defined system to validate and evaluate.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Point at which to evaluate the configured map.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub point: Option<Point>,
}

fn parse_system(s: &str) -> Result<SystemSpec, String> {
    s.parse().map_err(|e: explab::Error| e.to_string())
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(format!("{t:?} is not a finite number")),
            }
        })
        .collect()
}

fn parse_point(s: &str) -> Result<Point, String> {
    match parse_list(s)?.as_slice() {
        [x, y] => Ok(Point::new(*x, *y)),
        _ => Err(format!("expected x,y, got {s:?}")),
    }
}

fn parse_rect(s: &str) -> Result<Rect, String> {
    match parse_list(s)?.as_slice() {
        [a, b, c, d] => Rect::new(*a, *b, *c, *d).map_err(|e| e.to_string()),
        _ => Err(format!("expected xmin,xmax,ymin,ymax, got {s:?}")),
    }
}

fn parse_binding(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| format!("{value:?} is not a number"))?;
    Ok((name.trim().to_string(), v))
}
