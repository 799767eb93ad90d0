//! Seeded sampling and deterministic grids.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{PlanarSystem, Region};
use crate::error::{Error, Result};
use crate::geom::Point;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Axis-aligned rectangle `[xmin, xmax] x [ymin, ymax]`.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Rect {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Rect {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let all_finite = [xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite());
        if !all_finite || xmin > xmax || ymin > ymax {
            return Err(Error::BadParameter(format!(
                "bad rectangle [{xmin}, {xmax}] x [{ymin}, {ymax}]"
            )));
        }
        Ok(Rect {
            xmin,
            xmax,
            ymin,
            ymax,
        })
    }

    pub fn square(half: f64) -> Self {
        Rect {
            xmin: -half,
            xmax: half,
            ymin: -half,
            ymax: half,
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Point {
        Point::new(
            self.xmin + (self.xmax - self.xmin) * rng.gen::<f64>(),
            self.ymin + (self.ymax - self.ymin) * rng.gen::<f64>(),
        )
    }

    /// Nodes `xmin + i step`, `ymin + j step` up to the far edges.
    pub fn grid(&self, step: f64) -> Result<Vec<Point>> {
        if !(step.is_finite() && step > 0.0) {
            return Err(Error::BadParameter(format!("grid step {step}")));
        }
        let nx = ((self.xmax - self.xmin) / step + 1e-9).floor() as usize;
        let ny = ((self.ymax - self.ymin) / step + 1e-9).floor() as usize;
        let mut out = Vec::with_capacity((nx + 1) * (ny + 1));
        for i in 0..=nx {
            for j in 0..=ny {
                out.push(Point::new(
                    self.xmin + i as f64 * step,
                    self.ymin + j as f64 * step,
                ));
            }
        }
        Ok(out)
    }
}

/// `n x n` grid of Ω points: `x` in `(0, xmax]`, `y = c / x` with `c` in
/// `[0, cmax]`, so `xy = c` never reaches 1.
pub fn omega_grid(n: usize, xmax: f64, cmax: f64) -> Vec<Point> {
    let mut out = Vec::with_capacity(n * n);
    for i in 1..=n {
        let x = xmax * i as f64 / n as f64;
        for j in 0..n {
            let c = if n > 1 {
                cmax * j as f64 / (n - 1) as f64
            } else {
                0.0
            };
            out.push(Point::new(x, c / x));
        }
    }
    out
}

/// Sampling window of half-width `scale` adapted to the system's domain.
pub fn window(domain: Region, scale: f64) -> Rect {
    if domain.is_first_quadrant() {
        Rect::new(0.0, scale, 0.0, scale).expect("finite scale")
    } else {
        Rect::square(scale)
    }
}

/// Uniform point in the window that lies where the system can be iterated.
///
/// Charted systems are sampled through the chart so the point is always in
/// the chart's image; rejection is used for the rest.
pub fn domain_point(sys: &PlanarSystem, rng: &mut impl Rng, scale: f64) -> Result<Point> {
    let domain = sys.domain();
    let win = window(domain, scale);
    for _ in 0..10_000 {
        let p = win.sample(rng);
        let ok = match &sys.model {
            Some(m) => m.chart.to_model(p).is_ok(),
            None => domain.contains(p) && sys.forward(p).is_ok(),
        };
        if ok {
            return Ok(p);
        }
    }
    Err(Error::BadParameter(format!(
        "could not sample a point of {} in a window of scale {scale}",
        sys.name
    )))
}

/// Uniform direction angle.
pub fn angle(rng: &mut impl Rng) -> f64 {
    std::f64::consts::TAU * rng.gen::<f64>()
}
