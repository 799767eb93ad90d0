//! Shared inputs for the benchmarks.

use explab::sampling::omega_grid;
use explab::Point;

/// `n * n` points in the open first quadrant, evenly spaced on `(0, span]`.
pub fn quadrant_grid(n: usize, span: f64) -> Vec<Point> {
    let step = span / n as f64;
    (1..=n)
        .flat_map(|i| (1..=n).map(move |j| Point::new(i as f64 * step, j as f64 * step)))
        .collect()
}

/// Model-coordinate grid used by the chart round trips.
pub fn model_grid(n: usize) -> Vec<Point> {
    omega_grid(n, 3.0, 0.95)
}

/// Pairs `(p, q)` with `q` a fixed offset from `p`.
pub fn pairs(points: &[Point], offset: Point) -> Vec<(Point, Point)> {
    points
        .iter()
        .map(|&p| (p, Point::new(p.x + offset.x, p.y + offset.y)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids_have_the_requested_size() {
        let g = quadrant_grid(4, 2.0);
        assert_eq!(g.len(), 16);
        assert!(g
            .iter()
            .all(|p| p.x > 0.0 && p.y > 0.0 && p.x <= 2.0 && p.y <= 2.0));
        assert_eq!(pairs(&g, Point::new(0.5, 0.0))[3].1.x, g[3].x + 0.5);
    }
}
