use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{orbit, PlanarSystem};
use crate::error::Result;
use crate::geom::Point;
use crate::tolerances::CONVEXITY_TOL;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityViolation {
    pub pair: usize,
    pub n: i64,
    /// `U_n, U_{n+1}, U_{n+2}`.
    pub values: [f64; 3],
}

/// Every `(pair, n)` with `n` in `0..=N` where `n -> U(fⁿx, fⁿy)` has a
/// strict local maximum at `n + 1`.
pub fn convexity_scan(
    sys: &PlanarSystem,
    pairs: &[(Point, Point)],
    n: u32,
) -> Result<Vec<ConvexityViolation>> {
    let per_pair = pairs
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| -> Result<Vec<ConvexityViolation>> {
            let n = n as i64;
            let ox = orbit(sys.map.as_ref(), x, 0, n + 2)?;
            let oy = orbit(sys.map.as_ref(), y, 0, n + 2)?;
            let u = ox
                .iter()
                .zip(&oy)
                .map(|(&a, &b)| sys.u(a, b))
                .collect::<Result<Vec<f64>>>()?;
            Ok(u.windows(3)
                .enumerate()
                .filter(|(_, w)| w[1] > w[0] + CONVEXITY_TOL && w[1] > w[2] + CONVEXITY_TOL)
                .map(|(j, w)| ConvexityViolation {
                    pair: i,
                    n: j as i64,
                    values: [w[0], w[1], w[2]],
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_pair.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::linear_system;

    #[test]
    fn linear_has_no_local_maxima() {
        let sys = linear_system(2.0).unwrap();
        let pairs = [
            (Point::ORIGIN, Point::new(1.0, 1.0)),
            (Point::new(-3.0, 2.0), Point::new(0.5, -7.0)),
        ];
        assert!(convexity_scan(&sys, &pairs, 50).unwrap().is_empty());
    }
}
