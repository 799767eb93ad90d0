use serde::Serialize;

use crate::dynamics::{Direction, PlanarSystem};
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::tolerances::{CONFIRM_DEPTH, ESCAPE_STEP_CAP, MEMBERSHIP_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum SetVerdict {
    Member,
    Escapes {
        witness_n: i64,
    },
    Undecided {
        n: i64,
        #[serde(rename = "U")]
        u: f64,
        #[serde(rename = "V")]
        v: f64,
    },
}

impl SetVerdict {
    pub fn is_member(&self) -> bool {
        matches!(self, SetVerdict::Member)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MembershipPlan {
    pub k: f64,
    pub dir: Direction,
    pub horizon: u32,
    /// Deadband on `V`.
    pub tol: f64,
    /// Consecutive `V < -tol` steps needed before `Member`.
    pub confirm_depth: usize,
}

impl MembershipPlan {
    pub fn new(k: f64, dir: Direction) -> Self {
        MembershipPlan {
            k,
            dir,
            horizon: 64,
            tol: MEMBERSHIP_TOL,
            confirm_depth: CONFIRM_DEPTH,
        }
    }

    pub fn horizon(mut self, horizon: u32) -> Self {
        self.horizon = horizon;
        self
    }
}

/// Decides whether `y` stays within `U`-distance `k` of `x` along the forward
/// (stable) or backward (unstable) orbit.
///
/// `Escapes(n)` is returned at the first `n` with `U_n > k`. Once `V` turns
/// positive the sequence is increasing, so iteration continues past the
/// horizon until it exceeds `k`. `Member` needs the whole horizon without a
/// positive `V` and at least `confirm_depth` consecutive negative steps.
pub fn membership(
    sys: &PlanarSystem,
    x: Point,
    y: Point,
    plan: &MembershipPlan,
) -> Result<SetVerdict> {
    let k = plan.k;
    if !(k.is_finite() && k > 0.0) {
        return Err(Error::NonPositiveK(k));
    }
    let sign = match plan.dir {
        Direction::Forward => 1,
        Direction::Inverse => -1,
    };
    let step = |p: Point, n: i64| -> Result<Point> {
        match plan.dir {
            Direction::Forward => sys.forward(p),
            Direction::Inverse => sys.inverse(p),
        }
        .map_err(|e| e.at_step(sign * n))
    };

    let u0 = sys.u(x, y)?;
    if u0 > k {
        return Ok(SetVerdict::Escapes { witness_n: 0 });
    }
    if u0 == 0.0 {
        return Ok(SetVerdict::Member);
    }
    let (mut a, mut b) = (x, y);
    let mut u_prev = u0;
    let mut v = 0.0;
    let (mut run, mut best_run) = (0usize, 0usize);
    let mut n: i64 = 0;
    while n < plan.horizon as i64 {
        n += 1;
        a = step(a, n)?;
        b = step(b, n)?;
        let u = sys.u(a, b)?;
        if u > k {
            return Ok(SetVerdict::Escapes {
                witness_n: sign * n,
            });
        }
        v = u - u_prev;
        u_prev = u;
        if v > plan.tol {
            let cap = n + ESCAPE_STEP_CAP as i64;
            while n < cap {
                n += 1;
                a = step(a, n)?;
                b = step(b, n)?;
                let u = sys.u(a, b)?;
                if u > k {
                    return Ok(SetVerdict::Escapes {
                        witness_n: sign * n,
                    });
                }
                v = u - u_prev;
                u_prev = u;
            }
            return Ok(SetVerdict::Undecided {
                n: sign * n,
                u: u_prev,
                v,
            });
        }
        if v < -plan.tol {
            run += 1;
            best_run = best_run.max(run);
        } else {
            run = 0;
        }
    }
    if best_run >= plan.confirm_depth {
        Ok(SetVerdict::Member)
    } else {
        Ok(SetVerdict::Undecided {
            n: sign * n,
            u: u_prev,
            v,
        })
    }
}
