//! Numeric thresholds shared across modules.
//!
//! Every constant here is a default; the operations that use them take the
//! value through a parameter record so reports can state what was used.

/// Relative sine threshold below which two polyline pieces count as parallel.
pub const PARALLEL_EPS: f64 = 1e-14;

/// Slack on piece parameters when accepting an intersection.
pub const PARAM_EPS: f64 = 1e-12;

/// Accuracy of the level-set bisection `U(x, x + t e) = k`.
pub const LEVEL_SET_TOL: f64 = 1e-10;

/// Values of `V` with magnitude at or below this are treated as having no sign.
pub const SIGN_DEADBAND: f64 = 1e-12;

/// Deadband on `V` used by stable-set membership.
pub const MEMBERSHIP_TOL: f64 = 1e-10;

/// Consecutive strictly negative first differences needed before a pair can be
/// declared a member.
pub const CONFIRM_DEPTH: usize = 5;

/// Cap on extra forward steps taken after `V` turned positive.
pub const ESCAPE_STEP_CAP: usize = 100_000;

/// Relative bisection tolerance on chart parameters and the break abscissa.
pub const CHART_BISECTION_TOL: f64 = 1e-12;

/// Fixed-point and inverse round-trip tolerance for user-defined systems.
pub const DSL_VALIDATION_TOL: f64 = 1e-9;

/// Relative slack allowed when checking a sequence is nonincreasing.
pub const MONOTONE_SLACK: f64 = 0.05;

/// Pairs with `W` at or below this are skipped by the HP ratio.
pub const HP_MIN_W: f64 = 1e-9;

/// Local-maximum tolerance for the orbit convexity scan.
pub const CONVEXITY_TOL: f64 = 1e-12;
