//! Reference values, each reproduced here by a computation that does not go
//! through the library's own chart or difference code.

use explab::analysis::{
    expansive_witness, ha_check, hl_estimate, hp_estimate, ray_directions, unit, HlPlan, HpPlan,
    Verdict,
};
use explab::gallery::{example1, example2, linear_system, CurveKind};
use explab::invariant_sets::{
    build_conjugacy, component_grid, curve_intersection, membership, GridLabel, MembershipPlan,
    SetVerdict,
};
use explab::sampling::{omega_grid, rng, Rect};
use explab::{Direction, Error, Point};
use rand::Rng;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

// Example 1 written out by hand in model coordinates.
fn e1_to_model(p: (f64, f64)) -> (f64, f64) {
    (p.0 / (1.0 + p.1), p.1 / (1.0 + p.0))
}

fn e1_from_model(m: (f64, f64)) -> (f64, f64) {
    let d = 1.0 - m.0 * m.1;
    (m.0 * (1.0 + m.1) / d, m.1 * (1.0 + m.0) / d)
}

/// `(V, W)` of the split metric for model points, written from the
/// definition `D(f a, f b) - D(a, b)` rather than the closed forms.
fn model_vw(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    let d = |p: (f64, f64), q: (f64, f64)| (p.0 - q.0).abs() + (p.1 - q.1).abs();
    let f = |p: (f64, f64)| (2.0 * p.0, p.1 / 2.0);
    let (u0, u1, u2) = (d(a, b), d(f(a), f(b)), d(f(f(a)), f(f(b))));
    (u1 - u0, u2 - 2.0 * u1 + u0)
}

fn brute_force_hp(
    x_dirs: &[f64],
    r: f64,
    grid: &[(f64, f64)],
    to_model: impl Fn((f64, f64)) -> (f64, f64),
) -> f64 {
    let mut best: f64 = 0.0;
    for &theta in x_dirs {
        let e = unit(theta);
        let xm = to_model((e.x * r, e.y * r));
        let vw: Vec<(f64, f64)> = grid.iter().map(|&y| model_vw(xm, to_model(y))).collect();
        for &(vy, wy) in &vw {
            if wy <= 1e-9 {
                continue;
            }
            for &(vz, _) in &vw {
                best = best.max((vy - vz).abs() / wy);
            }
        }
    }
    best
}

fn unit_grid() -> Vec<(f64, f64)> {
    (0..5)
        .flat_map(|i| (0..5).map(move |j| (i as f64 * 0.25, j as f64 * 0.25)))
        .collect()
}

#[test]
fn linear_hp_ratio_is_six_over_r() {
    // Maximized at x = (0, ±R), y = (0, 0): |V| spread 3/2 over W = R/4.
    let sys = linear_system(2.0).unwrap();
    let radii = vec![10.0, 100.0, 1000.0, 10000.0];
    let plan = HpPlan::new(Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), 0.25, radii.clone());
    let report = hp_estimate(&sys, &plan).unwrap();
    let ratios = report.column("ratio_max").unwrap();
    let fine: Vec<f64> = (0..720)
        .map(|i| std::f64::consts::TAU * i as f64 / 720.0)
        .collect();
    for (r, got) in radii.iter().zip(&ratios) {
        assert!(rel_close(*got, 6.0 / r, 1e-12), "R = {r}: {got}");
        let brute = brute_force_hp(&fine, *r, &unit_grid(), |p| p);
        assert!(
            rel_close(*got, brute, 1e-12),
            "R = {r}: {got} vs brute force {brute}"
        );
    }
    assert_eq!(report.verdict, Verdict::Inconclusive);
}

#[test]
fn example1_hp_ratio_stays_above_floor() {
    let sys = example1::system();
    let radii = vec![10.0, 100.0, 1000.0, 10000.0];
    let plan = HpPlan::new(Rect::new(0.0, 1.0, 0.0, 1.0).unwrap(), 0.25, radii.clone());
    let report = hp_estimate(&sys, &plan).unwrap();
    let ratios = report.column("ratio_max").unwrap();
    let dirs = ray_directions(sys.domain(), plan.n_dirs);
    for (r, got) in radii.iter().zip(&ratios) {
        let brute = brute_force_hp(&dirs, *r, &unit_grid(), e1_to_model);
        assert!(rel_close(*got, brute, 1e-9), "R = {r}: {got} vs {brute}");
        // Measured 5.68, 4.49, 4.28, 4.26.
        assert!(*got >= 1.0, "R = {r}: {got}");
    }
    assert_eq!(report.verdict, Verdict::FailsNumerically);
}

#[test]
fn hl_lower_bound_is_a_quarter_delta() {
    // In model coordinates W = |dx| + |dy|/4 >= U/4, so a(δ) >= δ/4 for both.
    let lin = hl_estimate(
        &linear_system(2.0).unwrap(),
        &HlPlan::new(vec![0.1, 1.0, 10.0], 0),
    )
    .unwrap();
    for row in &lin.combined().rows {
        let (delta, modulus, a) = (row[0], row[1], row[2]);
        assert!(
            (0.249..=0.251).contains(&(a / delta)),
            "δ = {delta}: a = {a}"
        );
        assert!(
            modulus <= delta * (1.0 + 1e-9),
            "δ = {delta}: modulus {modulus}"
        );
    }
    let e1 = hl_estimate(&example1::system(), &HlPlan::new(vec![0.1, 1.0], 0)).unwrap();
    for row in &e1.combined().rows {
        assert!(
            row[2] >= 0.25 * row[0] * (1.0 - 1e-6),
            "δ = {}: a = {}",
            row[0],
            row[2]
        );
    }
}

#[test]
fn example1_chart_round_trip_and_conjugacy() {
    let grid = omega_grid(100, 3.0, 0.95);
    let sys = example1::system();
    for &p in &grid {
        let q = example1::h(p).unwrap();
        let (rx, ry) = e1_from_model((p.x, p.y));
        assert!(rel_close(q.x, rx, 1e-14) && rel_close(q.y, ry, 1e-14));
        let back = example1::h_inv(q).unwrap();
        assert!(back.dist(p) <= 1e-12 * (1.0 + p.norm()), "{p}: {back}");
        let lhs = sys.forward(q).unwrap();
        let rhs = example1::h(Point::new(2.0 * p.x, p.y / 2.0)).unwrap();
        assert!(lhs.dist(rhs) <= 1e-9 * (1.0 + rhs.norm()), "{p}");
    }
}

#[test]
fn example1_ha_values_follow_closed_form() {
    // x = (1,1) has model point (1/2, 1/2): U(Fⁿx, Fⁿ⁺¹x) = 2^(n-1) + 2^(-n-2).
    let report = ha_check(&example1::system(), Point::new(1.0, 1.0), 12, 1e3).unwrap();
    for row in &report.samples.rows {
        let n = row[0] as i32;
        let expected = 2f64.powi(n - 1) + 2f64.powi(-n - 2);
        assert!(
            rel_close(row[1], expected, 1e-9),
            "n = {n}: {} vs {expected}",
            row[1]
        );
    }
    assert_eq!(report.verdict, Verdict::HoldsNumerically);
}

#[test]
fn example1_pullback_distance_matches_reference() {
    let sys = example1::system();
    let mut r = rng(11);
    for _ in 0..1000 {
        let p = (r.gen_range(0.0..5.0), r.gen_range(0.0..5.0));
        let q = (r.gen_range(0.0..5.0), r.gen_range(0.0..5.0));
        let (mp, mq) = (e1_to_model(p), e1_to_model(q));
        let expected = (mp.0 - mq.0).abs() + (mp.1 - mq.1).abs();
        let got = sys.u(Point::new(p.0, p.1), Point::new(q.0, q.1)).unwrap();
        assert!((got - expected).abs() <= 1e-12 * (1.0 + expected));
    }
}

#[test]
fn linear_witness_is_seven() {
    let sys = linear_system(2.0).unwrap();
    let w = expansive_witness(&sys, Point::ORIGIN, Point::new(1.0, 0.0), 100.0, 64).unwrap();
    // U_n = 2ⁿ, so the first n with 2ⁿ > 100 is 7; (100 - 1)/V with V = 1.
    assert_eq!(w.n, 7);
    assert_eq!(w.value, 128.0);
    assert_eq!(w.guarantee_bound, Some(99));
}

#[test]
fn unstable_break_small_case() {
    // g = 1 below 1/2, so 1/k0 - 1/k = 1 gives k0 = k/(k+1).
    for &k in &[0.01, 0.1, 0.25, 0.4, 0.5] {
        let k0 = example2::unstable_break(k, 1e-14).unwrap();
        assert!(rel_close(k0, k / (k + 1.0), 1e-12), "k = {k}: {k0}");
    }
}

#[test]
fn unstable_break_solves_its_equation() {
    for i in 1..400 {
        let k = i as f64 * 0.05;
        let k0 = example2::unstable_break(k, 1e-14).unwrap();
        assert!(k0 > 0.0 && k0 < k);
        let residual = 1.0 / k0 - 1.0 / k - example2::g(k0);
        assert!(residual.abs() <= 1e-9 / k0, "k = {k}: residual {residual}");
    }
}

#[test]
fn unstable_break_seam() {
    // The bisection midpoint of (0, 3.6) is the middle-branch root 1.8, so the
    // path flips there between the roots 1 (of 5k0² - 14k0 + 9) and
    // 6k'/(6 + k') on the outer branch.
    let seam = example2::seam_report(2.0, 5.0, 301, 1e-12).unwrap();
    assert!((seam.jump_at - 3.6).abs() < 1e-9, "{seam:?}");
    assert!((seam.k0_left - 1.0).abs() < 1e-6);
    assert!((seam.k0_right - 2.25).abs() < 1e-6);
    let k0 = seam.k0_at_two;
    assert!((1.0 / k0 - 0.5 - example2::g(k0)).abs() < 1e-9);
    assert!((k0 - 0.72822).abs() < 1e-5);
}

#[test]
fn example2_small_case_chart_matches_hand_polylines() {
    // k = 1/4: vertical from (1/4, 0) to height 1/k - g(k) = 3.
    let s = example2::example2_polyline(CurveKind::Stable, 0.25).unwrap();
    assert_eq!(
        s.vertices,
        vec![Point::new(0.25, 0.0), Point::new(0.25, 3.0)]
    );
    let chart = example2::Example2Chart::new(1e-12).unwrap();
    // Model (1/4, 1/4) lies on both, at the vertical piece.
    let p = chart.h(Point::new(0.25, 0.25)).unwrap();
    assert!((p.x - 0.25).abs() < 1e-12);
    let back = chart.h_inv(p).unwrap();
    assert!(back.dist(Point::new(0.25, 0.25)) < 1e-10);
}

#[test]
fn example2_chart_misses_part_of_the_quadrant() {
    let chart = example2::Example2Chart::new(1e-12).unwrap();
    assert!(matches!(
        chart.h_inv(Point::new(1.1, 0.3)),
        Err(Error::OutOfDomain { .. })
    ));
}

#[test]
fn example1_to_example2_conjugacy_residual() {
    let e1 = example1::system();
    let e2 = example2::system_with_tol(1e-12).unwrap();
    let grid: Vec<Point> = omega_grid(50, 3.0, 0.95)
        .into_iter()
        .map(|p| example1::h(p).unwrap())
        .collect();
    let h = build_conjugacy(&e1, &e2, &grid).unwrap();
    // Measured 6.2e-10.
    assert!(h.residual_stats.max <= 1e-6, "{:?}", h.residual_stats);
    assert_eq!(h.residual_stats.unverifiable, 0);
    // Both charts fix the axes pointwise.
    let on_axis = h.forward(Point::new(0.7, 0.0)).unwrap();
    assert!(on_axis.dist(Point::new(0.7, 0.0)) < 1e-12);
}

#[test]
fn example1_curves_meet_or_miss() {
    let sys = example1::system();
    let q = curve_intersection(&sys, Point::new(0.5, 0.0), Point::new(0.0, 0.5))
        .unwrap()
        .unwrap();
    assert!(q.dist(Point::new(1.0, 1.0)) <= 1e-10);
    assert_eq!(
        curve_intersection(&sys, Point::new(1.0, 0.0), Point::new(0.0, 1.0)).unwrap(),
        None
    );
}

#[test]
fn linear_stable_set_is_the_axis_segment() {
    let sys = linear_system(2.0).unwrap();
    let plan = MembershipPlan::new(1.0, Direction::Forward);
    let g = component_grid(&sys, Point::ORIGIN, Rect::square(2.0), 0.02, &plan).unwrap();
    for (ix, iy, p, label) in g.cells() {
        let expected = p.x == 0.0 && p.y.abs() <= 1.0 + 1e-12;
        let member = label == GridLabel::MemberInComponent;
        let endpoint = ix == g.center.0 && (p.y.abs() - 1.0).abs() <= 0.02 + 1e-12;
        assert!(
            member == expected || endpoint,
            "node ({ix}, {iy}) at {p}: {label:?}"
        );
    }
    assert_eq!(g.count(GridLabel::MemberOffComponent), 0);
}

#[test]
fn example1_stable_set_lies_on_its_line() {
    // The stable curve through (1, 1) is the preimage of the model line x = 1/2,
    // that is y = 2x - 1. Grid nodes on it step by (0.02, 0.04), so they are
    // not 4-adjacent and only the center is in the component. Rounding in the
    // model abscissa doubles every step, so the horizon stays short enough for
    // it to remain below the deadband.
    let sys = example1::system();
    let plan = MembershipPlan::new(0.5, Direction::Forward).horizon(16);
    let g = component_grid(
        &sys,
        Point::new(1.0, 1.0),
        Rect::new(0.0, 3.0, 0.0, 3.0).unwrap(),
        0.02,
        &plan,
    )
    .unwrap();
    let members: Vec<Point> = g
        .cells()
        .filter(|c| {
            matches!(
                c.3,
                GridLabel::MemberInComponent | GridLabel::MemberOffComponent
            )
        })
        .map(|c| c.2)
        .collect();
    for p in &members {
        assert!((p.y - (2.0 * p.x - 1.0)).abs() < 1e-9, "{p}");
    }
    // Nodes from (0.5, 0) to (2, 3) have model height in [0, 1].
    assert!(members.len() >= 74, "{}", members.len());
    assert_eq!(g.count(GridLabel::MemberInComponent), 1);
    let node = membership(&sys, Point::new(1.0, 1.0), Point::new(1.5, 2.0), &plan).unwrap();
    assert_eq!(node, SetVerdict::Member);
}
