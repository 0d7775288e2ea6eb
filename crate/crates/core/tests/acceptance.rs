//! Acceptance suite: one test per quantitative criterion, each printing a
//! pass/fail line (visible with `cargo test --test acceptance -- --nocapture`).

use std::time::Instant;
use trapcool::bangbang::{
    asymptotic_min_time, best_plan, crossing_threshold, multi_switch, optimal_betas_asymptotic,
    two_switch_optimal, Strategy,
};
use trapcool::model::{dynamics, segment_invariant};
use trapcool::pseudospectral::{interpolate, lgl_nodes, resimulate, runge_demo, solve_spec, LglGrid};
use trapcool::simulator::{integrate, propagate_constant};
use trapcool::{ProblemSpec, State};

fn report(name: &str, pass: bool, detail: &str) -> bool {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn finish(name: &str, failures: &[String]) {
    assert!(failures.is_empty(), "{name} failed: {failures:?}");
}

#[test]
fn criterion_1_one_two_crossing_intuitive() {
    let t0 = Instant::now();
    let v2 = crossing_threshold(1.0, 10.0, Strategy::One, Strategy::TwoIntuitive, (2.0, 20.0))
        .expect("crossing exists");
    let elapsed = t0.elapsed().as_secs_f64();
    let mut failures = Vec::new();
    if !report(
        "criterion 1 (one/two crossing, intuitive)",
        (v2 - 6.786).abs() <= 0.01,
        &format!("v2* = {v2:.6}, expected 6.786 +- 0.01, {elapsed:.2}s"),
    ) {
        failures.push(format!("v2* = {v2}"));
    }
    if elapsed >= 1.0 {
        failures.push(format!("runtime {elapsed:.2}s exceeds 1s"));
    }
    finish("criterion 1", &failures);
}

#[test]
fn criterion_2_one_two_crossing_optimal() {
    let t0 = Instant::now();
    let v2 = crossing_threshold(1.0, 10.0, Strategy::One, Strategy::TwoOptimal, (2.0, 20.0))
        .expect("crossing exists");
    let mut failures = Vec::new();
    if !report(
        "criterion 2 (one/two crossing, optimal)",
        (v2 - 6.763).abs() <= 0.01,
        &format!("v2* = {v2:.6}, expected 6.763 +- 0.01"),
    ) {
        failures.push(format!("v2* = {v2}"));
    }
    // below the crossing the optimizer must return t1 = 0 (within 1e-4)
    for v2_below in [3.0, 5.0, 6.0, 6.7] {
        let spec = ProblemSpec::new(1.0, v2_below, 10.0).unwrap();
        let plan = two_switch_optimal(&spec).unwrap();
        let t1 = if (plan.segments[0].u - spec.v2()).abs() < 1e-9 {
            plan.segments[0].duration
        } else {
            0.0
        };
        if !report(
            "criterion 2 (t1 below crossing)",
            t1.abs() < 1e-4,
            &format!("v2 = {v2_below}: t1 = {t1:.2e}"),
        ) {
            failures.push(format!("t1 = {t1} at v2 = {v2_below}"));
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed >= 30.0 {
        failures.push(format!("runtime {elapsed:.2}s exceeds 30s"));
    }
    finish("criterion 2", &failures);
}

#[test]
fn criterion_3_four_switch_threshold() {
    let t0 = Instant::now();
    let v2 = crossing_threshold(1.0, 10.0, Strategy::Multi(1), Strategy::Multi(2), (20.0, 60.0))
        .expect("crossing exists");
    let elapsed = t0.elapsed().as_secs_f64();
    let mut failures = Vec::new();
    if !report(
        "criterion 3 (two/four-switch threshold)",
        (v2 - 43.32).abs() <= 0.05,
        &format!("v2* = {v2:.6}, expected 43.32 +- 0.05, {elapsed:.2}s"),
    ) {
        failures.push(format!("v2* = {v2}"));
    }
    if elapsed >= 10.0 {
        failures.push(format!("runtime {elapsed:.2}s exceeds 10s"));
    }
    finish("criterion 3", &failures);
}

#[test]
fn criterion_4_asymptotic_argmin() {
    let t0 = Instant::now();
    let argmin = |g: f64| {
        (1..=10usize)
            .min_by(|a, b| {
                asymptotic_min_time(g, *a, 1.0).total_cmp(&asymptotic_min_time(g, *b, 1.0))
            })
            .unwrap()
    };
    let n10 = argmin(10.0);
    let n50 = argmin(50.0);
    let elapsed = t0.elapsed().as_secs_f64();
    let mut failures = Vec::new();
    if !report(
        "criterion 4 (asymptotic argmin)",
        n10 == 2 && n50 > n10,
        &format!("argmin(10) = {n10} (expected 2), argmin(50) = {n50} (> argmin(10)), {elapsed:.2}s"),
    ) {
        failures.push(format!("argmin(10) = {n10}, argmin(50) = {n50}"));
    }
    if elapsed >= 1.0 {
        failures.push(format!("runtime {elapsed:.2}s exceeds 1s"));
    }
    finish("criterion 4", &failures);
}

#[test]
fn criterion_5_limit_consistency() {
    let t0 = Instant::now();
    let v2 = 1e6;
    let spec = ProblemSpec::new(1.0, v2, 10.0).unwrap();
    let mut failures = Vec::new();
    for n in 1..=3usize {
        let plan = multi_switch(&spec, &optimal_betas_asymptotic(10.0, n)).unwrap();
        let limit = asymptotic_min_time(10.0, n, v2);
        let rel = (plan.total_time - limit).abs() / limit;
        if !report(
            "criterion 5 (limit consistency)",
            rel < 1e-3,
            &format!("n = {n}: exact {:.10e}, limit {:.10e}, rel {rel:.2e}", plan.total_time, limit),
        ) {
            failures.push(format!("n = {n}: rel {rel}"));
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    if elapsed >= 1.0 {
        failures.push(format!("runtime {elapsed:.2}s exceeds 1s"));
    }
    finish("criterion 5", &failures);
}

#[test]
fn criterion_6_collocation_closure() {
    let mut failures = Vec::new();
    for v2 in [3.0, 8.0] {
        let t0 = Instant::now();
        let spec = ProblemSpec::new(1.0, v2, 10.0).unwrap();
        let (bb, _) = best_plan(&spec, 3).unwrap();
        let sol = solve_spec(&spec, 24, None, Some(&bb.schedule)).unwrap();
        let ratio = sol.t_f / bb.total_time;
        let (e1, e2) = resimulate(&spec, &sol, 20_000).unwrap();
        let elapsed = t0.elapsed().as_secs_f64();
        let band_ok = sol.converged && (ratio - 1.0).abs() <= 0.02;
        if !report(
            "criterion 6 (t_f within 2% of bang-bang)",
            band_ok,
            &format!(
                "v2 = {v2}: t_f = {:.6}, bang-bang {:.6}, ratio {ratio:.5}, converged {}, {elapsed:.1}s",
                sol.t_f, bb.total_time, sol.converged
            ),
        ) {
            failures.push(format!("v2 = {v2}: ratio {ratio:.5}"));
        }
        let closure_ok = e1 < 1e-3 && e2 < 1e-3;
        if !report(
            "criterion 6 (resimulation closure)",
            closure_ok,
            &format!("v2 = {v2}: endpoint error ({e1:.2e}, {e2:.2e})"),
        ) {
            failures.push(format!("v2 = {v2}: closure ({e1:.2e}, {e2:.2e})"));
        }
        if elapsed >= 120.0 {
            failures.push(format!("v2 = {v2}: runtime {elapsed:.1}s exceeds 2min"));
        }
    }
    finish("criterion 6", &failures);
}

#[test]
fn criterion_7_slope_restriction_penalty() {
    let mut failures = Vec::new();
    for v2 in [3.0, 8.0] {
        let t0 = Instant::now();
        let spec = ProblemSpec::new(1.0, v2, 10.0).unwrap();
        let (bb, _) = best_plan(&spec, 3).unwrap();
        let free = solve_spec(&spec, 24, None, Some(&bb.schedule)).unwrap();
        let bounded = solve_spec(&spec, 24, Some(10.0), Some(&bb.schedule)).unwrap();
        let elapsed = t0.elapsed().as_secs_f64();
        let ok = free.converged && bounded.converged && bounded.t_f > free.t_f;
        if !report(
            "criterion 7 (slope penalty)",
            ok,
            &format!(
                "v2 = {v2}: t_f(M=10) = {:.6} > t_f(M=inf) = {:.6}, converged {}/{}, {elapsed:.1}s",
                bounded.t_f, free.t_f, free.converged, bounded.converged
            ),
        ) {
            failures.push(format!("v2 = {v2}"));
        }
        if elapsed >= 120.0 {
            failures.push(format!("v2 = {v2}: runtime {elapsed:.1}s exceeds 2min"));
        }
    }
    finish("criterion 7", &failures);
}

#[test]
fn criterion_8_runge_demonstration() {
    let t0 = Instant::now();
    let d = runge_demo(16).unwrap();
    let ratio = d.max_err_uniform / d.max_err_lgl;
    let elapsed = t0.elapsed().as_secs_f64();
    let mut failures = Vec::new();
    if !report(
        "criterion 8 (runge demonstration)",
        ratio >= 10.0,
        &format!(
            "uniform {:.4e}, LGL {:.4e}, ratio {ratio:.1} (>= 10), {elapsed:.2}s",
            d.max_err_uniform, d.max_err_lgl
        ),
    ) {
        failures.push(format!("ratio {ratio}"));
    }
    if elapsed >= 1.0 {
        failures.push(format!("runtime {elapsed:.2}s exceeds 1s"));
    }
    finish("criterion 8", &failures);
}

#[test]
fn criterion_9_property_suites() {
    let t0 = Instant::now();
    let mut failures = Vec::new();

    // invariant conservation under the reference integrator, 1e-9 relative
    let spec = ProblemSpec::new(1.0, 3.0, 10.0).unwrap();
    let mut worst_drift: f64 = 0.0;
    for u in [-1.0, 0.0, 1.0, 3.0] {
        let traj = integrate(&spec, |_| u, 2.5, 10_000).unwrap();
        let c0 = segment_invariant(State::new(1.0, 0.0), u).unwrap();
        for s in &traj.samples {
            let c = segment_invariant(State::new(s.x1, s.x2), u).unwrap();
            worst_drift = worst_drift.max((c - c0).abs() / c0.abs().max(1.0));
        }
    }
    if !report(
        "criterion 9 (invariant conservation)",
        worst_drift < 1e-9,
        &format!("max relative drift {worst_drift:.2e}"),
    ) {
        failures.push(format!("drift {worst_drift}"));
    }

    // closed form vs RK4 over 1000 random segments, 1e-8 relative
    let mut rng = 0x1234_5678_9abc_def0u64;
    let mut next = move || {
        rng ^= rng << 13;
        rng ^= rng >> 7;
        rng ^= rng << 17;
        (rng >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut worst_gap: f64 = 0.0;
    for _ in 0..1000 {
        let s0 = State::new(0.5 + 2.5 * next(), -2.0 + 4.0 * next());
        let u = -2.0 + 10.0 * next();
        let dt = 1e-3 + 3.0 * next();
        let exact = propagate_constant(s0, u, dt).unwrap();
        let mut s = s0;
        let h = dt / 10_000.0;
        for _ in 0..10_000 {
            let k1 = dynamics(s, u).unwrap();
            let k2 = dynamics(State::new(s.x1 + 0.5 * h * k1.0, s.x2 + 0.5 * h * k1.1), u).unwrap();
            let k3 = dynamics(State::new(s.x1 + 0.5 * h * k2.0, s.x2 + 0.5 * h * k2.1), u).unwrap();
            let k4 = dynamics(State::new(s.x1 + h * k3.0, s.x2 + h * k3.1), u).unwrap();
            s = State::new(
                s.x1 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                s.x2 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
            );
        }
        let scale = exact.x1.abs().max(exact.x2.abs()).max(1.0);
        worst_gap = worst_gap
            .max((exact.x1 - s.x1).abs() / scale)
            .max((exact.x2 - s.x2).abs() / scale);
    }
    if !report(
        "criterion 9 (closed form vs RK4)",
        worst_gap < 1e-8,
        &format!("max relative gap {worst_gap:.2e} over 1000 segments"),
    ) {
        failures.push(format!("gap {worst_gap}"));
    }

    // RK4 order of accuracy: slope -4 +- 0.3
    let exact = propagate_constant(State::new(1.0, 0.0), 3.0, 2.0).unwrap();
    let mut pts = Vec::new();
    for steps in [100usize, 200, 400, 800] {
        let end = integrate(&spec, |_| 3.0, 2.0, steps).unwrap().end_state().unwrap();
        let err = ((end.x1 - exact.x1).powi(2) + (end.x2 - exact.x2).powi(2)).sqrt();
        pts.push(((steps as f64).ln(), err.ln()));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if !report(
        "criterion 9 (RK4 order)",
        (slope + 4.0).abs() < 0.3,
        &format!("log-log slope {slope:.3} (expected -4 +- 0.3)"),
    ) {
        failures.push(format!("slope {slope}"));
    }

    // differentiation-matrix polynomial exactness for degrees <= N
    let mut worst_d: f64 = 0.0;
    for n_ord in [8usize, 16, 24] {
        let grid = LglGrid::new(n_ord).unwrap();
        for k in 0..=n_ord {
            let xs: Vec<f64> = grid.nodes.iter().map(|&t| t.powi(k as i32)).collect();
            let got = grid.apply_d(&xs);
            for (i, &t) in grid.nodes.iter().enumerate() {
                let want = if k == 0 { 0.0 } else { k as f64 * t.powi(k as i32 - 1) };
                worst_d = worst_d.max((got[i] - want).abs() / (n_ord * n_ord) as f64);
            }
        }
    }
    if !report(
        "criterion 9 (differentiation exactness)",
        worst_d < 1e-10,
        &format!("max scaled error {worst_d:.2e}"),
    ) {
        failures.push(format!("differentiation {worst_d}"));
    }

    // node symmetry to 1e-14
    let mut worst_sym: f64 = 0.0;
    for n_ord in [8usize, 16, 24, 32] {
        let nodes = lgl_nodes(n_ord).unwrap();
        for i in 0..=n_ord {
            worst_sym = worst_sym.max((nodes[i] + nodes[n_ord - i]).abs());
        }
    }
    if !report(
        "criterion 9 (node symmetry)",
        worst_sym < 1e-14,
        &format!("max |t_i + t_(N-i)| = {worst_sym:.2e}"),
    ) {
        failures.push(format!("symmetry {worst_sym}"));
    }

    // cardinal interpolation at the nodes
    let grid = LglGrid::new(16).unwrap();
    let vals: Vec<f64> = grid.nodes.iter().map(|&t| (2.0 * t).sin()).collect();
    let mut worst_card: f64 = 0.0;
    for (k, &tk) in grid.nodes.iter().enumerate() {
        worst_card = worst_card.max((interpolate(&grid, &vals, tk) - vals[k]).abs());
    }
    if !report(
        "criterion 9 (cardinal interpolation)",
        worst_card < 1e-14,
        &format!("max nodal deviation {worst_card:.2e}"),
    ) {
        failures.push(format!("cardinal {worst_card}"));
    }

    let elapsed = t0.elapsed().as_secs_f64();
    println!("criterion 9 total runtime {elapsed:.1}s (< 60s)");
    if elapsed >= 60.0 {
        failures.push(format!("runtime {elapsed:.1}s exceeds 1min"));
    }
    finish("criterion 9", &failures);
}
