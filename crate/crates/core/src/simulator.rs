//! Exact propagation of constant-control arcs, an RK4 reference integrator,
//! and plan verification.
//!
//! Along a constant-u arc the square y = x1² obeys the linear equation
//! ÿ = 2c - 4u·y with c the segment invariant, so arcs propagate in closed
//! form: trigonometric for u > 0, hyperbolic for u < 0 and algebraic for
//! u = 0. Apex crossings (sign changes of x2) need no event handling.

use crate::model::{dynamics, segment_invariant, Error, ProblemSpec, Result, State};
use crate::Schedule;
use std::io::Write;

/// Time-sampled record of one simulation run.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
}

#[derive(Debug, Clone, Copy)]
pub struct TrajectorySample {
    pub t: f64,
    pub x1: f64,
    pub x2: f64,
    pub u: f64,
}

impl Trajectory {
    pub fn end_state(&self) -> Option<State> {
        self.samples.last().map(|s| State::new(s.x1, s.x2))
    }

    pub fn total_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// CSV with header `t,x1,x2,u`, floats at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,x1,x2,u")?;
        for s in &self.samples {
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", s.t, s.x1, s.x2, s.u)?;
        }
        Ok(())
    }
}

/// Outcome of checking a trajectory against a spec.
#[derive(Debug, Clone, serde::Serialize)]
pub struct VerificationReport {
    /// |x1(t_f) - γ| and |x2(t_f)|.
    pub endpoint_error: (f64, f64),
    /// Largest relative drift of the segment invariant over any constant-u run.
    pub max_invariant_drift: f64,
    pub feasible: bool,
    pub violations: Vec<String>,
}

/// Exact state after time `dt` under constant control `u`.
pub fn propagate_constant(s0: State, u: f64, dt: f64) -> Result<State> {
    if !(dt > 0.0) {
        return Err(Error::Range(format!("dt must be positive, got {dt}")));
    }
    if !(s0.x1 > 0.0) {
        return Err(Error::Domain(format!("x1 must stay positive, got {}", s0.x1)));
    }
    let c = segment_invariant(s0, u)?;
    let y0 = s0.x1 * s0.x1;
    let dy0 = 2.0 * s0.x1 * s0.x2;
    let (y, dy) = if u > 0.0 {
        let w = 2.0 * u.sqrt();
        let yc = c / (2.0 * u);
        let (sin, cos) = (w * dt).sin_cos();
        (
            yc + (y0 - yc) * cos + dy0 / w * sin,
            -w * (y0 - yc) * sin + dy0 * cos,
        )
    } else if u < 0.0 {
        let w = 2.0 * (-u).sqrt();
        let yc = c / (2.0 * u);
        // split e^{±wt} to stay finite for long expulsive arcs
        let a = y0 - yc;
        let b = dy0 / w;
        let ep = (w * dt).exp();
        let em = ep.recip();
        (
            yc + 0.5 * ((a + b) * ep + (a - b) * em),
            0.5 * w * ((a + b) * ep - (a - b) * em),
        )
    } else {
        (y0 + dy0 * dt + c * dt * dt, dy0 + 2.0 * c * dt)
    };
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::Domain(format!(
            "arc left the admissible region (x1² = {y})"
        )));
    }
    let x1 = y.sqrt();
    Ok(State::new(x1, dy / (2.0 * x1)))
}

/// First time at which a constant-u arc from `s0` reaches x1² = `y_target`
/// with the requested sign of ẏ (+1 expanding, -1 contracting, 0 either).
///
/// Returns None when the arc never gets there.
pub(crate) fn time_to_y(s0: State, u: f64, y_target: f64, want: i8) -> Option<f64> {
    let c = segment_invariant(s0, u).ok()?;
    let y0 = s0.x1 * s0.x1;
    let dy0 = 2.0 * s0.x1 * s0.x2;
    let dir_ok = |dy: f64| want == 0 || dy * f64::from(want) > -1e-12;
    if u > 0.0 {
        let w = 2.0 * u.sqrt();
        let yc = c / (2.0 * u);
        let r = ((y0 - yc).powi(2) + (dy0 / w).powi(2)).sqrt();
        if r == 0.0 {
            return if (y_target - y0).abs() < 1e-14 { Some(0.0) } else { None };
        }
        let arg = (y_target - yc) / r;
        if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&arg) {
            return None;
        }
        let base = arg.clamp(-1.0, 1.0).acos();
        let th0 = (-dy0 / w).atan2(y0 - yc);
        let mut best: Option<f64> = None;
        for k in -1..4 {
            for th in [-base + 2.0 * std::f64::consts::PI * f64::from(k),
                       base + 2.0 * std::f64::consts::PI * f64::from(k)] {
                let t = (th - th0) / w;
                if t < -1e-12 {
                    continue;
                }
                if dir_ok(-th.sin()) {
                    let t = t.max(0.0);
                    if best.is_none_or(|b| t < b) {
                        best = Some(t);
                    }
                }
            }
        }
        best
    } else if u < 0.0 {
        let w = 2.0 * (-u).sqrt();
        let yc = c / (2.0 * u);
        let a = y0 - yc;
        let b = dy0 / w;
        let k = y_target - yc;
        // a·cosh θ + b·sinh θ = k  ⇔  (a+b)E² - 2kE + (a-b) = 0, E = e^θ
        let qa = a + b;
        let qb = -2.0 * k;
        let qc = a - b;
        let roots: Vec<f64> = if qa.abs() < 1e-300 {
            if qb != 0.0 { vec![-qc / qb] } else { vec![] }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return None;
            }
            let sq = disc.sqrt();
            vec![(-qb + sq) / (2.0 * qa), (-qb - sq) / (2.0 * qa)]
        };
        let mut best: Option<f64> = None;
        for e in roots {
            if e <= 0.0 {
                continue;
            }
            let th = e.ln();
            if th < -1e-9 {
                continue;
            }
            let th = th.max(0.0);
            let dy = w * (a * th.sinh() + b * th.cosh());
            if dir_ok(dy) {
                let t = th / w;
                if best.is_none_or(|bst| t < bst) {
                    best = Some(t);
                }
            }
        }
        best
    } else {
        // y = y0 + dy0 t + c t², c = x2² + 1/x1² > 0
        let disc = dy0 * dy0 - 4.0 * c * (y0 - y_target);
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let mut best: Option<f64> = None;
        for t in [(-dy0 + sq) / (2.0 * c), (-dy0 - sq) / (2.0 * c)] {
            if t < -1e-12 {
                continue;
            }
            if dir_ok(dy0 + 2.0 * c * t) {
                let t = t.max(0.0);
                if best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            }
        }
        best
    }
}

/// Fixed-step classical RK4 integration of the scaled dynamics under an
/// arbitrary control law, with dense sample output.
///
/// Errors out when x1 approaches the singular axis (x1 ≤ 1e-6).
pub fn integrate<F>(spec: &ProblemSpec, control: F, t_f: f64, steps: usize) -> Result<Trajectory>
where
    F: Fn(f64) -> f64,
{
    if steps < 100 {
        return Err(Error::Range(format!("steps must be at least 100, got {steps}")));
    }
    if !(t_f > 0.0) {
        return Err(Error::Range(format!("t_f must be positive, got {t_f}")));
    }
    let h = t_f / steps as f64;
    let mut s = spec.start();
    let mut samples = Vec::with_capacity(steps + 1);
    samples.push(TrajectorySample { t: 0.0, x1: s.x1, x2: s.x2, u: control(0.0) });
    let f = |s: State, u: f64| -> Result<(f64, f64)> { dynamics(s, u) };
    for i in 0..steps {
        let t0 = i as f64 * h;
        let u0 = control(t0);
        let um = control(t0 + 0.5 * h);
        let u1 = control(t0 + h);
        let k1 = f(s, u0)?;
        let k2 = f(State::new(s.x1 + 0.5 * h * k1.0, s.x2 + 0.5 * h * k1.1), um)?;
        let k3 = f(State::new(s.x1 + 0.5 * h * k2.0, s.x2 + 0.5 * h * k2.1), um)?;
        let k4 = f(State::new(s.x1 + h * k3.0, s.x2 + h * k3.1), u1)?;
        s = State::new(
            s.x1 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
            s.x2 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
        );
        if s.x1 <= 1e-6 {
            return Err(Error::Domain(format!(
                "trajectory approached the x1 = 0 singularity at t = {:.6}",
                t0 + h
            )));
        }
        samples.push(TrajectorySample { t: t0 + h, x1: s.x1, x2: s.x2, u: u1 });
    }
    Ok(Trajectory { samples })
}

/// Chain of exact constant-u arcs over a schedule, at least 50 samples per
/// segment. An empty schedule yields the single sample (0, 1, 0, u(0)).
pub fn simulate_schedule(spec: &ProblemSpec, plan: &Schedule) -> Result<Trajectory> {
    plan.validate(spec)?;
    let mut samples = vec![TrajectorySample { t: 0.0, x1: 1.0, x2: 0.0, u: spec.u_initial() }];
    let mut s = State::new(1.0, 0.0);
    let mut t = 0.0;
    for seg in &plan.segments {
        let n_sub = 50;
        let dt = seg.duration / n_sub as f64;
        for i in 1..=n_sub {
            let stepped = propagate_constant(s, seg.u, dt * i as f64)?;
            samples.push(TrajectorySample {
                t: t + dt * i as f64,
                x1: stepped.x1,
                x2: stepped.x2,
                u: seg.u,
            });
        }
        s = propagate_constant(s, seg.u, seg.duration)?;
        t += seg.duration;
        // land the segment boundary exactly on the chained state
        let last = samples.last_mut().unwrap();
        last.t = t;
        last.x1 = s.x1;
        last.x2 = s.x2;
    }
    Ok(Trajectory { samples })
}

/// Check endpoint, control bounds, x1 positivity and per-segment invariant
/// drift. Reports rather than fails.
pub fn verify(traj: &Trajectory, spec: &ProblemSpec, tol: f64) -> VerificationReport {
    let mut violations = Vec::new();
    let Some(end) = traj.end_state() else {
        return VerificationReport {
            endpoint_error: (f64::INFINITY, f64::INFINITY),
            max_invariant_drift: f64::INFINITY,
            feasible: false,
            violations: vec!["trajectory has no samples".into()],
        };
    };
    let e1 = (end.x1 - spec.gamma()).abs();
    let e2 = end.x2.abs();
    if e1 >= tol || e2 >= tol {
        violations.push(format!(
            "endpoint ({:.6}, {:.6}) misses ({}, 0) by ({e1:.3e}, {e2:.3e})",
            end.x1,
            end.x2,
            spec.gamma()
        ));
    }
    let mut max_drift: f64 = 0.0;
    let mut seg_start: Option<(f64, f64)> = None; // (u, invariant at segment start)
    for (i, s) in traj.samples.iter().enumerate() {
        if !(s.x1 > 0.0) {
            violations.push(format!("x1 not positive at sample {i} (t = {:.6})", s.t));
            continue;
        }
        if !spec.control_in_bounds(s.u, 1e-9) {
            violations.push(format!(
                "control u = {:.6} outside [-{}, {}] at t = {:.6}",
                s.u,
                spec.v1(),
                spec.v2(),
                s.t
            ));
        }
        let c = segment_invariant(State::new(s.x1, s.x2), s.u).unwrap_or(f64::NAN);
        match seg_start {
            Some((u0, c0)) if u0 == s.u => {
                let drift = (c - c0).abs() / c0.abs().max(1e-12);
                max_drift = max_drift.max(drift);
            }
            _ => seg_start = Some((s.u, c)),
        }
    }
    let feasible = violations.is_empty();
    VerificationReport { endpoint_error: (e1, e2), max_invariant_drift: max_drift, feasible, violations }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::segment_invariant;

    /// Small deterministic xorshift for reproducible random draws.
    pub(crate) struct XorShift(u64);

    impl XorShift {
        pub(crate) fn new(seed: u64) -> Self {
            Self(seed.max(1))
        }
        pub(crate) fn next_f64(&mut self) -> f64 {
            let mut x = self.0;
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            self.0 = x;
            (x >> 11) as f64 / (1u64 << 53) as f64
        }
        pub(crate) fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
            lo + (hi - lo) * self.next_f64()
        }
    }

    fn spec() -> ProblemSpec {
        ProblemSpec::new(1.0, 3.0, 10.0).unwrap()
    }

    #[test]
    fn equilibrium_is_fixed() {
        let s = propagate_constant(State::new(1.0, 0.0), 1.0, 7.3).unwrap();
        assert!((s.x1 - 1.0).abs() < 1e-12 && s.x2.abs() < 1e-12);
    }

    #[test]
    fn expulsive_arc_matches_closed_form() {
        // from (1,0) under u = -v1: x1(t) = sqrt(1 + (v1+1)/v1 sinh²(√v1 t))
        for v1 in [0.5, 1.0, 2.0] {
            for t in [0.3, 1.0, 2.5] {
                let s = propagate_constant(State::new(1.0, 0.0), -v1, t).unwrap();
                let expect = (1.0 + (v1 + 1.0) / v1 * (v1.sqrt() * t).sinh().powi(2)).sqrt();
                assert!(
                    (s.x1 - expect).abs() < 1e-10 * expect,
                    "v1={v1} t={t}: {} vs {expect}",
                    s.x1
                );
            }
        }
    }

    #[test]
    fn apex_of_confining_arc() {
        // from (1,0) under u = v2 = 8 the apex sits at the smaller root of
        // u y² - c y + 1 = 0 after a quarter period π/(2√u)
        let u = 8.0;
        let c = segment_invariant(State::new(1.0, 0.0), u).unwrap();
        let dt = std::f64::consts::PI / (2.0 * u.sqrt());
        let s = propagate_constant(State::new(1.0, 0.0), u, dt).unwrap();
        let y_apex = (c - (c * c - 4.0 * u).sqrt()) / (2.0 * u);
        assert!((s.x1 - y_apex.sqrt()).abs() < 1e-12);
        assert!(s.x2.abs() < 1e-9);
        // RK4 oracle agrees
        let spec = ProblemSpec::new(1.0, 8.0, 10.0).unwrap();
        let rk = integrate(&spec, |_| u, dt, 20_000).unwrap();
        let end = rk.end_state().unwrap();
        assert!((end.x1 - s.x1).abs() < 1e-9);
    }

    #[test]
    fn closed_form_vs_rk4_random_segments() {
        // 1000 random draws, relative agreement 1e-8 against a 10⁴-step RK4
        let spec = ProblemSpec::new(2.0, 8.0, 10.0).unwrap();
        let mut rng = XorShift::new(0xA5A5_5A5A);
        for i in 0..1000 {
            let s0 = State::new(rng.uniform(0.5, 3.0), rng.uniform(-2.0, 2.0));
            let u = rng.uniform(-spec.v1(), spec.v2());
            let dt = rng.uniform(1e-3, 3.0);
            let exact = propagate_constant(s0, u, dt).unwrap();
            let rk = {
                let h = dt / 10_000.0;
                let mut s = s0;
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
                s
            };
            let scale = exact.x1.abs().max(exact.x2.abs()).max(1.0);
            assert!(
                (exact.x1 - rk.x1).abs() / scale < 1e-8 && (exact.x2 - rk.x2).abs() / scale < 1e-8,
                "draw {i}: closed form ({}, {}) vs RK ({}, {})",
                exact.x1,
                exact.x2,
                rk.x1,
                rk.x2
            );
        }
    }

    #[test]
    fn time_reversal() {
        let mut rng = XorShift::new(42);
        for _ in 0..300 {
            let s0 = State::new(rng.uniform(0.4, 4.0), rng.uniform(-2.0, 2.0));
            let u = rng.uniform(-2.0, 8.0);
            let dt = rng.uniform(0.01, 2.0);
            let fwd = propagate_constant(s0, u, dt).unwrap();
            let back = propagate_constant(State::new(fwd.x1, -fwd.x2), u, dt).unwrap();
            assert!((back.x1 - s0.x1).abs() < 1e-9 * s0.x1.max(1.0));
            assert!((back.x2 + s0.x2).abs() < 1e-9 * s0.x2.abs().max(1.0));
        }
    }

    #[test]
    fn time_to_y_inverts_propagation() {
        let mut rng = XorShift::new(7);
        for _ in 0..500 {
            let s0 = State::new(rng.uniform(0.4, 4.0), rng.uniform(-2.0, 2.0));
            let u = rng.uniform(-3.0, 9.0);
            let dt = rng.uniform(0.01, 1.5);
            let s1 = propagate_constant(s0, u, dt).unwrap();
            let want = if s1.x2 > 0.0 { 1 } else if s1.x2 < 0.0 { -1 } else { 0 };
            let t = time_to_y(s0, u, s1.x1 * s1.x1, want)
                .unwrap_or_else(|| panic!("no arrival for u={u} dt={dt}"));
            assert!(t <= dt + 1e-9, "first arrival {t} after propagation time {dt}");
            let s2 = propagate_constant(s0, u, t.max(1e-300)).unwrap();
            assert!((s2.x1 - s1.x1).abs() < 1e-7 * s1.x1.max(1.0) || (t - dt).abs() < 1e-9);
        }
    }

    #[test]
    fn invariant_conserved_under_rk4() {
        // flow conservation under the reference integrator, relative 1e-9
        let spec = spec();
        for u in [-1.0, -0.3, 0.0, 0.5, 1.0, 3.0] {
            let traj = integrate(&spec, |_| u, 2.0, 10_000).unwrap();
            let c0 = segment_invariant(State::new(1.0, 0.0), u).unwrap();
            for s in &traj.samples {
                let c = segment_invariant(State::new(s.x1, s.x2), u).unwrap();
                assert!(
                    (c - c0).abs() <= 1e-9 * c0.abs().max(1.0),
                    "u={u}: c drifted from {c0} to {c}"
                );
            }
        }
    }

    #[test]
    fn rk4_order_of_accuracy() {
        // error vs closed form scales as steps⁻⁴: log-log slope -4 ± 0.3
        let s0 = State::new(1.0, 0.0);
        let u = 3.0;
        let dt = 2.0;
        let exact = propagate_constant(s0, u, dt).unwrap();
        let spec = spec();
        let mut pts = Vec::new();
        for steps in [100usize, 200, 400, 800] {
            let end = integrate(&spec, |_| u, dt, steps).unwrap().end_state().unwrap();
            let err = ((end.x1 - exact.x1).powi(2) + (end.x2 - exact.x2).powi(2)).sqrt();
            pts.push(((steps as f64).ln(), err.ln()));
        }
        // least-squares slope
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        assert!(
            (slope + 4.0).abs() < 0.3,
            "RK4 convergence slope {slope}, expected -4 ± 0.3"
        );
    }

    #[test]
    fn integrate_rejects_bad_args() {
        let spec = spec();
        assert!(integrate(&spec, |_| 1.0, 1.0, 50).is_err());
        assert!(integrate(&spec, |_| 1.0, -1.0, 1000).is_err());
    }

    #[test]
    fn one_switch_chain_closed_form_vs_rk4() {
        // integrate each constant-u segment of the one-switch plan and
        // compare with the exact arc chain
        let spec = spec();
        let plan = crate::bangbang::one_switch(&spec).unwrap();
        let mut exact = State::new(1.0, 0.0);
        let mut numeric = State::new(1.0, 0.0);
        for seg in &plan.segments {
            exact = propagate_constant(exact, seg.u, seg.duration).unwrap();
            let h = seg.duration / 20_000.0;
            for _ in 0..20_000 {
                let k1 = dynamics(numeric, seg.u).unwrap();
                let k2 = dynamics(
                    State::new(numeric.x1 + 0.5 * h * k1.0, numeric.x2 + 0.5 * h * k1.1),
                    seg.u,
                )
                .unwrap();
                let k3 = dynamics(
                    State::new(numeric.x1 + 0.5 * h * k2.0, numeric.x2 + 0.5 * h * k2.1),
                    seg.u,
                )
                .unwrap();
                let k4 =
                    dynamics(State::new(numeric.x1 + h * k3.0, numeric.x2 + h * k3.1), seg.u)
                        .unwrap();
                numeric = State::new(
                    numeric.x1 + h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0),
                    numeric.x2 + h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1),
                );
            }
        }
        assert!(
            (exact.x1 - numeric.x1).abs() < 1e-8 && (exact.x2 - numeric.x2).abs() < 1e-8,
            "chain endpoints: exact ({}, {}), numeric ({}, {})",
            exact.x1,
            exact.x2,
            numeric.x1,
            numeric.x2
        );
        assert!((exact.x1 - 10.0).abs() < 1e-9 && exact.x2.abs() < 1e-9);
    }

    #[test]
    fn integrate_detects_singularity_approach() {
        // a wild control slams the state through x1 = 0 in one step
        let spec = spec();
        let err = integrate(&spec, |_| 1e12, 1.0, 100).unwrap_err();
        assert!(matches!(err, crate::model::Error::Domain(_)), "{err}");
    }

    #[test]
    fn ansatz_control_steers_to_target_when_slow() {
        // reference quintic design at γ=10, t_f=25: endpoint within 1e-6 of
        // (10, 0); this run doubles as the oracle for the quintic control
        let gamma = 10.0;
        let t_f = 25.0;
        let spec = ProblemSpec::new(1.0, 3.0, gamma).unwrap();
        let control =
            |t: f64| crate::model::ansatz_control((t / t_f).clamp(0.0, 1.0), t_f, gamma).unwrap();
        let traj = integrate(&spec, control, t_f, 25_000).unwrap();
        let end = traj.end_state().unwrap();
        assert!(
            (end.x1 - gamma).abs() < 1e-6 && end.x2.abs() < 1e-6,
            "endpoint ({}, {})",
            end.x1,
            end.x2
        );
        // and the control stays within the bounds of this spec the whole way
        for s in &traj.samples {
            assert!(spec.control_in_bounds(s.u, 1e-12));
        }
    }

    #[test]
    fn fast_ansatz_violations_are_reported_not_clamped() {
        // short t_f drives the quintic control expulsive beyond -v1; the
        // samples keep the raw values and verify() flags them
        let gamma = 10.0;
        let t_f = 3.0;
        let spec = ProblemSpec::new(0.2, 3.0, gamma).unwrap();
        let control =
            |t: f64| crate::model::ansatz_control((t / t_f).clamp(0.0, 1.0), t_f, gamma).unwrap();
        let traj = integrate(&spec, control, t_f, 5_000).unwrap();
        let out_of_bounds = traj.samples.iter().any(|s| !spec.control_in_bounds(s.u, 1e-9));
        assert!(out_of_bounds, "expected the fast quintic control to leave [-v1, v2]");
        let report = verify(&traj, &spec, 1e-6);
        assert!(!report.feasible);
        assert!(report.violations.iter().any(|v| v.contains("outside")));
    }

    #[test]
    fn constant_u_one_integrates_to_rest() {
        let spec = spec();
        let traj = integrate(&spec, |_| 1.0, 5.0, 1000).unwrap();
        for s in &traj.samples {
            assert!((s.x1 - 1.0).abs() < 1e-12 && s.x2.abs() < 1e-12);
        }
    }

    #[test]
    fn empty_schedule_single_sample() {
        let spec = ProblemSpec::new(1.0, 3.0, 1.0 + 1e-9).unwrap();
        let traj = simulate_schedule(&spec, &Schedule::empty()).unwrap();
        assert_eq!(traj.samples.len(), 1);
        let s = traj.samples[0];
        assert_eq!((s.t, s.x1, s.x2), (0.0, 1.0, 0.0));
    }

    #[test]
    fn verify_flags_truncation_and_bounds() {
        let spec = spec();
        let plan = crate::bangbang::one_switch(&spec).unwrap();
        let traj = simulate_schedule(&spec, &plan).unwrap();
        let report = verify(&traj, &spec, 1e-6);
        assert!(report.feasible, "violations: {:?}", report.violations);
        assert!(report.endpoint_error.0 < 1e-6 && report.endpoint_error.1 < 1e-6);

        let mut truncated = traj.clone();
        truncated.samples.truncate(traj.samples.len() / 2);
        let report = verify(&truncated, &spec, 1e-6);
        assert!(!report.feasible);

        let mut bad = traj.clone();
        bad.samples[3].u = spec.v2() + 0.1;
        let report = verify(&bad, &spec, 1e-6);
        assert!(!report.feasible);
        assert!(report.violations.iter().any(|v| v.contains("outside")));
    }
}
