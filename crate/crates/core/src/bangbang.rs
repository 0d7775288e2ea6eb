//! Closed-form and numerically optimized bang-bang planners.
//!
//! Interior controls take only the extreme values -v1 and v2; the jumps from
//! u(0) = 1 and to u(t_f) = 1/γ⁴ at the boundaries are instantaneous and are
//! not part of a schedule. Switching times for one intermediate switching
//! follow from matching the constant-u invariant curves through (1, 0) and
//! (γ, 0); the two-switch and 2n-switch planners prepend quarter-period dives
//! toward x1 = 0 that exploit the 1/x1³ repulsion as a slingshot.

use crate::golden::{golden_min, scan_then_golden};
use crate::model::{segment_invariant, Error, ProblemSpec, Result};
use crate::simulator::{propagate_constant, time_to_y};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::io::Write;

/// One constant-control piece of a plan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub duration: f64,
    pub u: f64,
}

/// Bang-bang plan: ordered (duration, control) segments. Boundary controls
/// u = 1 at t = 0⁻ and u = 1/γ⁴ at t_f⁺ are implied.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub segments: Vec<Segment>,
}

impl Schedule {
    pub fn empty() -> Self {
        Self { segments: Vec::new() }
    }

    pub fn total_time(&self) -> f64 {
        self.segments.iter().map(|s| s.duration).sum()
    }

    /// Number of interior control switchings.
    pub fn switchings(&self) -> usize {
        self.segments.len().saturating_sub(1)
    }

    /// Check the schedule against its spec: positive durations, interior
    /// controls drawn from {-v1, v2}, adjacent segments distinct.
    pub fn validate(&self, spec: &ProblemSpec) -> Result<()> {
        for (i, seg) in self.segments.iter().enumerate() {
            if !(seg.duration > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "segment {i} has non-positive duration {}",
                    seg.duration
                )));
            }
            let bang = (seg.u + spec.v1()).abs() < 1e-9 || (seg.u - spec.v2()).abs() < 1e-9;
            if !bang {
                return Err(Error::InvalidSpec(format!(
                    "segment {i} control {} is not a bang value (-{} or {})",
                    seg.u,
                    spec.v1(),
                    spec.v2()
                )));
            }
            if i > 0 && (self.segments[i - 1].u - seg.u).abs() < 1e-12 {
                return Err(Error::InvalidSpec(format!(
                    "segments {} and {i} carry the same control {}",
                    i - 1,
                    seg.u
                )));
            }
        }
        Ok(())
    }

    /// Append a segment, merging with the tail when the control repeats.
    fn push_merged(&mut self, duration: f64, u: f64) {
        if duration <= 0.0 {
            return;
        }
        if let Some(last) = self.segments.last_mut() {
            if (last.u - u).abs() < 1e-12 {
                last.duration += duration;
                return;
            }
        }
        self.segments.push(Segment { duration, u });
    }

    /// CSV with header `segment_index,duration,u`, floats at 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "segment_index,duration,u")?;
        for (i, s) in self.segments.iter().enumerate() {
            writeln!(w, "{i},{:.16e},{:.16e}", s.duration, s.u)?;
        }
        Ok(())
    }
}

/// Which planner produced a plan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanStrategy {
    #[serde(rename = "one")]
    OneSwitch,
    #[serde(rename = "two-intuitive")]
    TwoSwitchIntuitive,
    #[serde(rename = "two-optimal")]
    TwoSwitchOptimal,
    #[serde(rename = "multi")]
    MultiSwitch,
}

impl std::fmt::Display for PlanStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            PlanStrategy::OneSwitch => "one",
            PlanStrategy::TwoSwitchIntuitive => "two-intuitive",
            PlanStrategy::TwoSwitchOptimal => "two-optimal",
            PlanStrategy::MultiSwitch => "multi",
        };
        f.write_str(s)
    }
}

/// Plan made of n two-switch slingshot segments through intermediate apices
/// β₀ = 1 < β₁ < … < β_n = γ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiSwitchPlan {
    pub betas: Vec<f64>,
    pub n: usize,
    pub schedule: Schedule,
    pub total_time: f64,
    pub strategy: PlanStrategy,
}

fn sqrt_guarded(x: f64, what: &str) -> Result<f64> {
    if x < 0.0 {
        return Err(Error::InfeasibleSpec(format!("{what} must be nonnegative, got {x}")));
    }
    Ok(x.sqrt())
}

fn asin_guarded(x: f64, what: &str) -> Result<f64> {
    if x > 1.0 + 1e-12 {
        return Err(Error::InfeasibleSpec(format!("{what} must not exceed 1, got {x}")));
    }
    Ok(x.clamp(-1.0, 1.0).asin())
}

/// x1 where the u = -v1 arc through (1, 0) meets the u = v2 arc through (γ, 0).
pub fn meeting_point(spec: &ProblemSpec) -> f64 {
    let (v1, v2, g) = (spec.v1(), spec.v2(), spec.gamma());
    let g2 = g * g;
    ((g2 * v1 + 1.0 + g2 * (g2 * v2 - 1.0)) / (g2 * (v1 + v2))).sqrt()
}

/// Plan with one intermediate switching: expulsive arc to the meeting point,
/// then confining arc into (γ, 0).
pub fn one_switch(spec: &ProblemSpec) -> Result<Schedule> {
    let (v1, v2, g) = (spec.v1(), spec.v2(), spec.gamma());
    let g2 = g * g;
    if g2 * v2 <= 1.0 {
        return Err(Error::InfeasibleSpec(format!(
            "gamma^2 v2 > 1 required, got {}",
            g2 * v2
        )));
    }
    let t1 = (sqrt_guarded(
        v1 * (g2 - 1.0) * (g2 * v2 - 1.0) / (g2 * (v1 + v2) * (v1 + 1.0)),
        "sinh^-1 radicand of t1",
    )?)
    .asinh()
        / v1.sqrt();
    let t2 = asin_guarded(
        sqrt_guarded(
            v2 * (g2 - 1.0) * (g2 * v1 + 1.0) / ((v1 + v2) * (g2 * g2 * v2 - 1.0)),
            "sin^-1 radicand of t2",
        )?,
        "sin^-1 argument of t2",
    )? / v2.sqrt();
    let mut sched = Schedule::empty();
    sched.push_merged(t1, -v1);
    sched.push_merged(t2, v2);
    Ok(sched)
}

/// Traversal times of one slingshot segment from rest at `alpha` to rest at
/// `beta`: expulsive arc to the meeting point, then confining arc.
fn arc_pair_times(alpha: f64, beta: f64, v1: f64, v2: f64) -> Result<(f64, f64)> {
    let (a2, b2) = (alpha * alpha, beta * beta);
    let t1 = (sqrt_guarded(
        v1 * (b2 - a2) * (a2 * b2 * v2 - 1.0) / (b2 * (v1 + v2) * (a2 * a2 * v1 + 1.0)),
        "sinh^-1 radicand of the expulsive arc",
    )?)
    .asinh()
        / v1.sqrt();
    let t2 = asin_guarded(
        sqrt_guarded(
            v2 * (b2 - a2) * (a2 * b2 * v1 + 1.0) / (a2 * (v1 + v2) * (b2 * b2 * v2 - 1.0)),
            "sin^-1 radicand of the confining arc",
        )?,
        "sin^-1 argument of the confining arc",
    )? / v2.sqrt();
    Ok((t1, t2))
}

/// Intuitive plan with two intermediate switchings: quarter-period dive to
/// the apex 1/√v2, slingshot, then confining arc into (γ, 0).
pub fn two_switch_intuitive(spec: &ProblemSpec) -> Result<Schedule> {
    let (v1, v2, g) = (spec.v1(), spec.v2(), spec.gamma());
    if g * g <= 1.0 + 1e-12 {
        return Err(Error::InfeasibleSpec(
            "two-switch plan degenerates as gamma -> 1".into(),
        ));
    }
    let t1 = 0.5 * PI / v2.sqrt();
    let alpha = 1.0 / v2.sqrt();
    let (t2, t3) = arc_pair_times(alpha, g, v1, v2)?;
    if t2 <= 0.0 {
        return Err(Error::InfeasibleSpec("expulsive arc has zero length".into()));
    }
    let mut sched = Schedule::empty();
    sched.push_merged(t1, v2);
    sched.push_merged(t2, -v1);
    sched.push_merged(t3, v2);
    Ok(sched)
}

/// Total time of the trial two-switch plan whose first confining arc lasts
/// `t1`; the remaining durations follow from reaching (γ, 0).
fn two_switch_trial_time(spec: &ProblemSpec, t1: f64) -> Option<f64> {
    let (v1, v2, g) = (spec.v1(), spec.v2(), spec.gamma());
    let s1 = if t1 > 0.0 {
        propagate_constant(spec.start(), v2, t1).ok()?
    } else {
        spec.start()
    };
    let c_a = segment_invariant(s1, -v1).ok()?;
    let c_b = v2 * g * g + 1.0 / (g * g);
    let y_b = (c_b - c_a) / (v1 + v2);
    if y_b <= 0.0 {
        return None;
    }
    let t2 = time_to_y(s1, -v1, y_b, 1)?;
    let s_b = if t2 > 0.0 {
        propagate_constant(s1, -v1, t2).ok()?
    } else {
        s1
    };
    let t3 = time_to_y(s_b, v2, g * g, 1)?;
    Some(t1 + t2 + t3)
}

/// Numerically optimized plan with at most two intermediate switchings.
///
/// The first-arc duration t1 is minimized over [0, π/(2√v2)] by a coarse scan
/// plus golden-section refinement (the profile can hold a boundary minimum at
/// t1 = 0 and an interior one simultaneously); t1 = 0 collapses to the
/// one-switch plan.
pub fn two_switch_optimal(spec: &ProblemSpec) -> Result<Schedule> {
    let (v1, v2, g) = (spec.v1(), spec.v2(), spec.gamma());
    let hi = 0.5 * PI / v2.sqrt();
    let objective = |t1: f64| two_switch_trial_time(spec, t1);
    let t1_star = scan_then_golden(objective, 0.0, hi, 64, 1e-9);
    let at_star = objective(t1_star).unwrap_or(f64::INFINITY);
    let at_zero = objective(0.0).unwrap_or(f64::INFINITY);
    let t1 = if at_zero <= at_star + 1e-12 || t1_star < 1e-7 {
        0.0
    } else {
        t1_star
    };
    if t1 == 0.0 {
        return one_switch(spec);
    }
    let s1 = propagate_constant(spec.start(), v2, t1)?;
    let c_a = segment_invariant(s1, -v1)?;
    let y_b = (v2 * g * g + 1.0 / (g * g) - c_a) / (v1 + v2);
    let t2 = time_to_y(s1, -v1, y_b, 1)
        .ok_or_else(|| Error::Numeric("optimized first arc lost the meeting point".into()))?;
    let s_b = propagate_constant(s1, -v1, t2)?;
    let t3 = time_to_y(s_b, v2, g * g, 1)
        .ok_or_else(|| Error::Numeric("final confining arc misses the target".into()))?;
    let mut sched = Schedule::empty();
    sched.push_merged(t1, v2);
    sched.push_merged(t2, -v1);
    sched.push_merged(t3, v2);
    Ok(sched)
}

/// Exact traversal time of one slingshot segment from rest at `beta_prev` to
/// rest at `beta_next`, including the leading quarter period π/(2√v2).
pub fn segment_time(beta_prev: f64, beta_next: f64, spec: &ProblemSpec) -> Result<f64> {
    if !(beta_prev >= 1.0) || !(beta_next > beta_prev) {
        return Err(Error::InfeasibleSpec(format!(
            "need 1 <= beta_prev < beta_next, got ({beta_prev}, {beta_next})"
        )));
    }
    let (v1, v2) = (spec.v1(), spec.v2());
    let alpha = 1.0 / (beta_prev * v2.sqrt());
    let (t1, t2) = arc_pair_times(alpha, beta_next, v1, v2)?;
    Ok(0.5 * PI / v2.sqrt() + t1 + t2)
}

/// Large-v2 limit of √v2·[`segment_time`]: π/2 + √(r² - 1) + sin⁻¹(1/r) with
/// r = beta_next/beta_prev.
pub fn segment_time_limit(beta_prev: f64, beta_next: f64) -> f64 {
    let r = beta_next / beta_prev;
    0.5 * PI + (r * r - 1.0).sqrt() + (1.0 / r).asin()
}

/// Chain n slingshot segments through the given apices (β₀ = 1, β_n = γ).
pub fn multi_switch(spec: &ProblemSpec, betas: &[f64]) -> Result<MultiSwitchPlan> {
    if betas.len() < 2 {
        return Err(Error::InfeasibleSpec("betas needs at least [1, gamma]".into()));
    }
    if (betas[0] - 1.0).abs() > 1e-9 {
        return Err(Error::InfeasibleSpec(format!("beta_0 must be 1, got {}", betas[0])));
    }
    if (betas[betas.len() - 1] - spec.gamma()).abs() > 1e-9 {
        return Err(Error::InfeasibleSpec(format!(
            "beta_n must equal gamma = {}, got {}",
            spec.gamma(),
            betas[betas.len() - 1]
        )));
    }
    for w in betas.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InfeasibleSpec(format!(
                "betas must increase strictly, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    let (v1, v2) = (spec.v1(), spec.v2());
    let mut sched = Schedule::empty();
    let mut total = 0.0;
    for w in betas.windows(2) {
        let (bp, bn) = (w[0], w[1]);
        total += segment_time(bp, bn, spec)?;
        let alpha = 1.0 / (bp * v2.sqrt());
        let (t_exp, t_conf) = arc_pair_times(alpha, bn, v1, v2)?;
        sched.push_merged(0.5 * PI / v2.sqrt(), v2);
        sched.push_merged(t_exp, -v1);
        sched.push_merged(t_conf, v2);
    }
    let n = betas.len() - 1;
    debug_assert!((sched.total_time() - total).abs() < 1e-9 * total.max(1.0));
    Ok(MultiSwitchPlan {
        betas: betas.to_vec(),
        n,
        schedule: sched,
        total_time: total,
        strategy: PlanStrategy::MultiSwitch,
    })
}

/// Geometric apex progression β_i = γ^(i/n) solving the large-v2 first-order
/// conditions β_i² = β_(i-1) β_(i+1).
pub fn optimal_betas_asymptotic(gamma: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|i| gamma.powf(i as f64 / n as f64)).collect()
}

/// Large-v2 minimum of the 2n-switch transfer time:
/// (n/√v2)·[π/2 + √(γ^(2/n) - 1) + sin⁻¹(γ^(-1/n))].
pub fn asymptotic_min_time(gamma: f64, n: usize, v2: f64) -> f64 {
    let r = gamma.powf(1.0 / n as f64);
    n as f64 / v2.sqrt() * (0.5 * PI + (r * r - 1.0).sqrt() + (1.0 / r).asin())
}

fn plan_from_schedule(spec: &ProblemSpec, sched: Schedule, strategy: PlanStrategy) -> MultiSwitchPlan {
    let total = sched.total_time();
    MultiSwitchPlan {
        betas: vec![1.0, spec.gamma()],
        n: 1,
        schedule: sched,
        total_time: total,
        strategy,
    }
}

/// Refine interior apices by cyclic coordinate descent with golden-section
/// line searches, seeded at the geometric progression.
fn refine_betas(spec: &ProblemSpec, betas: &mut [f64]) -> Result<f64> {
    let n = betas.len() - 1;
    let seg = |bp: f64, bn: f64| segment_time(bp, bn, spec).ok();
    let mut total = 0.0;
    for _sweep in 0..30 {
        let mut moved: f64 = 0.0;
        for i in 1..n {
            let (lo, hi) = (betas[i - 1] * (1.0 + 1e-9), betas[i + 1] * (1.0 - 1e-9));
            let (bp, bn) = (betas[i - 1], betas[i + 1]);
            let best = golden_min(
                |b| match (seg(bp, b), seg(b, bn)) {
                    (Some(a), Some(c)) => Some(a + c),
                    _ => None,
                },
                lo,
                hi,
                1e-10,
            );
            moved = moved.max((best - betas[i]).abs());
            betas[i] = best;
        }
        total = betas
            .windows(2)
            .map(|w| segment_time(w[0], w[1], spec))
            .sum::<Result<f64>>()?;
        if moved < 1e-9 {
            break;
        }
    }
    Ok(total)
}

/// Best plan over the considered policy class: one switch, optimized two
/// switch, and 2n-switch plans with numerically refined apices for each
/// n ≤ n_max. Returns the winner plus diagnostics for skipped candidates.
pub fn best_plan(spec: &ProblemSpec, n_max: usize) -> Result<(MultiSwitchPlan, Vec<String>)> {
    if n_max < 1 {
        return Err(Error::Range("n_max must be at least 1".into()));
    }
    let mut skipped = Vec::new();
    let mut candidates: Vec<MultiSwitchPlan> = Vec::new();
    match one_switch(spec) {
        Ok(s) => candidates.push(plan_from_schedule(spec, s, PlanStrategy::OneSwitch)),
        Err(e) => skipped.push(format!("one-switch: {e}")),
    }
    match two_switch_optimal(spec) {
        Ok(s) => {
            let strategy = if s.segments.len() == 2 {
                PlanStrategy::OneSwitch
            } else {
                PlanStrategy::TwoSwitchOptimal
            };
            candidates.push(plan_from_schedule(spec, s, strategy));
        }
        Err(e) => skipped.push(format!("two-switch-optimal: {e}")),
    }
    for n in 1..=n_max {
        let mut betas = optimal_betas_asymptotic(spec.gamma(), n);
        let refined = refine_betas(spec, &mut betas);
        match refined.and_then(|_| multi_switch(spec, &betas)) {
            Ok(plan) => candidates.push(plan),
            Err(e) => skipped.push(format!("multi-switch n={n}: {e}")),
        }
    }
    candidates
        .into_iter()
        .min_by(|a, b| a.total_time.total_cmp(&b.total_time))
        .ok_or_else(|| Error::InfeasibleSpec("no feasible plan for this spec".into()))
        .map(|p| (p, skipped))
}

/// Strategy selector used by sweeps and crossing detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    One,
    TwoIntuitive,
    TwoOptimal,
    /// 2n-switch plan at the geometric apices γ^(i/n).
    Multi(usize),
    /// Global best over the class with the given n_max.
    Best(usize),
}

impl Strategy {
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("multi:") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Range(format!("bad multi segment count in '{s}'")))?;
            if n == 0 {
                return Err(Error::Range("multi:n needs n >= 1".into()));
            }
            return Ok(Strategy::Multi(n));
        }
        if let Some(rest) = s.strip_prefix("best:") {
            let n: usize = rest
                .parse()
                .map_err(|_| Error::Range(format!("bad best n_max in '{s}'")))?;
            if n == 0 {
                return Err(Error::Range("best:n_max needs n_max >= 1".into()));
            }
            return Ok(Strategy::Best(n));
        }
        match s {
            "one" => Ok(Strategy::One),
            "two-intuitive" => Ok(Strategy::TwoIntuitive),
            "two-optimal" => Ok(Strategy::TwoOptimal),
            "best" => Ok(Strategy::Best(3)),
            _ => Err(Error::Range(format!(
                "unknown strategy '{s}' (expected one, two-intuitive, two-optimal, multi:N or best:N)"
            ))),
        }
    }

    pub fn plan(&self, spec: &ProblemSpec) -> Result<MultiSwitchPlan> {
        match self {
            Strategy::One => one_switch(spec).map(|s| plan_from_schedule(spec, s, PlanStrategy::OneSwitch)),
            Strategy::TwoIntuitive => two_switch_intuitive(spec)
                .map(|s| plan_from_schedule(spec, s, PlanStrategy::TwoSwitchIntuitive)),
            Strategy::TwoOptimal => two_switch_optimal(spec).map(|s| {
                let strategy = if s.segments.len() == 2 {
                    PlanStrategy::OneSwitch
                } else {
                    PlanStrategy::TwoSwitchOptimal
                };
                plan_from_schedule(spec, s, strategy)
            }),
            Strategy::Multi(n) => {
                let betas = optimal_betas_asymptotic(spec.gamma(), *n);
                multi_switch(spec, &betas)
            }
            Strategy::Best(n_max) => best_plan(spec, *n_max).map(|(p, _)| p),
        }
    }

    pub fn total_time(&self, spec: &ProblemSpec) -> Result<f64> {
        self.plan(spec).map(|p| p.total_time)
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Strategy::One => write!(f, "one"),
            Strategy::TwoIntuitive => write!(f, "two-intuitive"),
            Strategy::TwoOptimal => write!(f, "two-optimal"),
            Strategy::Multi(n) => write!(f, "multi:{n}"),
            Strategy::Best(n) => write!(f, "best:{n}"),
        }
    }
}

/// First v2 in the bracket at which strategy `b` beats strategy `a` by more
/// than a half-microsecond guard, located by bisection.
///
/// The guard makes one-sided contacts detectable: below the crossing the
/// optimized planner may coincide with `a` exactly, so the raw difference
/// touches zero instead of changing sign.
pub fn crossing_threshold(
    v1: f64,
    gamma: f64,
    a: Strategy,
    b: Strategy,
    bracket: (f64, f64),
) -> Result<f64> {
    const GUARD: f64 = 5e-7;
    let advantage = |v2: f64| -> f64 {
        let Ok(spec) = ProblemSpec::new(v1, v2, gamma) else {
            return f64::NEG_INFINITY;
        };
        let ta = a.total_time(&spec);
        let tb = b.total_time(&spec);
        match (ta, tb) {
            (Ok(ta), Ok(tb)) => ta - tb - GUARD,
            (Err(_), Ok(_)) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        }
    };
    let (mut lo, mut hi) = bracket;
    if !(hi > lo) {
        return Err(Error::Bracket(format!("bad bracket ({lo}, {hi})")));
    }
    let (flo, fhi) = (advantage(lo), advantage(hi));
    if !(flo < 0.0 && fhi > 0.0) {
        return Err(Error::Bracket(format!(
            "no crossing inside ({lo}, {hi}): advantage {flo:.3e} .. {fhi:.3e}"
        )));
    }
    while hi - lo > 1e-7 {
        let mid = 0.5 * (lo + hi);
        if advantage(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
