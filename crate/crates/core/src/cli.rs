//! Command-line front end: planning, simulating, collocating, sweeping and
//! reproduction reports.
//!
//! Exit codes: 0 success, 1 usage error, 2 infeasible spec, 3 solver
//! non-convergence.

use crate::bangbang::{
    asymptotic_min_time, best_plan, crossing_threshold, two_switch_optimal, MultiSwitchPlan,
    PlanStrategy, Schedule, Segment, Strategy,
};
use crate::model::{Error, ProblemSpec, Result};
use crate::pseudospectral::{resimulate, runge_demo, solve_spec};
use crate::simulator::{simulate_schedule, verify};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::io::Read;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

#[derive(Parser, Debug)]
#[command(name = "trapcool", version, about = "Time-optimal harmonic-trap expansion planner")]
struct Cli {
    /// JSON run configuration; used when no subcommand is given.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Synthesize a bang-bang plan and print it as JSON.
    Plan(PlanArgs),
    /// Simulate a JSON plan (stdin or --plan) and export the trajectory CSV.
    Simulate(SimulateArgs),
    /// Solve the collocation NLP and export nodal values plus a JSON sidecar.
    Collocate(CollocateArgs),
    /// Tabulate transfer times over a v2 range for several strategies.
    Sweep(SweepArgs),
    /// Compare uniform and LGL interpolation error for 1/(16x²+1).
    RungeDemo(RungeArgs),
    /// Run a named reproduction check and print measured vs expected.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug, Clone)]
struct SpecArgs {
    #[arg(long)]
    v1: f64,
    #[arg(long)]
    v2: f64,
    #[arg(long)]
    gamma: f64,
}

impl SpecArgs {
    fn build(&self) -> Result<ProblemSpec> {
        ProblemSpec::new(self.v1, self.v2, self.gamma)
    }
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// one | two-intuitive | two-optimal | multi:N | best:NMAX
    #[arg(long, default_value = "best:3")]
    strategy: String,
    /// Write the plan here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json (plan document) or csv (segment table).
    #[arg(long, default_value = "json")]
    format: String,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Plan document path; stdin when omitted.
    #[arg(long)]
    plan: Option<PathBuf>,
    /// Verification tolerance on the endpoint.
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    /// Also cross-check the exact arcs against an RK4 run with this many steps.
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CollocateArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Collocation order.
    #[arg(long = "N", default_value_t = 24)]
    n: usize,
    /// Slope bound; "inf" disables the restriction.
    #[arg(long = "M", default_value = "inf")]
    m: String,
    /// Strategy used to seed the solver.
    #[arg(long, default_value = "best:3")]
    strategy: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long)]
    v1: f64,
    #[arg(long)]
    gamma: f64,
    /// start:stop:step, inclusive of start.
    #[arg(long = "v2-range")]
    v2_range: String,
    /// Comma-separated strategy list.
    #[arg(long, default_value = "one,two-optimal")]
    strategies: String,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RungeArgs {
    #[arg(long = "N", default_value_t = 16)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ReproduceArgs {
    /// fig3-crossing | opt-crossing | fig7c-argmin | fig7d-crossing |
    /// fig8 | fig9 | runge | all
    case: String,
}

/// JSON mirror of one CLI invocation.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: String,
    #[serde(default)]
    pub spec: Option<ProblemSpec>,
    #[serde(default)]
    pub strategy: Option<String>,
    #[serde(default, rename = "N")]
    pub n: Option<usize>,
    #[serde(default, rename = "M")]
    pub m: Option<f64>,
    #[serde(default)]
    pub steps: Option<usize>,
    #[serde(default)]
    pub v2_range: Option<String>,
    #[serde(default)]
    pub strategies: Option<String>,
    #[serde(default)]
    pub jobs: Option<usize>,
    #[serde(default)]
    pub case: Option<String>,
    #[serde(default)]
    pub plan: Option<PathBuf>,
    #[serde(default)]
    pub output_path: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<String>,
}

/// Serialized plan: spec alongside the schedule so a plan file is
/// self-contained for `simulate`.
#[derive(Debug, Serialize, Deserialize)]
pub struct PlanDocument {
    pub spec: ProblemSpec,
    pub strategy: PlanStrategy,
    pub betas: Vec<f64>,
    pub n: usize,
    pub segments: Vec<Segment>,
    pub total_time: f64,
}

impl PlanDocument {
    pub fn new(spec: ProblemSpec, plan: &MultiSwitchPlan) -> Self {
        Self {
            spec,
            strategy: plan.strategy,
            betas: plan.betas.clone(),
            n: plan.n,
            segments: plan.schedule.segments.clone(),
            total_time: plan.total_time,
        }
    }

    pub fn schedule(&self) -> Schedule {
        Schedule { segments: self.segments.clone() }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InvalidSpec(_) | Error::InfeasibleSpec(_) | Error::Domain(_) | Error::Bracket(_) => 2,
        Error::NoConvergence(_) | Error::Numeric(_) => 3,
        _ => 1,
    }
}

/// Entry point; returns the process exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are successful exits
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match (cli.command, cli.config) {
        (Some(cmd), _) => dispatch(cmd),
        (None, Some(path)) => run_config_file(&path),
        (None, None) => {
            eprintln!("error: expected a subcommand or --config FILE (see --help)");
            return 1;
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn run_config_file(path: &Path) -> Result<i32> {
    let text = std::fs::read_to_string(path)?;
    let cfg: RunConfig = serde_json::from_str(&text)?;
    let need_spec = || {
        cfg.spec
            .ok_or_else(|| Error::Range(format!("config command '{}' needs a spec", cfg.command)))
    };
    let cmd = match cfg.command.as_str() {
        "plan" => Command::Plan(PlanArgs {
            spec: spec_args(need_spec()?),
            strategy: cfg.strategy.clone().unwrap_or_else(|| "best:3".into()),
            out: cfg.output_path.clone(),
            format: cfg.format.clone().unwrap_or_else(|| "json".into()),
        }),
        "simulate" => Command::Simulate(SimulateArgs {
            plan: cfg.plan.clone(),
            tol: 1e-6,
            steps: cfg.steps,
            out: cfg.output_path.clone(),
        }),
        "collocate" => Command::Collocate(CollocateArgs {
            spec: spec_args(need_spec()?),
            n: cfg.n.unwrap_or(24),
            m: cfg.m.map_or_else(|| "inf".to_string(), |m| m.to_string()),
            strategy: cfg.strategy.clone().unwrap_or_else(|| "best:3".into()),
            out: cfg.output_path.clone(),
        }),
        "sweep" => {
            let spec = need_spec()?;
            Command::Sweep(SweepArgs {
                v1: spec.v1(),
                gamma: spec.gamma(),
                v2_range: cfg
                    .v2_range
                    .clone()
                    .ok_or_else(|| Error::Range("sweep config needs v2_range".into()))?,
                strategies: cfg.strategies.clone().unwrap_or_else(|| "one,two-optimal".into()),
                jobs: cfg.jobs.unwrap_or(1),
                out: cfg.output_path.clone(),
            })
        }
        "runge-demo" => Command::RungeDemo(RungeArgs { n: cfg.n.unwrap_or(16), out: cfg.output_path.clone() }),
        "reproduce" => Command::Reproduce(ReproduceArgs {
            case: cfg
                .case
                .clone()
                .ok_or_else(|| Error::Range("reproduce config needs a case".into()))?,
        }),
        other => return Err(Error::Range(format!("unknown config command '{other}'"))),
    };
    dispatch(cmd)
}

fn spec_args(spec: ProblemSpec) -> SpecArgs {
    SpecArgs { v1: spec.v1(), v2: spec.v2(), gamma: spec.gamma() }
}

fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Plan(a) => cmd_plan(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Collocate(a) => cmd_collocate(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::RungeDemo(a) => cmd_runge(&a),
        Command::Reproduce(a) => cmd_reproduce(&a),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn cmd_plan(args: &PlanArgs) -> Result<i32> {
    let spec = args.spec.build()?;
    let strategy = Strategy::parse(&args.strategy)?;
    let plan = strategy.plan(&spec)?;
    let content = match args.format.as_str() {
        "json" => {
            let doc = PlanDocument::new(spec, &plan);
            format!("{}\n", serde_json::to_string_pretty(&doc)?)
        }
        "csv" => {
            let mut buf = Vec::new();
            plan.schedule.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("csv is utf-8")
        }
        other => return Err(Error::Range(format!("unknown format '{other}'"))),
    };
    write_output(&args.out, &content)?;
    eprintln!("strategy {} total_time {:.6}", plan.strategy, plan.total_time);
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let text = match &args.plan {
        Some(path) => std::fs::read_to_string(path)?,
        None => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    let doc: PlanDocument = serde_json::from_str(&text)?;
    let schedule = doc.schedule();
    let traj = simulate_schedule(&doc.spec, &schedule)?;
    let mut buf = Vec::new();
    traj.write_csv(&mut buf)?;
    write_output(&args.out, &String::from_utf8(buf).expect("csv is utf-8"))?;
    if let Some(steps) = args.steps {
        // independent route: piecewise-constant control through the RK4
        // reference integrator
        let segments = doc.segments.clone();
        let control = move |t: f64| {
            let mut acc = 0.0;
            for seg in &segments {
                acc += seg.duration;
                if t <= acc {
                    return seg.u;
                }
            }
            segments.last().map_or(1.0, |s| s.u)
        };
        let rk = crate::simulator::integrate(&doc.spec, control, schedule.total_time(), steps)?;
        let (a, b) = (traj.end_state().unwrap(), rk.end_state().unwrap());
        eprintln!(
            "rk4 cross-check ({steps} steps): endpoint gap ({:.3e}, {:.3e})",
            (a.x1 - b.x1).abs(),
            (a.x2 - b.x2).abs()
        );
    }
    let report = verify(&traj, &doc.spec, args.tol);
    eprintln!(
        "endpoint_error ({:.6e}, {:.6e}) max_invariant_drift {:.6e} feasible {}",
        report.endpoint_error.0, report.endpoint_error.1, report.max_invariant_drift, report.feasible
    );
    for v in &report.violations {
        eprintln!("violation: {v}");
    }
    Ok(if report.feasible { 0 } else { 2 })
}

fn parse_slope(m: &str) -> Result<Option<f64>> {
    match m {
        "inf" | "unbounded" | "none" => Ok(None),
        other => {
            let v: f64 = other
                .parse()
                .map_err(|_| Error::Range(format!("bad slope bound '{other}'")))?;
            if !(v > 0.0) {
                return Err(Error::Range(format!("slope bound must be positive, got {v}")));
            }
            Ok(Some(v))
        }
    }
}

fn cmd_collocate(args: &CollocateArgs) -> Result<i32> {
    let spec = args.spec.build()?;
    let m = parse_slope(&args.m)?;
    let strategy = Strategy::parse(&args.strategy)?;
    let plan = strategy.plan(&spec)?;
    let sol = solve_spec(&spec, args.n, m, Some(&plan.schedule))?;
    let mut buf = Vec::new();
    sol.write_csv(&mut buf)?;
    write_output(&args.out, &String::from_utf8(buf).expect("csv is utf-8"))?;
    let sidecar = format!("{}\n", serde_json::to_string_pretty(&sol.sidecar_json())?);
    match &args.out {
        Some(path) => {
            let mut sidecar_path = path.clone().into_os_string();
            sidecar_path.push(".json");
            std::fs::write(sidecar_path, sidecar)?;
        }
        None => eprint!("{sidecar}"),
    }
    if !sol.converged {
        eprintln!("solver did not converge: residual {:.3e}", sol.residuals);
        return Ok(3);
    }
    Ok(0)
}

fn parse_range(range: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = range.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Range(format!("v2 range must be start:stop:step, got '{range}'")));
    }
    let start: f64 = parts[0].parse().map_err(|_| Error::Range("bad range start".into()))?;
    let stop: f64 = parts[1].parse().map_err(|_| Error::Range("bad range stop".into()))?;
    let step: f64 = parts[2].parse().map_err(|_| Error::Range("bad range step".into()))?;
    if !(step > 0.0) || stop < start {
        return Err(Error::Range(format!("bad v2 range '{range}'")));
    }
    let mut points = Vec::new();
    let mut i = 0u64;
    loop {
        let v = start + step * i as f64;
        if v > stop + 0.5 * step {
            break;
        }
        points.push(v);
        i += 1;
    }
    Ok(points)
}

fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let strategies: Vec<Strategy> = args
        .strategies
        .split(',')
        .map(Strategy::parse)
        .collect::<Result<_>>()?;
    if strategies.is_empty() {
        return Err(Error::Range("no strategies given".into()));
    }
    let points = parse_range(&args.v2_range)?;
    let jobs = args.jobs.max(1);
    let v1 = args.v1;
    let gamma = args.gamma;
    let rows: Mutex<Vec<(usize, Vec<f64>)>> = Mutex::new(Vec::with_capacity(points.len()));
    let cursor = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..jobs {
            scope.spawn(|| loop {
                let i = cursor.fetch_add(1, Ordering::Relaxed);
                if i >= points.len() {
                    break;
                }
                let v2 = points[i];
                let times: Vec<f64> = strategies
                    .iter()
                    .map(|s| {
                        ProblemSpec::new(v1, v2, gamma)
                            .and_then(|spec| s.total_time(&spec))
                            .unwrap_or(f64::NAN)
                    })
                    .collect();
                rows.lock().unwrap().push((i, times));
            });
        }
    });
    let mut rows = rows.into_inner().unwrap();
    rows.sort_by_key(|(i, _)| *i);
    let mut out = String::new();
    out.push_str("v2");
    for s in &strategies {
        out.push_str(&format!(",{s}"));
    }
    out.push('\n');
    for (i, times) in rows {
        out.push_str(&format!("{:.16e}", points[i]));
        for t in times {
            if t.is_nan() {
                out.push_str(",nan");
            } else {
                out.push_str(&format!(",{t:.16e}"));
            }
        }
        out.push('\n');
    }
    write_output(&args.out, &out)?;
    Ok(0)
}

fn cmd_runge(args: &RungeArgs) -> Result<i32> {
    let demo = runge_demo(args.n)?;
    let content = format!(
        "N,max_err_uniform,max_err_lgl\n{},{:.16e},{:.16e}\n",
        demo.order, demo.max_err_uniform, demo.max_err_lgl
    );
    write_output(&args.out, &content)?;
    Ok(0)
}

struct Check {
    label: String,
    measured: f64,
    expected: f64,
    source: &'static str,
    tol: f64,
    pass: bool,
}

impl Check {
    fn within(label: &str, measured: f64, expected: f64, tol: f64, source: &'static str) -> Self {
        Self {
            label: label.to_string(),
            measured,
            expected,
            source,
            tol,
            pass: (measured - expected).abs() <= tol,
        }
    }

    fn bound(label: &str, measured: f64, bound: f64, source: &'static str, pass: bool) -> Self {
        Self { label: label.to_string(), measured, expected: bound, source, tol: f64::NAN, pass }
    }

    fn print(&self) {
        let tol = if self.tol.is_nan() {
            String::from("-")
        } else {
            format!("{:.3e}", self.tol)
        };
        println!(
            "{:<26} measured {:<22.10} expected {:<18.10} ({}) tol {} {}",
            self.label,
            self.measured,
            self.expected,
            self.source,
            tol,
            if self.pass { "PASS" } else { "FAIL" }
        );
    }
}

fn reproduce_case(case: &str) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    match case {
        "fig3-crossing" => {
            let x = crossing_threshold(1.0, 10.0, Strategy::One, Strategy::TwoIntuitive, (2.0, 20.0))?;
            checks.push(Check::within("fig3-crossing v2*", x, 6.786, 0.01, "reference"));
        }
        "opt-crossing" => {
            let x = crossing_threshold(1.0, 10.0, Strategy::One, Strategy::TwoOptimal, (2.0, 20.0))?;
            checks.push(Check::within("opt-crossing v2*", x, 6.763, 0.01, "reference"));
            let below = ProblemSpec::new(1.0, 6.0, 10.0)?;
            let plan = two_switch_optimal(&below)?;
            let t1 = if (plan.segments[0].u - below.v2()).abs() < 1e-9 {
                plan.segments[0].duration
            } else {
                0.0
            };
            checks.push(Check::within("opt t1 below crossing", t1, 0.0, 1e-4, "reference"));
        }
        "fig7c-argmin" => {
            let argmin = |g: f64| {
                (1..=10usize)
                    .min_by(|a, b| {
                        asymptotic_min_time(g, *a, 1.0).total_cmp(&asymptotic_min_time(g, *b, 1.0))
                    })
                    .unwrap()
            };
            let n10 = argmin(10.0);
            let n50 = argmin(50.0);
            checks.push(Check::within("argmin n at gamma=10", n10 as f64, 2.0, 0.0, "reference"));
            checks.push(Check::bound(
                "argmin shift at gamma=50",
                n50 as f64,
                n10 as f64,
                "reference",
                n50 > n10,
            ));
        }
        "fig7d-crossing" => {
            let x = crossing_threshold(1.0, 10.0, Strategy::Multi(1), Strategy::Multi(2), (20.0, 60.0))?;
            checks.push(Check::within("fig7d-crossing v2*", x, 43.32, 0.05, "reference"));
        }
        "fig8" | "fig9" => {
            let v2 = if case == "fig8" { 3.0 } else { 8.0 };
            let spec = ProblemSpec::new(1.0, v2, 10.0)?;
            let (bb, _) = best_plan(&spec, 3)?;
            let free = solve_spec(&spec, 24, None, Some(&bb.schedule))?;
            checks.push(Check::bound(
                &format!("{case} free t_f vs bang-bang"),
                free.t_f / bb.total_time,
                1.02,
                "derived",
                free.converged && (free.t_f / bb.total_time - 1.0).abs() <= 0.02,
            ));
            let (e1, e2) = resimulate(&spec, &free, 20_000)?;
            checks.push(Check::bound(
                &format!("{case} closure error"),
                e1.max(e2),
                1e-3,
                "derived",
                e1 < 1e-3 && e2 < 1e-3,
            ));
            let bounded = solve_spec(&spec, 24, Some(10.0), Some(&bb.schedule))?;
            checks.push(Check::bound(
                &format!("{case} slope-limited t_f"),
                bounded.t_f,
                free.t_f,
                "reference",
                bounded.converged && bounded.t_f > free.t_f,
            ));
        }
        "runge" => {
            let d = runge_demo(16)?;
            let ratio = d.max_err_uniform / d.max_err_lgl;
            checks.push(Check::bound("runge error ratio N=16", ratio, 10.0, "derived", ratio >= 10.0));
        }
        other => {
            return Err(Error::Range(format!(
                "unknown case '{other}' (expected fig3-crossing, opt-crossing, fig7c-argmin, fig7d-crossing, fig8, fig9, runge or all)"
            )))
        }
    }
    Ok(checks)
}

fn cmd_reproduce(args: &ReproduceArgs) -> Result<i32> {
    let cases: Vec<&str> = if args.case == "all" {
        vec![
            "fig3-crossing",
            "opt-crossing",
            "fig7c-argmin",
            "fig7d-crossing",
            "fig8",
            "fig9",
            "runge",
        ]
    } else {
        vec![args.case.as_str()]
    };
    let mut all_pass = true;
    for case in cases {
        for check in reproduce_case(case)? {
            check.print();
            all_pass &= check.pass;
        }
    }
    Ok(if all_pass { 0 } else { 1 })
}
