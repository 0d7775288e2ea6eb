//! C ABI for the trapcool planner and collocation solver.
//!
//! Plans and solutions are held behind opaque handles; every entry point
//! returns a status code from [`TrapcoolStatus`] and writes results through
//! out-pointers. Strings returned by `*_to_json` are heap-allocated and must
//! be released with [`trapcool_string_free`].

use std::ffi::{c_char, c_int, CStr, CString};
use trapcool::bangbang::Strategy;
use trapcool::pseudospectral::solve_spec;
use trapcool::simulator::{simulate_schedule, verify};
use trapcool::{CollocationSolution, Error, MultiSwitchPlan, ProblemSpec};

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrapcoolStatus {
    Ok = 0,
    /// Null pointer, unparsable strategy, index out of range.
    Usage = 1,
    /// Spec invariants violated or a planner left its closed-form domain.
    Infeasible = 2,
    /// The collocation solver hit its iteration cap.
    NoConvergence = 3,
}

fn status_of(err: &Error) -> TrapcoolStatus {
    match err {
        Error::InvalidSpec(_) | Error::InfeasibleSpec(_) | Error::Domain(_) | Error::Bracket(_) => {
            TrapcoolStatus::Infeasible
        }
        Error::NoConvergence(_) | Error::Numeric(_) => TrapcoolStatus::NoConvergence,
        _ => TrapcoolStatus::Usage,
    }
}

/// Opaque bang-bang plan handle.
pub struct TrapcoolPlan {
    spec: ProblemSpec,
    plan: MultiSwitchPlan,
}

/// Opaque collocation solution handle.
pub struct TrapcoolSolution {
    spec: ProblemSpec,
    solution: CollocationSolution,
}

unsafe fn parse_strategy(strategy: *const c_char) -> Result<Strategy, TrapcoolStatus> {
    if strategy.is_null() {
        return Err(TrapcoolStatus::Usage);
    }
    let s = unsafe { CStr::from_ptr(strategy) }
        .to_str()
        .map_err(|_| TrapcoolStatus::Usage)?;
    Strategy::parse(s).map_err(|_| TrapcoolStatus::Usage)
}

/// Synthesize a plan for the spec (v1, v2, gamma) with the named strategy
/// ("one", "two-intuitive", "two-optimal", "multi:N" or "best:NMAX") and
/// store a handle in `out`.
///
/// # Safety
/// `out` must point to writable storage for one pointer; `strategy` must be a
/// valid NUL-terminated string. The handle must be released with
/// [`trapcool_plan_free`].
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_new(
    v1: f64,
    v2: f64,
    gamma: f64,
    strategy: *const c_char,
    out: *mut *mut TrapcoolPlan,
) -> TrapcoolStatus {
    if out.is_null() {
        return TrapcoolStatus::Usage;
    }
    let strat = match unsafe { parse_strategy(strategy) } {
        Ok(s) => s,
        Err(code) => return code,
    };
    let spec = match ProblemSpec::new(v1, v2, gamma) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    match strat.plan(&spec) {
        Ok(plan) => {
            unsafe { *out = Box::into_raw(Box::new(TrapcoolPlan { spec, plan })) };
            TrapcoolStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Total transfer time of the plan; NaN for a null handle.
///
/// # Safety
/// `plan` must be a live handle from [`trapcool_plan_new`] or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_total_time(plan: *const TrapcoolPlan) -> f64 {
    if plan.is_null() {
        return f64::NAN;
    }
    unsafe { &*plan }.plan.total_time
}

/// Number of constant-control segments; 0 for a null handle.
///
/// # Safety
/// `plan` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_segment_count(plan: *const TrapcoolPlan) -> usize {
    if plan.is_null() {
        return 0;
    }
    unsafe { &*plan }.plan.schedule.segments.len()
}

/// Fetch segment `index` as (duration, control value).
///
/// # Safety
/// `plan` must be a live handle; `duration` and `u` must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_segment(
    plan: *const TrapcoolPlan,
    index: usize,
    duration: *mut f64,
    u: *mut f64,
) -> TrapcoolStatus {
    if plan.is_null() || duration.is_null() || u.is_null() {
        return TrapcoolStatus::Usage;
    }
    let handle = unsafe { &*plan };
    let Some(seg) = handle.plan.schedule.segments.get(index) else {
        return TrapcoolStatus::Usage;
    };
    unsafe {
        *duration = seg.duration;
        *u = seg.u;
    }
    TrapcoolStatus::Ok
}

/// Simulate the plan and check it reaches (gamma, 0): endpoint errors are
/// written to `err_x1`/`err_x2` (either may be null). Returns `Ok` when the
/// plan verifies within `tol`.
///
/// # Safety
/// `plan` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_verify(
    plan: *const TrapcoolPlan,
    tol: f64,
    err_x1: *mut f64,
    err_x2: *mut f64,
) -> TrapcoolStatus {
    if plan.is_null() {
        return TrapcoolStatus::Usage;
    }
    let handle = unsafe { &*plan };
    let traj = match simulate_schedule(&handle.spec, &handle.plan.schedule) {
        Ok(t) => t,
        Err(e) => return status_of(&e),
    };
    let report = verify(&traj, &handle.spec, tol);
    if !err_x1.is_null() {
        unsafe { *err_x1 = report.endpoint_error.0 };
    }
    if !err_x2.is_null() {
        unsafe { *err_x2 = report.endpoint_error.1 };
    }
    if report.feasible {
        TrapcoolStatus::Ok
    } else {
        TrapcoolStatus::Infeasible
    }
}

/// JSON plan document (spec, strategy, betas, segments, total time); caller
/// frees with [`trapcool_string_free`]. Null on failure.
///
/// # Safety
/// `plan` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_to_json(plan: *const TrapcoolPlan) -> *mut c_char {
    if plan.is_null() {
        return std::ptr::null_mut();
    }
    let handle = unsafe { &*plan };
    let doc = trapcool::cli::PlanDocument::new(handle.spec, &handle.plan);
    serde_json::to_string(&doc)
        .ok()
        .and_then(|s| CString::new(s).ok())
        .map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Release a plan handle. Null is a no-op.
///
/// # Safety
/// `plan` must come from [`trapcool_plan_new`] and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn trapcool_plan_free(plan: *mut TrapcoolPlan) {
    if !plan.is_null() {
        drop(unsafe { Box::from_raw(plan) });
    }
}

/// Solve the order-`n` collocation problem for the spec; `m_slope <= 0` or
/// infinity disables the slope restriction. On success stores a solution
/// handle in `out`; a non-converged solve stores the handle and returns
/// `NoConvergence`.
///
/// # Safety
/// `out` must point to writable storage for one pointer; release the handle
/// with [`trapcool_solution_free`].
#[no_mangle]
pub unsafe extern "C" fn trapcool_collocate(
    v1: f64,
    v2: f64,
    gamma: f64,
    n: usize,
    m_slope: f64,
    out: *mut *mut TrapcoolSolution,
) -> TrapcoolStatus {
    if out.is_null() {
        return TrapcoolStatus::Usage;
    }
    let spec = match ProblemSpec::new(v1, v2, gamma) {
        Ok(s) => s,
        Err(e) => return status_of(&e),
    };
    let m = if m_slope.is_finite() && m_slope > 0.0 { Some(m_slope) } else { None };
    match solve_spec(&spec, n, m, None) {
        Ok(solution) => {
            let converged = solution.converged;
            unsafe { *out = Box::into_raw(Box::new(TrapcoolSolution { spec, solution })) };
            if converged {
                TrapcoolStatus::Ok
            } else {
                TrapcoolStatus::NoConvergence
            }
        }
        Err(e) => status_of(&e),
    }
}

/// Solved transfer time; NaN for a null handle.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_t_f(sol: *const TrapcoolSolution) -> f64 {
    if sol.is_null() {
        return f64::NAN;
    }
    unsafe { &*sol }.solution.t_f
}

/// Largest remaining constraint violation; NaN for a null handle.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_residual(sol: *const TrapcoolSolution) -> f64 {
    if sol.is_null() {
        return f64::NAN;
    }
    unsafe { &*sol }.solution.residuals
}

/// 1 when the solve met its tolerances, 0 otherwise.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_converged(sol: *const TrapcoolSolution) -> c_int {
    if sol.is_null() {
        return 0;
    }
    c_int::from(unsafe { &*sol }.solution.converged)
}

/// Number of grid nodes (order + 1); 0 for a null handle.
///
/// # Safety
/// `sol` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_node_count(sol: *const TrapcoolSolution) -> usize {
    if sol.is_null() {
        return 0;
    }
    unsafe { &*sol }.solution.grid.nodes.len()
}

/// Fetch node `index`: LGL coordinate, mapped time and nodal (x1, x2, u).
/// Null out-pointers are skipped.
///
/// # Safety
/// `sol` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_node(
    sol: *const TrapcoolSolution,
    index: usize,
    node: *mut f64,
    t_mapped: *mut f64,
    x1: *mut f64,
    x2: *mut f64,
    u: *mut f64,
) -> TrapcoolStatus {
    if sol.is_null() {
        return TrapcoolStatus::Usage;
    }
    let handle = unsafe { &*sol };
    let s = &handle.solution;
    if index >= s.grid.nodes.len() {
        return TrapcoolStatus::Usage;
    }
    unsafe {
        if !node.is_null() {
            *node = s.grid.nodes[index];
        }
        if !t_mapped.is_null() {
            *t_mapped = 0.5 * (s.grid.nodes[index] + 1.0) * s.t_f;
        }
        if !x1.is_null() {
            *x1 = s.x1[index];
        }
        if !x2.is_null() {
            *x2 = s.x2[index];
        }
        if !u.is_null() {
            *u = s.u[index];
        }
    }
    TrapcoolStatus::Ok
}

/// Endpoint error of resimulating the interpolated control through the RK4
/// integrator, written to `err_x1`/`err_x2`.
///
/// # Safety
/// `sol` must be a live handle; non-null out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_resimulate(
    sol: *const TrapcoolSolution,
    err_x1: *mut f64,
    err_x2: *mut f64,
) -> TrapcoolStatus {
    if sol.is_null() {
        return TrapcoolStatus::Usage;
    }
    let handle = unsafe { &*sol };
    match trapcool::pseudospectral::resimulate(&handle.spec, &handle.solution, 20_000) {
        Ok((e1, e2)) => {
            if !err_x1.is_null() {
                unsafe { *err_x1 = e1 };
            }
            if !err_x2.is_null() {
                unsafe { *err_x2 = e2 };
            }
            TrapcoolStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a solution handle. Null is a no-op.
///
/// # Safety
/// `sol` must come from [`trapcool_collocate`] and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn trapcool_solution_free(sol: *mut TrapcoolSolution) {
    if !sol.is_null() {
        drop(unsafe { Box::from_raw(sol) });
    }
}

/// First v2 in (lo, hi) at which strategy `b` beats strategy `a` for fixed
/// v1 and gamma; written to `out`.
///
/// # Safety
/// `a` and `b` must be valid NUL-terminated strategy names; `out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn trapcool_crossing_threshold(
    v1: f64,
    gamma: f64,
    a: *const c_char,
    b: *const c_char,
    lo: f64,
    hi: f64,
    out: *mut f64,
) -> TrapcoolStatus {
    if out.is_null() {
        return TrapcoolStatus::Usage;
    }
    let (sa, sb) = match (unsafe { parse_strategy(a) }, unsafe { parse_strategy(b) }) {
        (Ok(x), Ok(y)) => (x, y),
        _ => return TrapcoolStatus::Usage,
    };
    match trapcool::bangbang::crossing_threshold(v1, gamma, sa, sb, (lo, hi)) {
        Ok(v) => {
            unsafe { *out = v };
            TrapcoolStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Release a string returned by this library. Null is a no-op.
///
/// # Safety
/// `s` must come from a `*_to_json` call and not already be freed.
#[no_mangle]
pub unsafe extern "C" fn trapcool_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_lifecycle_through_the_c_surface() {
        let strategy = CString::new("two-optimal").unwrap();
        let mut plan: *mut TrapcoolPlan = std::ptr::null_mut();
        let code = unsafe { trapcool_plan_new(1.0, 8.0, 10.0, strategy.as_ptr(), &mut plan) };
        assert_eq!(code, TrapcoolStatus::Ok);
        assert!(!plan.is_null());

        let total = unsafe { trapcool_plan_total_time(plan) };
        assert!((total - 2.585_087_929_0).abs() < 1e-6);
        assert_eq!(unsafe { trapcool_plan_segment_count(plan) }, 3);

        let (mut d, mut u) = (0.0, 0.0);
        assert_eq!(
            unsafe { trapcool_plan_segment(plan, 1, &mut d, &mut u) },
            TrapcoolStatus::Ok
        );
        assert!((u + 1.0).abs() < 1e-12);
        assert_eq!(
            unsafe { trapcool_plan_segment(plan, 9, &mut d, &mut u) },
            TrapcoolStatus::Usage
        );

        let (mut e1, mut e2) = (f64::NAN, f64::NAN);
        assert_eq!(
            unsafe { trapcool_plan_verify(plan, 1e-6, &mut e1, &mut e2) },
            TrapcoolStatus::Ok
        );
        assert!(e1 < 1e-6 && e2 < 1e-6);

        let json = unsafe { trapcool_plan_to_json(plan) };
        assert!(!json.is_null());
        let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
        assert!(text.contains("\"two-optimal\""));
        unsafe { trapcool_string_free(json) };
        unsafe { trapcool_plan_free(plan) };
    }

    #[test]
    fn invalid_inputs_map_to_status_codes() {
        let strategy = CString::new("one").unwrap();
        let mut plan: *mut TrapcoolPlan = std::ptr::null_mut();
        assert_eq!(
            unsafe { trapcool_plan_new(1.0, 0.5, 10.0, strategy.as_ptr(), &mut plan) },
            TrapcoolStatus::Infeasible
        );
        let bad = CString::new("warp-drive").unwrap();
        assert_eq!(
            unsafe { trapcool_plan_new(1.0, 3.0, 10.0, bad.as_ptr(), &mut plan) },
            TrapcoolStatus::Usage
        );
        assert_eq!(
            unsafe { trapcool_plan_new(1.0, 3.0, 10.0, strategy.as_ptr(), std::ptr::null_mut()) },
            TrapcoolStatus::Usage
        );
        assert!(unsafe { trapcool_plan_total_time(std::ptr::null()) }.is_nan());
        unsafe { trapcool_plan_free(std::ptr::null_mut()) };
    }

    #[test]
    fn collocation_through_the_c_surface() {
        let mut sol: *mut TrapcoolSolution = std::ptr::null_mut();
        let code = unsafe { trapcool_collocate(1.0, 3.0, 10.0, 12, f64::INFINITY, &mut sol) };
        assert_eq!(code, TrapcoolStatus::Ok);
        assert_eq!(unsafe { trapcool_solution_converged(sol) }, 1);
        assert!(unsafe { trapcool_solution_residual(sol) } < 1e-6);
        assert_eq!(unsafe { trapcool_solution_node_count(sol) }, 13);
        let tf = unsafe { trapcool_solution_t_f(sol) };
        assert!(tf > 2.0 && tf < 4.0);

        let (mut node, mut tm, mut x1, mut x2, mut u) = (0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(
            unsafe { trapcool_solution_node(sol, 0, &mut node, &mut tm, &mut x1, &mut x2, &mut u) },
            TrapcoolStatus::Ok
        );
        assert_eq!((node, tm, x1, x2, u), (-1.0, 0.0, 1.0, 0.0, 1.0));
        assert_eq!(
            unsafe { trapcool_solution_node(sol, 12, &mut node, &mut tm, &mut x1, &mut x2, &mut u) },
            TrapcoolStatus::Ok
        );
        assert!((x1 - 10.0).abs() < 1e-12 && (u - 1e-4).abs() < 1e-12);

        let (mut e1, mut e2) = (f64::NAN, f64::NAN);
        assert_eq!(
            unsafe { trapcool_solution_resimulate(sol, &mut e1, &mut e2) },
            TrapcoolStatus::Ok
        );
        assert!(e1 < 1e-2 && e2 < 1e-2, "closure ({e1}, {e2})");
        unsafe { trapcool_solution_free(sol) };
    }

    #[test]
    fn crossing_through_the_c_surface() {
        let a = CString::new("one").unwrap();
        let b = CString::new("two-intuitive").unwrap();
        let mut v2 = f64::NAN;
        let code = unsafe {
            trapcool_crossing_threshold(1.0, 10.0, a.as_ptr(), b.as_ptr(), 2.0, 20.0, &mut v2)
        };
        assert_eq!(code, TrapcoolStatus::Ok);
        assert!((v2 - 6.786).abs() < 0.01);
        // no sign change in the bracket
        let code = unsafe {
            trapcool_crossing_threshold(1.0, 10.0, a.as_ptr(), b.as_ptr(), 10.0, 20.0, &mut v2)
        };
        assert_eq!(code, TrapcoolStatus::Infeasible);
    }
}
