//! Golden-section search over a bracket.
//!
//! Objectives may return None for infeasible arguments; those evaluate as
//! +inf, so the search slides toward the feasible side of the bracket.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimize `f` on [a, b] to a bracket width of `xtol`; returns the midpoint
/// of the final bracket.
pub(crate) fn golden_min<F>(f: F, mut a: f64, mut b: f64, xtol: f64) -> f64
where
    F: Fn(f64) -> Option<f64>,
{
    let eval = |x: f64| f(x).unwrap_or(f64::INFINITY);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    while b - a > xtol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
        }
    }
    0.5 * (a + b)
}

/// Coarse scan followed by golden refinement around the best grid cell.
///
/// The planners' objectives are not globally unimodal (a boundary minimum and
/// an interior minimum can coexist), so a grid pass picks the basin first.
pub(crate) fn scan_then_golden<F>(f: F, a: f64, b: f64, grid: usize, xtol: f64) -> f64
where
    F: Fn(f64) -> Option<f64>,
{
    let eval = |x: f64| f(x).unwrap_or(f64::INFINITY);
    let mut best_i = 0usize;
    let mut best_v = f64::INFINITY;
    for i in 0..=grid {
        let x = a + (b - a) * i as f64 / grid as f64;
        let v = eval(x);
        if v < best_v {
            best_v = v;
            best_i = i;
        }
    }
    let lo = a + (b - a) * best_i.saturating_sub(1) as f64 / grid as f64;
    let hi = a + (b - a) * (best_i + 1).min(grid) as f64 / grid as f64;
    golden_min(f, lo, hi, xtol)
}
