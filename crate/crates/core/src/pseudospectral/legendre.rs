//! Legendre polynomials, LGL grids, the differentiation matrix and Lagrange
//! interpolation on LGL nodes.

use crate::model::{Error, Result};

/// Value and derivative of the order-N Legendre polynomial via the Bonnet
/// three-term recurrence.
pub fn legendre_pair(n: usize, t: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = t;
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * t * cur - k as f64 * prev) / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    let deriv = if (t.abs() - 1.0).abs() < 1e-14 {
        // L'_N(±1) = (±1)^(N+1) N(N+1)/2
        let sign = if t > 0.0 || n % 2 == 1 { 1.0 } else { -1.0 };
        sign * (n * (n + 1)) as f64 / 2.0
    } else {
        n as f64 * (t * cur - prev) / (t * t - 1.0)
    };
    (cur, deriv)
}

/// Legendre-Gauss-Lobatto grid of order N with its differentiation matrix.
#[derive(Debug, Clone)]
pub struct LglGrid {
    /// Polynomial order N ≥ 2; the grid has N+1 nodes.
    pub order: usize,
    /// Nodes in [-1, 1]: the endpoints plus the roots of L'_N, increasing.
    pub nodes: Vec<f64>,
    /// (N+1)×(N+1) differentiation matrix, row-major.
    pub d: Vec<f64>,
}

impl LglGrid {
    pub fn new(order: usize) -> Result<Self> {
        let nodes = lgl_nodes(order)?;
        let d = differentiation_matrix(&nodes);
        Ok(Self { order, nodes, d })
    }

    pub fn d_at(&self, i: usize, k: usize) -> f64 {
        self.d[i * (self.order + 1) + k]
    }

    /// D x for a vector of nodal values.
    pub fn apply_d(&self, x: &[f64]) -> Vec<f64> {
        let n = self.order + 1;
        let mut out = vec![0.0; n];
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.d[i * n..(i + 1) * n];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
        out
    }
}

/// LGL nodes: ±1 plus the interior roots of L'_N, found by Newton iteration
/// from Chebyshev-Gauss-Lobatto guesses -cos(πi/N).
pub fn lgl_nodes(n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Range(format!("LGL order must be at least 2, got {n}")));
    }
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(-1.0);
    for i in 1..n {
        let mut x = -(std::f64::consts::PI * i as f64 / n as f64).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (l, dl) = legendre_pair(n, x);
            // Legendre ODE: (1-t²) L'' = 2t L' - N(N+1) L
            let d2 = (2.0 * x * dl - (n * (n + 1)) as f64 * l) / (1.0 - x * x);
            let step = dl / d2;
            x -= step;
            if step.abs() < 1e-15 {
                converged = true;
                break;
            }
        }
        let (_, dl) = legendre_pair(n, x);
        // residual scaled by the endpoint derivative magnitude N(N+1)/2
        if !converged && dl.abs() > 1e-13 * (n * (n + 1)) as f64 / 2.0 {
            return Err(Error::Numeric(format!(
                "LGL node {i} of order {n} did not converge (L'_N = {dl:.3e})"
            )));
        }
        nodes.push(x);
    }
    nodes.push(1.0);
    nodes.sort_by(f64::total_cmp);
    Ok(nodes)
}

/// Differentiation matrix on LGL nodes: off-diagonal L_N(t_i)/(L_N(t_k)(t_i - t_k)),
/// corners ∓N(N+1)/4, remaining diagonal zero.
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len() - 1;
    let l: Vec<f64> = nodes.iter().map(|&t| legendre_pair(n, t).0).collect();
    let mut d = vec![0.0; (n + 1) * (n + 1)];
    for i in 0..=n {
        for k in 0..=n {
            if i != k {
                d[i * (n + 1) + k] = l[i] / (l[k] * (nodes[i] - nodes[k]));
            }
        }
    }
    d[0] = -((n * (n + 1)) as f64) / 4.0;
    d[n * (n + 1) + n] = (n * (n + 1)) as f64 / 4.0;
    d
}

/// Evaluate the Lagrange interpolant through (nodes, values) at `t` using the
/// closed form ℓ_k(t) = (t²-1) L'_N(t) / (N(N+1) L_N(t_k) (t - t_k)), with a
/// removable-singularity guard at the nodes.
pub fn interpolate(grid: &LglGrid, values: &[f64], t: f64) -> f64 {
    let n = grid.order;
    debug_assert_eq!(values.len(), n + 1);
    for (k, &tk) in grid.nodes.iter().enumerate() {
        if (t - tk).abs() < 1e-13 {
            return values[k];
        }
    }
    let (_, dl) = legendre_pair(n, t);
    let front = (t * t - 1.0) * dl / (n * (n + 1)) as f64;
    grid.nodes
        .iter()
        .zip(values)
        .map(|(&tk, &vk)| {
            let lk = legendre_pair(n, tk).0;
            front / (lk * (t - tk)) * vk
        })
        .sum()
}

/// Barycentric Lagrange interpolation on an arbitrary grid (used for the
/// uniform-grid side of the Runge comparison).
pub fn barycentric(xs: &[f64], ys: &[f64], t: f64) -> f64 {
    let mut weights = vec![1.0; xs.len()];
    for j in 0..xs.len() {
        for k in 0..xs.len() {
            if k != j {
                weights[j] /= xs[j] - xs[k];
            }
        }
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..xs.len() {
        let d = t - xs[j];
        if d.abs() < 1e-14 {
            return ys[j];
        }
        let w = weights[j] / d;
        num += w * ys[j];
        den += w;
    }
    num / den
}

/// Maximum interpolation errors for f(x) = 1/(16x² + 1) at order N on a
/// uniform grid versus the LGL grid, probed on 2001 evenly spaced points.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct RungeDemo {
    pub order: usize,
    pub max_err_uniform: f64,
    pub max_err_lgl: f64,
}

pub fn runge_demo(n: usize) -> Result<RungeDemo> {
    if n < 4 {
        return Err(Error::Range(format!("runge demo needs N >= 4, got {n}")));
    }
    let f = |x: f64| 1.0 / (16.0 * x * x + 1.0);
    let grid = LglGrid::new(n)?;
    let uniform: Vec<f64> = (0..=n).map(|i| -1.0 + 2.0 * i as f64 / n as f64).collect();
    let y_uni: Vec<f64> = uniform.iter().map(|&x| f(x)).collect();
    let y_lgl: Vec<f64> = grid.nodes.iter().map(|&x| f(x)).collect();
    let mut err_uni: f64 = 0.0;
    let mut err_lgl: f64 = 0.0;
    for i in 0..2001 {
        let t = -1.0 + 2.0 * i as f64 / 2000.0;
        err_uni = err_uni.max((barycentric(&uniform, &y_uni, t) - f(t)).abs());
        err_lgl = err_lgl.max((interpolate(&grid, &y_lgl, t) - f(t)).abs());
    }
    Ok(RungeDemo { order: n, max_err_uniform: err_uni, max_err_lgl: err_lgl })
}
