//! Collocation transcription: decision vector, bounds, pins and constraint
//! residuals/Jacobians.
//!
//! Decision vector z = (t_f, x1₀..x1_N, x2₀..x2_N, u₀..u_N). Dynamics are
//! enforced at every node through the differentiation matrix,
//!
//! ```text
//! Σ_k D_ik x1_k = (t_f/2) x2_i
//! Σ_k D_ik x2_k = (t_f/2) (-u_i x1_i + 1/x1_i³)
//! ```
//!
//! with boundary rows pinned to (1, 0, 1) and (γ, 0, 1/γ⁴). The factor t_f/2
//! comes from mapping [0, t_f] onto [-1, 1]; t_f stays an ordinary decision
//! variable. A finite slope bound M adds |u_(i+1) - u_i| ≤ M (t_(i+1) - t_i)
//! two-sided.

use super::legendre::LglGrid;
use crate::model::{Error, ProblemSpec, Result};

/// Lower bound keeping 1/x1³ well conditioned inside the NLP.
pub const X1_FLOOR: f64 = 1e-2;

#[derive(Debug, Clone)]
pub struct CollocationProblem {
    pub grid: LglGrid,
    pub v1: f64,
    pub v2: f64,
    pub gamma: f64,
    /// Two-sided slope bound on the discrete control; None is unbounded.
    pub slope_bound: Option<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

/// Assemble the collocation NLP for a spec at order N with optional slope
/// bound M.
pub fn assemble_nlp(spec: &ProblemSpec, n: usize, m: Option<f64>) -> Result<CollocationProblem> {
    if n < 8 {
        return Err(Error::Range(format!("collocation order must be at least 8, got {n}")));
    }
    if let Some(m) = m {
        if !(m > 0.0) {
            return Err(Error::Range(format!("slope bound must be positive, got {m}")));
        }
    }
    CollocationProblem::with_raw(spec.v1(), spec.v2(), spec.gamma(), n, m)
}

impl CollocationProblem {
    /// Raw-parameter constructor; `assemble_nlp` is the validated entry point.
    pub(crate) fn with_raw(
        v1: f64,
        v2: f64,
        gamma: f64,
        n: usize,
        slope_bound: Option<f64>,
    ) -> Result<Self> {
        let grid = LglGrid::new(n)?;
        let nn = n + 1;
        let nv = 1 + 3 * nn;
        let mut lower = vec![f64::NEG_INFINITY; nv];
        let mut upper = vec![f64::INFINITY; nv];
        lower[0] = 1e-3;
        upper[0] = 100.0;
        for i in 0..nn {
            lower[1 + i] = X1_FLOOR;
        }
        for i in 0..nn {
            lower[1 + 2 * nn + i] = -v1;
            upper[1 + 2 * nn + i] = v2;
        }
        let mut problem = Self { grid, v1, v2, gamma, slope_bound, lower, upper };
        for (idx, val) in problem.pins() {
            problem.lower[idx] = val;
            problem.upper[idx] = val;
        }
        Ok(problem)
    }

    pub fn order(&self) -> usize {
        self.grid.order
    }

    /// Number of decision variables, 3(N+1) + 1.
    pub fn num_vars(&self) -> usize {
        1 + 3 * (self.order() + 1)
    }

    /// Number of equality constraints, 2(N+1).
    pub fn num_eq(&self) -> usize {
        2 * (self.order() + 1)
    }

    /// Number of slope inequalities (two-sided), 2N for finite M else 0.
    pub fn num_ineq(&self) -> usize {
        if self.slope_bound.is_some() {
            2 * self.order()
        } else {
            0
        }
    }

    /// Boundary pins: (x1, x2, u) = (1, 0, 1) at the first node and
    /// (γ, 0, 1/γ⁴) at the last.
    fn pins(&self) -> [(usize, f64); 6] {
        let n = self.order();
        let nn = n + 1;
        [
            (1, 1.0),
            (1 + n, self.gamma),
            (1 + nn, 0.0),
            (1 + nn + n, 0.0),
            (1 + 2 * nn, 1.0),
            (1 + 2 * nn + n, self.gamma.powi(-4)),
        ]
    }

    pub fn split<'a>(&self, z: &'a [f64]) -> (f64, &'a [f64], &'a [f64], &'a [f64]) {
        let nn = self.order() + 1;
        (z[0], &z[1..1 + nn], &z[1 + nn..1 + 2 * nn], &z[1 + 2 * nn..1 + 3 * nn])
    }

    /// Equality residuals: the two collocation blocks at every node.
    pub fn eq_residuals(&self, z: &[f64]) -> Vec<f64> {
        let (tf, x1, x2, u) = self.split(z);
        let nn = self.order() + 1;
        let dx1 = self.grid.apply_d(x1);
        let dx2 = self.grid.apply_d(x2);
        let mut r = vec![0.0; 2 * nn];
        for i in 0..nn {
            r[i] = dx1[i] - 0.5 * tf * x2[i];
            r[nn + i] = dx2[i] - 0.5 * tf * (-u[i] * x1[i] + x1[i].powi(-3));
        }
        r
    }

    /// Dense Jacobian of the equality residuals, row-major
    /// (2(N+1) rows × num_vars columns).
    pub fn eq_jacobian(&self, z: &[f64]) -> Vec<f64> {
        let (tf, x1, x2, u) = self.split(z);
        let nn = self.order() + 1;
        let nv = self.num_vars();
        let mut jac = vec![0.0; 2 * nn * nv];
        for i in 0..nn {
            let row = &mut jac[i * nv..(i + 1) * nv];
            row[0] = -0.5 * x2[i];
            for k in 0..nn {
                row[1 + k] = self.grid.d_at(i, k);
            }
            row[1 + nn + i] += -0.5 * tf;
        }
        for i in 0..nn {
            let row = &mut jac[(nn + i) * nv..(nn + i + 1) * nv];
            row[0] = -0.5 * (-u[i] * x1[i] + x1[i].powi(-3));
            row[1 + i] = 0.5 * tf * (u[i] + 3.0 * x1[i].powi(-4));
            for k in 0..nn {
                row[1 + nn + k] = self.grid.d_at(i, k);
            }
            row[1 + 2 * nn + i] = 0.5 * tf * x1[i];
        }
        jac
    }

    /// Slope inequalities g ≤ 0: for each gap, u_(i+1) - u_i - MΔt and its
    /// mirror. Empty when M is unbounded.
    pub fn ineq_residuals(&self, z: &[f64]) -> Vec<f64> {
        let Some(m) = self.slope_bound else {
            return Vec::new();
        };
        let (_, _, _, u) = self.split(z);
        let n = self.order();
        let mut g = vec![0.0; 2 * n];
        for i in 0..n {
            let dt = self.grid.nodes[i + 1] - self.grid.nodes[i];
            let du = u[i + 1] - u[i];
            g[i] = du - m * dt;
            g[n + i] = -du - m * dt;
        }
        g
    }

    /// Accumulate Jᵀλ for the slope inequalities into `out`.
    pub fn ineq_jac_t_lambda(&self, lambda: &[f64], out: &mut [f64]) {
        if self.slope_bound.is_none() {
            return;
        }
        let n = self.order();
        let nn = n + 1;
        let base = 1 + 2 * nn;
        for i in 0..n {
            out[base + i + 1] += lambda[i];
            out[base + i] -= lambda[i];
            out[base + i + 1] -= lambda[n + i];
            out[base + i] += lambda[n + i];
        }
    }

    /// Columns touched by slope row `r` with their coefficients.
    pub fn ineq_row(&self, r: usize) -> [(usize, f64); 2] {
        let n = self.order();
        let nn = n + 1;
        let base = 1 + 2 * nn;
        if r < n {
            [(base + r + 1, 1.0), (base + r, -1.0)]
        } else {
            let i = r - n;
            [(base + i + 1, -1.0), (base + i, 1.0)]
        }
    }

    pub fn is_pinned(&self, idx: usize) -> bool {
        self.lower[idx] == self.upper[idx]
    }

    /// Largest constraint violation (equalities and active inequalities).
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let mut v: f64 = 0.0;
        for r in self.eq_residuals(z) {
            v = v.max(r.abs());
        }
        for g in self.ineq_residuals(z) {
            v = v.max(g.max(0.0));
        }
        v
    }
}
