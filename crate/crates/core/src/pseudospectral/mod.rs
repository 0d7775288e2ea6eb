//! Legendre-Gauss-Lobatto collocation of the minimum-time control problem.
//!
//! The continuous problem on [0, t_f] is mapped onto [-1, 1], states and
//! control are represented by their values at the LGL nodes, and the dynamics
//! are enforced through the spectral differentiation matrix. The resulting
//! nonlinear program minimizes t_f subject to collocated dynamics, boundary
//! pins, control bounds and an optional two-sided slope restriction, and is
//! solved by an augmented Lagrangian method.

mod legendre;
mod nlp;
mod solver;

pub use legendre::{
    barycentric, differentiation_matrix, interpolate, legendre_pair, lgl_nodes, runge_demo,
    LglGrid, RungeDemo,
};
pub use nlp::{assemble_nlp, CollocationProblem, X1_FLOOR};
pub use solver::{initial_guess, resimulate, solve, solve_spec, InitialGuess};

use crate::model::Result;
use std::io::Write;

/// Converged (or best-effort) solution of the collocation NLP.
#[derive(Debug, Clone)]
pub struct CollocationSolution {
    pub grid: LglGrid,
    pub t_f: f64,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
    pub u: Vec<f64>,
    /// Objective value; equals `t_f`.
    pub objective: f64,
    /// Largest remaining constraint violation.
    pub residuals: f64,
    /// Total inner iterations across all starts.
    pub iterations: usize,
    pub converged: bool,
    /// Slope bound the problem was assembled with, if any.
    pub slope_bound: Option<f64>,
}

impl CollocationSolution {
    /// CSV with header `node,t_mapped,x1,x2,u`: LGL node coordinate, the
    /// corresponding physical time, and the nodal values.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "node,t_mapped,x1,x2,u")?;
        for (i, &node) in self.grid.nodes.iter().enumerate() {
            let t = 0.5 * (node + 1.0) * self.t_f;
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                node, t, self.x1[i], self.x2[i], self.u[i]
            )?;
        }
        Ok(())
    }

    /// JSON sidecar carrying the solve diagnostics.
    pub fn sidecar_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t_f": self.t_f,
            "N": self.grid.order,
            "M": self.slope_bound,
            "residuals": self.residuals,
            "converged": self.converged,
            "iterations": self.iterations,
        })
    }
}
