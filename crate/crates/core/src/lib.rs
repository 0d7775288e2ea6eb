//! Time-optimal trap-frequency trajectories for frictionless harmonic-trap expansion.
//!
//! The trap is described by the scaled control u(t) = ω²(t)/ω₀² acting on the
//! dimensionless state (x1, x2) = (b, ḃ/ω₀), where the scaling factor b solves
//! the Ermakov equation. Expanding the trap from ω₀ to ω_f = ω₀/γ² amounts to
//! steering (1, 0) → (γ, 0) with u confined to [-v1, v2].
//!
//! The crate provides:
//! - closed-form bang-bang planners (one, two and 2n intermediate switchings),
//!   including numerically optimized switching times and strategy-crossing
//!   thresholds in v2,
//! - an exact piecewise propagator plus an RK4 reference integrator and plan
//!   verification,
//! - a Legendre-Gauss-Lobatto collocation transcription with an augmented
//!   Lagrangian solver for smooth, slope-limited controls,
//! - a CLI (`trapcool`) for planning, simulating, collocating, parameter
//!   sweeps and reproduction reports.
//!
//! All quantities are dimensionless; time is measured in units of 1/ω₀.

// argument guards use `!(x > 0.0)` so NaN fails them too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bangbang;
pub mod cli;
mod golden;
pub mod model;
pub mod pseudospectral;
pub mod simulator;

pub use bangbang::{MultiSwitchPlan, PlanStrategy, Schedule, Segment};
pub use model::{Error, ProblemSpec, Result, State};
pub use pseudospectral::{CollocationSolution, LglGrid};
pub use simulator::{Trajectory, TrajectorySample, VerificationReport};
