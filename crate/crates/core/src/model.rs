//! Problem definition and scaled dynamics.
//!
//! With x1 = b, x2 = ḃ/ω₀ and u = ω²/ω₀², the Ermakov equation
//! b̈ + ω²(t) b = ω₀²/b³ becomes the first-order system
//!
//! ```text
//! ẋ1 = x2
//! ẋ2 = -u x1 + 1/x1³
//! ```
//!
//! in time units of 1/ω₀. Expansion by γ = (ω₀/ω_f)^(1/2) steers (1, 0) to
//! (γ, 0) with u(0) = 1 and u(t_f) = 1/γ⁴ fixed by the boundary conditions
//! on b̈.

use serde::{Deserialize, Serialize};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Spec construction rejected (violated field invariant).
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    /// A closed-form planner hit an argument outside its domain; the message
    /// names the violated inequality.
    #[error("infeasible spec: {0}")]
    InfeasibleSpec(String),
    /// State escaped the admissible region (x1 must stay positive).
    #[error("domain error: {0}")]
    Domain(String),
    /// Argument outside the documented range of an operation.
    #[error("range error: {0}")]
    Range(String),
    /// Root finding or linear algebra failed to converge.
    #[error("numeric error: {0}")]
    Numeric(String),
    /// Bisection bracket does not contain a sign change.
    #[error("bracket error: {0}")]
    Bracket(String),
    /// The collocation solver hit its iteration cap before meeting tolerances.
    #[error("solver did not converge: {0}")]
    NoConvergence(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// One cooling instance: control bounds and expansion target.
///
/// `u_initial` and `u_final` are derived from the boundary conditions and are
/// not serialized; a JSON document carries exactly `{"v1", "v2", "gamma"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "SpecFields", into = "SpecFields")]
pub struct ProblemSpec {
    /// Magnitude of the most negative allowed control (u ≥ -v1), v1 > 0.
    v1: f64,
    /// Largest allowed control (u ≤ v2), v2 ≥ 1.
    v2: f64,
    /// Target scaling b(t_f) = γ = (ω₀/ω_f)^(1/2), γ > 1.
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecFields {
    v1: f64,
    v2: f64,
    gamma: f64,
}

impl TryFrom<SpecFields> for ProblemSpec {
    type Error = Error;
    fn try_from(f: SpecFields) -> Result<Self> {
        ProblemSpec::new(f.v1, f.v2, f.gamma)
    }
}

impl From<ProblemSpec> for SpecFields {
    fn from(s: ProblemSpec) -> Self {
        SpecFields { v1: s.v1, v2: s.v2, gamma: s.gamma }
    }
}

impl ProblemSpec {
    pub fn new(v1: f64, v2: f64, gamma: f64) -> Result<Self> {
        if !(v1 > 0.0) || !v1.is_finite() {
            return Err(Error::InvalidSpec(format!("v1 must be positive, got {v1}")));
        }
        if !(v2 >= 1.0) || !v2.is_finite() {
            return Err(Error::InvalidSpec(format!("v2 must satisfy v2 >= u(0) = 1, got {v2}")));
        }
        if !(gamma > 1.0) || !gamma.is_finite() {
            return Err(Error::InvalidSpec(format!("gamma must exceed 1, got {gamma}")));
        }
        Ok(Self { v1, v2, gamma })
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Boundary control at t = 0⁻, fixed to 1 by ω(0) = ω₀.
    pub fn u_initial(&self) -> f64 {
        1.0
    }

    /// Boundary control at t = t_f⁺, fixed to 1/γ⁴ by ω(t_f) = ω_f.
    pub fn u_final(&self) -> f64 {
        self.gamma.powi(-4)
    }

    /// Start state (1, 0).
    pub fn start(&self) -> State {
        State { x1: 1.0, x2: 0.0 }
    }

    /// Target state (γ, 0).
    pub fn target(&self) -> State {
        State { x1: self.gamma, x2: 0.0 }
    }

    /// True when u lies within [-v1, v2] up to `tol`.
    pub fn control_in_bounds(&self, u: f64, tol: f64) -> bool {
        u >= -self.v1 - tol && u <= self.v2 + tol
    }
}

/// Phase point of the scaled Ermakov system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    /// Scaling factor b; positive on every admissible trajectory.
    pub x1: f64,
    /// ḃ in units of ω₀.
    pub x2: f64,
}

impl State {
    pub fn new(x1: f64, x2: f64) -> Self {
        Self { x1, x2 }
    }
}

/// Right-hand side (ẋ1, ẋ2) = (x2, -u·x1 + 1/x1³).
pub fn dynamics(s: State, u: f64) -> Result<(f64, f64)> {
    if !(s.x1 > 0.0) {
        return Err(Error::Domain(format!(
            "x1 must stay positive, got x1 = {}",
            s.x1
        )));
    }
    Ok((s.x2, -u * s.x1 + s.x1.powi(-3)))
}

/// Conserved quantity c = x2² + u·x1² + 1/x1² of any constant-u flow.
///
/// The mode-n average energy is (2n+1)·c/4 in units of ħω₀, so constant-u
/// arcs are constant-energy arcs.
pub fn segment_invariant(s: State, u: f64) -> Result<f64> {
    if !(s.x1 > 0.0) {
        return Err(Error::Domain(format!(
            "x1 must stay positive, got x1 = {}",
            s.x1
        )));
    }
    Ok(s.x2 * s.x2 + u * s.x1 * s.x1 + (s.x1 * s.x1).recip())
}

/// Mode-n average energy (2n+1)·c/4 in units of ħω₀.
pub fn mode_energy(c: f64, n: u32) -> f64 {
    (2.0 * f64::from(n) + 1.0) * c / 4.0
}

/// Quintic reference scaling b(s) with b(0)=1, b(1)=γ and vanishing first and
/// second derivatives at both ends, s = t/t_f ∈ [0, 1].
pub fn ansatz_scaling(s: f64, gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Range(format!("s must lie in [0, 1], got {s}")));
    }
    let d = gamma - 1.0;
    Ok(6.0 * d * s.powi(5) - 15.0 * d * s.powi(4) + 10.0 * d * s.powi(3) + 1.0)
}

/// d²b/ds² of the quintic, evaluated analytically.
fn ansatz_scaling_dd(s: f64, gamma: f64) -> f64 {
    (gamma - 1.0) * (120.0 * s.powi(3) - 180.0 * s.powi(2) + 60.0 * s)
}

/// db/ds of the quintic, evaluated analytically.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn ansatz_scaling_d(s: f64, gamma: f64) -> f64 {
    (gamma - 1.0) * (30.0 * s.powi(4) - 60.0 * s.powi(3) + 30.0 * s.powi(2))
}

/// Reference fixed-duration control recovered from the quintic ansatz:
/// u(s) = 1/b⁴ - b''(s)/(t_f² b), with b'' taken with respect to s.
///
/// This is the non-optimal inverse-engineered design; it may leave [-v1, v2]
/// for short t_f, which callers detect with [`ProblemSpec::control_in_bounds`]
/// rather than clamping.
pub fn ansatz_control(s: f64, t_f: f64, gamma: f64) -> Result<f64> {
    if !(t_f > 0.0) {
        return Err(Error::Range(format!("t_f must be positive, got {t_f}")));
    }
    let b = ansatz_scaling(s, gamma)?;
    let bdd = ansatz_scaling_dd(s, gamma);
    Ok(b.powi(-4) - bdd / (t_f * t_f * b))
}
