//! Numeric substrate: arbitrary-precision complex arithmetic, all-roots
//! polynomial solving, adaptive Gauss–Legendre quadrature, continued
//! logarithms, and branch lifting on plane algebraic curves.
//!
//! Everything here is a pure function of its inputs; values are immutable
//! after construction and may be used from any thread.

mod complex;
mod continuation;
mod path;
mod poly;
mod quad;

pub use complex::{float_inf, AppComplex, PrecisionPolicy, MIN_PRECISION_BITS};
pub use continuation::{
    fiber_gap_bound,
    continue_log, lift_branch, lift_branch_certified, newton_fiber, BranchLift, CurveFn,
    LogContinuation,
};
pub use path::{PathSegment, PlanePath};
pub use poly::{poly_roots, PolyC, RootWithBound};
pub use quad::{gauss_legendre_nodes, integrate, Quadrature};

/// Errors raised by the numeric layer.
#[derive(Debug, thiserror::Error)]
pub enum NumericsError {
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("step too coarse near s = {0}: consecutive samples subtend an angle >= pi")]
    StepTooCoarse(f64),
    #[error("branch loss near s = {0}: |f| fell below the zero threshold")]
    BranchLoss(f64),
    #[error("branch collision near t = {0}: two fiber solutions entered the corrector basin")]
    BranchCollision(String),
    #[error("newton divergence near t = {0}")]
    NewtonDivergence(String),
    #[error("non-finite value produced in {0}")]
    NonFinite(String),
    #[error("path violates clearance: point {0} is within {1} of forbidden point {2}")]
    ClearanceViolation(String, f64, String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
}
