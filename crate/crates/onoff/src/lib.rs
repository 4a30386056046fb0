//! Equilibria and optimal controls for a single server shared by `n` fluid
//! queues in an on-off pattern, where infinitesimal customers observe the
//! state and join only if their waiting time stays below their patience.
//!
//! Two control regimes are covered:
//!
//! * **Exogenous** on-off durations: the planner fixes each queue's on and
//!   off lengths. [`exo`] classifies the resulting equilibrium outcome in
//!   closed form and [`exo_opt`] finds duration vectors maximizing
//!   throughput or reward via a linear-fractional reformulation solved as
//!   an LP.
//! * **Endogenous** durations under an exhaustive service policy: the
//!   planner only picks post-clearance durations `T`; on-off durations
//!   emerge from customer behavior. [`endo`] computes the unique
//!   equilibrium by Z-matrix complementarity pivoting and [`endo_opt`]
//!   finds an optimal policy by a closed-form boundary search.
//!
//! [`sim`] is an independent forward simulator of the same dynamics used to
//! cross-validate every closed form, and [`json`] holds the serialization
//! schema shared with the command-line front end.

pub mod endo;
pub mod endo_opt;
pub mod exo;
pub mod exo_opt;
pub mod json;
pub mod model;
pub mod sim;
pub mod simplex;

pub mod guide;

pub use model::{
    build_lcp_system, derive_coefficients, DerivedCoefficients, LcpSystem, QueueParams,
    SystemInstance,
};

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("instance must contain at least one queue")]
    EmptyInstance,
    #[error("queue {queue}: {what} must be {requirement} (got {value})")]
    InvalidParameter {
        queue: usize,
        what: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("total switchover time must be positive for n >= 2 (got {0})")]
    ZeroSwitchover(f64),
    #[error("total_switchover = {given} does not match per-queue sum {sum}")]
    SwitchoverMismatch { given: f64, sum: f64 },
    #[error("schedule for queue {queue}: {what} must be positive (got {value})")]
    InvalidSchedule {
        queue: usize,
        what: &'static str,
        value: f64,
    },
    #[error("queue {queue}: utilization {rho} >= 1 but the operation requires lambda < mu")]
    UnstableQueue { queue: usize, rho: f64 },
    #[error("queue {queue}: off duration {actual} violates cycle consistency (expected {expected})")]
    CycleInconsistent {
        queue: usize,
        actual: f64,
        expected: f64,
    },
    #[error("submatrix utilizations sum to one; the indexed block is singular")]
    SingularSubmatrix,
    #[error("queue {queue}: post-clearance duration must be non-negative (got {value})")]
    NegativePostClearance { queue: usize, value: f64 },
    #[error("at most one queue may carry the serve-forever sentinel")]
    MultipleSentinels,
    #[error("policy contains a serve-forever sentinel; the complementarity system needs finite T")]
    InfinitePolicy,
    #[error("single-queue instances are optimized by the constrained closed form, not the LP")]
    SingleQueueLp,
    #[error("linear program is infeasible; this indicates an internal error for a valid instance")]
    LpInfeasible,
    #[error("linear program is unbounded; this indicates an internal error for a valid instance")]
    LpUnbounded,
    #[error("optimal scaled cycle rate g = {0} is at or below tolerance; cycle length is unbounded")]
    DegenerateCycle(f64),
    #[error("constraint {what} must be positive (got {value})")]
    InvalidConstraint { what: &'static str, value: f64 },
    #[error("simulation stalled before completing a measured cycle")]
    SimulationStalled,
    #[error("instance JSON: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;
