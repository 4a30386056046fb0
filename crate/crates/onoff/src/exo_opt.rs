//! Optimal exogenous on-off durations.
//!
//! The planner's problem is linear-fractional in the durations; dividing
//! every duration by the cycle length turns it into a small linear program
//! over scaled variables `x = L/cycle`, `xbar = Lbar/cycle`,
//! `y = T/cycle`, and the inverse cycle length `g`. Queues with
//! `lambda >= mu` never hold a post-clearance period and carry no `y`
//! variable. Solving the LP and dividing back by `g` recovers optimal
//! durations. The single-queue problem with a work limit and a forced-off
//! ratio has a closed-form optimum and bypasses the LP.

use serde::Serialize;

use crate::exo::{Objective, OnOffSchedule};
use crate::model::{QueueParams, SystemInstance};
use crate::simplex::{self, LinearProgram, Relation};
use crate::{Error, Result};

/// Below this value of the scaled cycle rate `g` the recovered cycle
/// length is considered unbounded and recovery fails loudly.
pub const G_TOL: f64 = 1e-10;

/// The scaled linear program for one instance.
#[derive(Debug, Clone)]
pub struct LpDescription {
    program: LinearProgram,
    n: usize,
    /// Variable index of `y_i` for queues with `lambda < mu`.
    y_index: Vec<Option<usize>>,
}

impl LpDescription {
    pub fn variables(&self) -> usize {
        self.program.maximize.len()
    }

    pub fn inequality_rows(&self) -> usize {
        self.program
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel == Relation::Le || *rel == Relation::Ge)
            .count()
    }

    pub fn equality_rows(&self) -> usize {
        self.program
            .rows
            .iter()
            .filter(|(_, rel, _)| *rel == Relation::Eq)
            .count()
    }

    pub fn objective_coefficients(&self) -> &[f64] {
        &self.program.maximize
    }

    pub fn has_y_variable(&self, queue: usize) -> bool {
        self.y_index[queue].is_some()
    }
}

/// Optimal vertex of the scaled program.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpSolution {
    /// Scaled on durations.
    pub x: Vec<f64>,
    /// Scaled off durations.
    pub x_bar: Vec<f64>,
    /// Scaled post-clearance durations (zero for queues without a `y`
    /// variable).
    pub y: Vec<f64>,
    /// Inverse cycle length.
    pub g: f64,
    /// Optimal objective value (served rate or reward rate).
    pub objective: f64,
}

/// Assemble the scaled program. Variables are laid out as
/// `x_0..x_{n-1}, xbar_0..xbar_{n-1}, y_(stable queues), g`, all
/// non-negative. Single-queue instances are served by
/// [`optimize_single_queue`] instead.
pub fn build_lp(inst: &SystemInstance, objective: Objective) -> Result<LpDescription> {
    let n = inst.n();
    if n < 2 {
        return Err(Error::SingleQueueLp);
    }
    let mut y_index = vec![None; n];
    let mut next = 2 * n;
    for (i, q) in inst.queues().iter().enumerate() {
        if q.lambda < q.mu {
            y_index[i] = Some(next);
            next += 1;
        }
    }
    let g_at = next;
    let n_vars = next + 1;

    let mut maximize = vec![0.0; n_vars];
    for (i, q) in inst.queues().iter().enumerate() {
        let w = objective.weight(q);
        maximize[i] = w * q.mu;
        if let Some(yi) = y_index[i] {
            maximize[yi] = -(w * (q.mu - q.lambda));
        }
    }

    let mut rows = Vec::new();
    for (i, q) in inst.queues().iter().enumerate() {
        let Some(yi) = y_index[i] else { continue };
        let slack = q.lambda / (q.mu - q.lambda);
        // y_i >= x_i - slack * theta_i * g
        let mut row = vec![0.0; n_vars];
        row[i] = 1.0;
        row[yi] = -1.0;
        row[g_at] = -(slack * q.theta);
        rows.push((row, Relation::Le, 0.0));
        // y_i >= x_i - slack * xbar_i
        let mut row = vec![0.0; n_vars];
        row[i] = 1.0;
        row[yi] = -1.0;
        row[n + i] = -slack;
        rows.push((row, Relation::Le, 0.0));
    }
    for i in 0..n {
        // x_i + xbar_i = 1
        let mut row = vec![0.0; n_vars];
        row[i] = 1.0;
        row[n + i] = 1.0;
        rows.push((row, Relation::Eq, 1.0));
        // xbar_i = sum of the other x plus switchover * g
        let mut row = vec![0.0; n_vars];
        row[n + i] = 1.0;
        for j in 0..n {
            if j != i {
                row[j] = -1.0;
            }
        }
        row[g_at] = -inst.total_switchover();
        rows.push((row, Relation::Eq, 0.0));
    }

    Ok(LpDescription {
        program: LinearProgram { maximize, rows },
        n,
        y_index,
    })
}

/// Solve the scaled program to an optimal vertex.
pub fn solve_lp(lp: &LpDescription) -> Result<LpSolution> {
    let vertex = simplex::solve(&lp.program)?;
    let n = lp.n;
    let g_at = lp.program.maximize.len() - 1;
    let y = (0..n)
        .map(|i| lp.y_index[i].map(|yi| vertex.x[yi]).unwrap_or(0.0))
        .collect();
    Ok(LpSolution {
        x: vertex.x[..n].to_vec(),
        x_bar: vertex.x[n..2 * n].to_vec(),
        y,
        g: vertex.x[g_at],
        objective: vertex.objective,
    })
}

/// Optimal durations recovered from the scaled vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecoveredSchedule {
    pub schedules: Vec<OnOffSchedule>,
    pub post_clearance: Vec<f64>,
    pub objective: f64,
}

/// Divide the vertex back by `g`. Off durations are reconstructed from the
/// on durations and the switchover total so the result is cycle-consistent
/// to machine precision. A queue the optimum drops from the rotation
/// (`x_i = 0`) keeps a negligible on duration so the schedule stays
/// representable; the objective perturbation is far below reporting
/// precision.
pub fn recover_schedule(inst: &SystemInstance, sol: &LpSolution) -> Result<RecoveredSchedule> {
    if sol.g.is_nan() || sol.g <= G_TOL {
        return Err(Error::DegenerateCycle(sol.g));
    }
    let cycle = 1.0 / sol.g;
    let on: Vec<f64> = sol
        .x
        .iter()
        .map(|x| (x / sol.g).max(1e-10 * cycle))
        .collect();
    let total_on: f64 = on.iter().sum();
    let schedules: Vec<OnOffSchedule> = on
        .iter()
        .map(|&l| OnOffSchedule::new(l, inst.total_switchover() + total_on - l))
        .collect();
    let post_clearance = sol.y.iter().map(|y| y / sol.g).collect();
    Ok(RecoveredSchedule {
        schedules,
        post_clearance,
        objective: sol.objective,
    })
}

/// Build, solve, and recover in one call.
pub fn optimize_exogenous(
    inst: &SystemInstance,
    objective: Objective,
) -> Result<RecoveredSchedule> {
    let lp = build_lp(inst, objective)?;
    let sol = solve_lp(&lp)?;
    recover_schedule(inst, &sol)
}

/// Operational constraints for the single-queue problem: a cap on the on
/// duration and a minimum off/on ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleQueueConstraints {
    pub l_max: f64,
    pub beta: f64,
}

impl SingleQueueConstraints {
    pub fn new(l_max: f64, beta: f64) -> Result<Self> {
        if !l_max.is_finite() || l_max <= 0.0 {
            return Err(Error::InvalidConstraint {
                what: "l_max",
                value: l_max,
            });
        }
        if !beta.is_finite() || beta <= 0.0 {
            return Err(Error::InvalidConstraint {
                what: "beta",
                value: beta,
            });
        }
        Ok(SingleQueueConstraints { l_max, beta })
    }
}

/// Closed-form single-queue optimum under a work limit and a forced-off
/// ratio: `L* = min(lambda theta/(mu - lambda), l_max)`, `Lbar* = beta L*`.
/// When `beta` exceeds `(mu - lambda)/lambda` the post-clearance duration
/// is zero and the throughput is `mu/(1 + beta)`; otherwise the first-best
/// rate `lambda` is achieved.
pub fn optimize_single_queue(
    params: &QueueParams,
    cons: &SingleQueueConstraints,
) -> Result<(OnOffSchedule, f64, f64)> {
    if params.rho() >= 1.0 {
        return Err(Error::UnstableQueue {
            queue: 0,
            rho: params.rho(),
        });
    }
    let slack = params.lambda / (params.mu - params.lambda);
    let on = (slack * params.theta).min(cons.l_max);
    let off = cons.beta * on;
    let sched = OnOffSchedule::new(on, off);
    if cons.beta > 1.0 / slack {
        Ok((sched, 0.0, params.mu / (1.0 + cons.beta)))
    } else {
        Ok((sched, on - slack * off, params.lambda))
    }
}
