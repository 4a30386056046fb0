//! Equilibria of exhaustive service policies.
//!
//! Under an exhaustive policy the server never leaves a non-empty queue;
//! the planner controls only the post-clearance durations `T`. The
//! equilibrium is summarized by one variable per queue, `alpha_i` in
//! `[0, 1]`, the fraction of the patience window during which customers
//! join while the server is away. It is the unique solution of a linear
//! complementarity problem whose matrix is a Z-matrix with equal
//! off-diagonal column entries, which a pivoting pass with closed-form
//! block inverses solves in at most `n_bar` steps. The same point is the
//! greatest element of the feasible polyhedron, so maximizing `1^T alpha`
//! over it with the LP solver gives an independent second route.

use crate::exo::Objective;
use crate::model::{build_lcp_system, derive_coefficients, SystemInstance};
use crate::simplex::{self, LinearProgram, Relation};
use crate::{Error, Result};

/// Strict-negativity threshold for pivoting a queue into the all-joining
/// set. Values at exactly zero satisfy the off-duration constraint and
/// must stay out.
pub const PIVOT_IN_TOL: f64 = 1e-12;

/// Post-clearance duration of one queue; `ServeForever` is the limit
/// policy that never leaves the queue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PostClearance {
    Finite(f64),
    ServeForever,
}

/// An exhaustive service policy: per-queue post-clearance durations with
/// at most one serve-forever sentinel.
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustivePolicy {
    durations: Vec<PostClearance>,
}

impl ExhaustivePolicy {
    pub fn new(durations: Vec<PostClearance>) -> Result<Self> {
        let mut sentinels = 0;
        for (i, d) in durations.iter().enumerate() {
            match d {
                PostClearance::Finite(t) if !t.is_finite() || *t < 0.0 => {
                    return Err(Error::NegativePostClearance {
                        queue: i,
                        value: *t,
                    })
                }
                PostClearance::ServeForever => sentinels += 1,
                _ => {}
            }
        }
        if sentinels > 1 {
            return Err(Error::MultipleSentinels);
        }
        Ok(ExhaustivePolicy { durations })
    }

    /// The pure exhaustive policy: leave every queue as soon as it clears.
    pub fn zero(n: usize) -> Self {
        ExhaustivePolicy {
            durations: vec![PostClearance::Finite(0.0); n],
        }
    }

    pub fn finite(t: Vec<f64>) -> Result<Self> {
        Self::new(t.into_iter().map(PostClearance::Finite).collect())
    }

    /// Zero everywhere except a serve-forever sentinel on `queue`.
    pub fn serve_forever(n: usize, queue: usize) -> Self {
        let mut durations = vec![PostClearance::Finite(0.0); n];
        durations[queue] = PostClearance::ServeForever;
        ExhaustivePolicy { durations }
    }

    pub fn n(&self) -> usize {
        self.durations.len()
    }

    pub fn durations(&self) -> &[PostClearance] {
        &self.durations
    }

    /// Index of the sentinel queue, if any.
    pub fn sentinel(&self) -> Option<usize> {
        self.durations
            .iter()
            .position(|d| matches!(d, PostClearance::ServeForever))
    }

    /// Finite duration vector, or `None` if a sentinel is present.
    pub fn as_finite(&self) -> Option<Vec<f64>> {
        self.durations
            .iter()
            .map(|d| match d {
                PostClearance::Finite(t) => Some(*t),
                PostClearance::ServeForever => None,
            })
            .collect()
    }
}

/// The equilibrium of an exhaustive service policy.
#[derive(Debug, Clone, PartialEq)]
pub struct EndoEquilibrium {
    /// Equilibrium variable per queue, in `[0, 1]`.
    pub alpha: Vec<f64>,
    /// Queues whose customers all join (zero balking span), as reported by
    /// the pivoting pass. `alpha` is the canonical object; at boundary
    /// degeneracies other sets induce the same `alpha`.
    pub all_joining: Vec<usize>,
    /// Induced on durations `c_i alpha_i + T_i`.
    pub on_durations: Vec<f64>,
    /// Induced off durations (switchovers plus the other queues' on time).
    pub off_durations: Vec<f64>,
    /// Balking span per cycle, `off_i - alpha_i theta_i`.
    pub not_joining: Vec<f64>,
    /// Pivoting iterations used; never exceeds `n_bar`.
    pub pivot_steps: usize,
}

/// Compute the unique equilibrium of a finite exhaustive policy by the
/// pivoting pass: start from the all-balking guess `alpha = 1`, repeatedly
/// move every queue whose off-duration constraint is violated into the
/// all-joining set, and resolve through the closed-form block inverse.
pub fn solve_equilibrium(
    inst: &SystemInstance,
    policy: &ExhaustivePolicy,
) -> Result<EndoEquilibrium> {
    let t = policy.as_finite().ok_or(Error::InfinitePolicy)?;
    solve_equilibrium_finite(inst, &t)
}

/// [`solve_equilibrium`] for a plain duration vector.
pub fn solve_equilibrium_finite(inst: &SystemInstance, t: &[f64]) -> Result<EndoEquilibrium> {
    let sys = build_lcp_system(inst, t)?;
    let n = sys.n();
    let n_bar = derive_coefficients(inst).n_bar;

    let ones = vec![1.0; n];
    let a_ones = sys.apply_a(&ones);
    let q0: Vec<f64> = sys.b().iter().zip(&a_ones).map(|(b, a)| b - a).collect();

    let mut in_set = vec![false; n];
    let mut residual = q0.clone();
    let mut steps = 0usize;

    loop {
        let violating: Vec<usize> = (0..n)
            .filter(|&i| !in_set[i] && residual[i] < -PIVOT_IN_TOL)
            .collect();
        if violating.is_empty() {
            break;
        }
        // the working set only ever grows
        debug_assert!(violating.iter().all(|&i| !in_set[i]));
        for &i in &violating {
            in_set[i] = true;
        }
        steps += 1;
        assert!(
            steps <= n_bar,
            "pivot pass exceeded the n_bar = {n_bar} step bound"
        );

        let idx: Vec<usize> = (0..n).filter(|&i| in_set[i]).collect();
        let q0_in: Vec<f64> = idx.iter().map(|&i| q0[i]).collect();
        let solved = sys.apply_submatrix_inverse(&idx, &q0_in)?;
        // Rows outside the set share identical coefficients against the
        // set, so the update is one scalar.
        let shift: f64 = idx
            .iter()
            .zip(&solved)
            .map(|(&j, &v)| sys.c()[j] * v)
            .sum();
        for i in (0..n).filter(|&i| !in_set[i]) {
            residual[i] = q0[i] + shift;
        }
    }

    let idx: Vec<usize> = (0..n).filter(|&i| in_set[i]).collect();
    let mut alpha = vec![1.0; n];
    if !idx.is_empty() {
        let outside_c: f64 = (0..n).filter(|&i| !in_set[i]).map(|i| sys.c()[i]).sum();
        let rhs: Vec<f64> = idx.iter().map(|&i| sys.b()[i] + outside_c).collect();
        for (&i, v) in idx.iter().zip(sys.apply_submatrix_inverse(&idx, &rhs)?) {
            alpha[i] = v;
        }
    }

    Ok(assemble(inst, t, alpha, idx, steps))
}

fn assemble(
    inst: &SystemInstance,
    t: &[f64],
    alpha: Vec<f64>,
    all_joining: Vec<usize>,
    pivot_steps: usize,
) -> EndoEquilibrium {
    let c: Vec<f64> = inst
        .queues()
        .iter()
        .map(|q| q.c().expect("stable queue"))
        .collect();
    let on: Vec<f64> = (0..inst.n()).map(|i| c[i] * alpha[i] + t[i]).collect();
    let total_on: f64 = on.iter().sum();
    let off: Vec<f64> = (0..inst.n())
        .map(|i| inst.total_switchover() + total_on - on[i])
        .collect();
    let not_joining: Vec<f64> = (0..inst.n())
        .map(|i| (off[i] - alpha[i] * inst.queue(i).theta).max(0.0))
        .collect();
    EndoEquilibrium {
        alpha,
        all_joining,
        on_durations: on,
        off_durations: off,
        not_joining,
        pivot_steps,
    }
}

/// Independent route to the same point: `alpha(T)` is the greatest element
/// of `{0 <= alpha <= 1, A alpha <= b(T)}`, found by maximizing
/// `1^T alpha` with the simplex solver.
pub fn equilibrium_via_lp(inst: &SystemInstance, policy: &ExhaustivePolicy) -> Result<Vec<f64>> {
    let t = policy.as_finite().ok_or(Error::InfinitePolicy)?;
    let sys = build_lcp_system(inst, &t)?;
    let n = sys.n();
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut bound = vec![0.0; n];
        bound[i] = 1.0;
        rows.push((bound, Relation::Le, 1.0));
    }
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| sys.a(i, j)).collect();
        rows.push((row, Relation::Le, sys.b()[i]));
    }
    let lp = LinearProgram {
        maximize: vec![1.0; n],
        rows,
    };
    Ok(simplex::solve(&lp)?.x)
}

/// Long-run average objective of an equilibrium:
/// `sum_i w_i (mu_i c_i alpha_i + lambda_i T_i) / (1^T tau + sum_i (c_i alpha_i + T_i))`.
pub fn equilibrium_objective(
    inst: &SystemInstance,
    t: &[f64],
    alpha: &[f64],
    objective: Objective,
) -> f64 {
    let mut numer = 0.0;
    let mut denom = inst.total_switchover();
    for (i, q) in inst.queues().iter().enumerate() {
        let c = q.c().expect("stable queue");
        numer += objective.weight(q) * (q.mu * c * alpha[i] + q.lambda * t[i]);
        denom += c * alpha[i] + t[i];
    }
    numer / denom
}

/// Objective value of a policy, solving for the equilibrium when the
/// policy is finite. A serve-forever sentinel on queue `j` keeps the
/// server there for good, yielding `w_j lambda_j` directly.
pub fn policy_objective(
    inst: &SystemInstance,
    policy: &ExhaustivePolicy,
    objective: Objective,
) -> Result<(f64, Option<EndoEquilibrium>)> {
    inst.require_stable()?;
    match policy.sentinel() {
        Some(j) => {
            let q = inst.queue(j);
            Ok((objective.weight(q) * q.lambda, None))
        }
        None => {
            let t = policy.as_finite().expect("no sentinel");
            let eq = solve_equilibrium_finite(inst, &t)?;
            let value = equilibrium_objective(inst, &t, &eq.alpha, objective);
            Ok((value, Some(eq)))
        }
    }
}

/// Throughput of a policy (with its equilibrium when finite).
pub fn throughput_endo(
    inst: &SystemInstance,
    policy: &ExhaustivePolicy,
) -> Result<(f64, Option<EndoEquilibrium>)> {
    policy_objective(inst, policy, Objective::Throughput)
}
