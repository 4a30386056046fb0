//! Optimal exhaustive service policies.
//!
//! At an optimum, at most one queue keeps the server after clearing: a
//! queue `j` maximizing (weighted) arrival rate among those whose
//! customers balk part-time under the pure exhaustive policy. As `T_j`
//! grows from zero the all-joining set only sheds members, one at a time,
//! at boundary values where some `alpha_k` reaches one, and the objective
//! is monotone between consecutive boundaries. Scanning the boundaries in
//! closed form and comparing against serving `j` forever therefore finds
//! an optimum in at most `2 n_bar` steps.

use serde::Serialize;

use crate::endo::{
    equilibrium_objective, solve_equilibrium_finite, EndoEquilibrium, ExhaustivePolicy,
};
use crate::exo::Objective;
use crate::model::SystemInstance;
use crate::Result;

/// One scanned candidate: the post-clearance duration tried on the chosen
/// queue, the induced equilibrium variable, and the objective value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderEval {
    pub t_j: f64,
    pub alpha: Vec<f64>,
    pub objective: f64,
}

/// Search record of [`optimize_exhaustive`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerTrace {
    /// All-joining set of the pure exhaustive policy.
    pub initial_all_joining: Vec<usize>,
    /// Objective of the pure exhaustive policy.
    pub initial_objective: f64,
    /// Queue allowed a positive post-clearance duration (`None` when the
    /// pure exhaustive policy is already first-best).
    pub chosen_queue: Option<usize>,
    /// Members of the initial all-joining set in the order they leave it,
    /// sorted by descending `(mu - lambda)/(mu theta)`, ties by index.
    pub ladder: Vec<usize>,
    /// Boundary value of `T_j` at which each ladder member's variable
    /// reaches one; non-decreasing along the ladder.
    pub boundaries: Vec<f64>,
    /// Evaluated candidates, starting with `T = 0`.
    pub evaluations: Vec<LadderEval>,
    /// Pivot iterations spent computing the initial equilibrium.
    pub pivot_steps: usize,
}

fn ladder_order(inst: &SystemInstance, i0: &[usize]) -> Vec<usize> {
    let mut ladder = i0.to_vec();
    ladder.sort_by(|&a, &b| {
        let qa = inst.queue(a);
        let qb = inst.queue(b);
        let ka = (qa.mu - qa.lambda) / (qa.mu * qa.theta);
        let kb = (qb.mu - qb.lambda) / (qb.mu * qb.theta);
        kb.partial_cmp(&ka)
            .expect("finite ladder keys")
            .then(a.cmp(&b))
    });
    ladder
}

fn boundary_value(inst: &SystemInstance, in_set: &[bool], k: usize) -> f64 {
    let q = inst.queue(k);
    let rho_sum: f64 = (0..inst.n())
        .filter(|&i| in_set[i])
        .map(|i| inst.queue(i).rho())
        .sum();
    let outside_c: f64 = (0..inst.n())
        .filter(|&i| !in_set[i])
        .map(|i| inst.queue(i).c().expect("stable queue"))
        .sum();
    q.mu * q.theta * (1.0 - rho_sum) / (q.mu - q.lambda) - inst.total_switchover() - outside_c
}

/// Ladder order and boundary values for a given all-joining set and chosen
/// queue, without evaluating objectives. The boundaries are asserted
/// non-decreasing.
pub fn boundary_ladder(inst: &SystemInstance, i0: &[usize], j: usize) -> Result<OptimizerTrace> {
    assert!(!i0.is_empty(), "ladder needs a non-empty all-joining set");
    assert!(!i0.contains(&j), "chosen queue must balk part-time");
    inst.require_stable()?;
    let ladder = ladder_order(inst, i0);
    let mut in_set = vec![false; inst.n()];
    for &i in i0 {
        in_set[i] = true;
    }
    let mut boundaries = Vec::with_capacity(ladder.len());
    for &k in &ladder {
        let t = boundary_value(inst, &in_set, k);
        if let Some(&prev) = boundaries.last() {
            assert!(
                t >= prev - 1e-9 * (1.0 + t.abs()),
                "ladder boundaries must be non-decreasing: {prev} then {t}"
            );
        }
        boundaries.push(t);
        in_set[k] = false;
    }
    Ok(OptimizerTrace {
        initial_all_joining: i0.to_vec(),
        initial_objective: f64::NAN,
        chosen_queue: Some(j),
        ladder,
        boundaries,
        evaluations: Vec::new(),
        pivot_steps: 0,
    })
}

/// Closed-form equilibrium variable at `(T_j, 0_{-j})` for a known
/// all-joining set.
fn alpha_for_set(inst: &SystemInstance, in_set: &[bool], t_j: f64) -> Vec<f64> {
    let rho_sum: f64 = (0..inst.n())
        .filter(|&i| in_set[i])
        .map(|i| inst.queue(i).rho())
        .sum();
    let outside_c: f64 = (0..inst.n())
        .filter(|&i| !in_set[i])
        .map(|i| inst.queue(i).c().expect("stable queue"))
        .sum();
    let scale = (inst.total_switchover() + t_j + outside_c) / (1.0 - rho_sum);
    (0..inst.n())
        .map(|i| {
            if in_set[i] {
                let q = inst.queue(i);
                scale * (q.mu - q.lambda) / (q.mu * q.theta)
            } else {
                1.0
            }
        })
        .collect()
}

/// Find an optimal exhaustive service policy.
///
/// Returns the policy (possibly a serve-forever sentinel), its objective
/// value, and the search trace. Objective ties against the serve-forever
/// candidate resolve to the finite policy.
pub fn optimize_exhaustive(
    inst: &SystemInstance,
    objective: Objective,
) -> Result<(ExhaustivePolicy, f64, OptimizerTrace)> {
    inst.require_stable()?;
    let n = inst.n();
    let zero = vec![0.0; n];
    let eq0 = solve_equilibrium_finite(inst, &zero)?;
    let value0 = equilibrium_objective(inst, &zero, &eq0.alpha, objective);
    let i0 = eq0.all_joining.clone();

    let mut trace = OptimizerTrace {
        initial_all_joining: i0.clone(),
        initial_objective: value0,
        chosen_queue: None,
        ladder: Vec::new(),
        boundaries: Vec::new(),
        evaluations: vec![LadderEval {
            t_j: 0.0,
            alpha: eq0.alpha.clone(),
            objective: value0,
        }],
        pivot_steps: eq0.pivot_steps,
    };

    if i0.len() == n {
        // everyone already joins: first best
        return Ok((ExhaustivePolicy::zero(n), value0, trace));
    }

    // queue with the largest weighted arrival rate among part-time balkers;
    // ties keep the lowest index
    let mut in_i0 = vec![false; n];
    for &i in &i0 {
        in_i0[i] = true;
    }
    let mut j = usize::MAX;
    let mut best_rate = f64::NEG_INFINITY;
    for i in (0..n).filter(|&i| !in_i0[i]) {
        let q = inst.queue(i);
        let rate = objective.weight(q) * q.lambda;
        if rate > best_rate {
            best_rate = rate;
            j = i;
        }
    }
    trace.chosen_queue = Some(j);

    let mut best_value = value0;
    let mut best_t_j = 0.0;
    let ladder = ladder_order(inst, &i0);
    let mut in_set = in_i0;
    for &k in &ladder {
        let t_j = boundary_value(inst, &in_set, k);
        if let Some(&prev) = trace.boundaries.last() {
            assert!(
                t_j >= prev - 1e-9 * (1.0 + t_j.abs()),
                "ladder boundaries must be non-decreasing: {prev} then {t_j}"
            );
        }
        trace.boundaries.push(t_j);
        in_set[k] = false;
        if t_j < 0.0 {
            // the variable already sits at one for every feasible T_j
            continue;
        }
        let alpha = alpha_for_set(inst, &in_set, t_j);
        let mut t = vec![0.0; n];
        t[j] = t_j;
        let value = equilibrium_objective(inst, &t, &alpha, objective);
        trace.evaluations.push(LadderEval {
            t_j,
            alpha,
            objective: value,
        });
        if value > best_value {
            best_value = value;
            best_t_j = t_j;
        }
    }
    trace.ladder = ladder;

    // ties (within float noise) resolve to the finite policy
    let sentinel_value = objective.weight(inst.queue(j)) * inst.queue(j).lambda;
    if sentinel_value > best_value + 1e-9 * (1.0 + sentinel_value.abs()) {
        return Ok((ExhaustivePolicy::serve_forever(n, j), sentinel_value, trace));
    }
    let mut t = vec![0.0; n];
    t[j] = best_t_j;
    Ok((ExhaustivePolicy::finite(t)?, best_value, trace))
}

/// Pure-exhaustive equilibrium regime of a two-queue instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TwoQueueRegime {
    /// Both queues balk part-time.
    AllBalk,
    /// Only the first queue is all-joining.
    FirstJoins,
    /// Only the second queue is all-joining.
    SecondJoins,
    /// Both queues are all-joining (first best).
    AllJoin,
}

/// Closed-form two-queue analysis: regime, pure-exhaustive equilibrium
/// variable, and an optimal policy with its throughput.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoQueueAnalysis {
    pub regime: TwoQueueRegime,
    pub alpha0: [f64; 2],
    #[serde(skip)]
    pub policy: ExhaustivePolicy,
    pub objective: f64,
}

/// Fully closed-form equilibrium and optimal policy for `n = 2`.
///
/// The patience plane splits into four regimes by which box constraints
/// bind at the pure exhaustive policy; each regime carries an explicit
/// optimal policy. At regime boundaries several classifications induce
/// the same equilibrium variable; the first matching regime is returned.
pub fn two_queue_closed_form(inst: &SystemInstance) -> Result<TwoQueueAnalysis> {
    assert_eq!(inst.n(), 2, "closed form is for two queues");
    inst.require_stable()?;
    let tau = inst.total_switchover();
    let (q1, q2) = (inst.queue(0), inst.queue(1));
    let (c1, c2) = (q1.c().unwrap(), q2.c().unwrap());
    let (rho1, rho2) = (q1.rho(), q2.rho());
    let den = 1.0 - rho1 - rho2;
    let (th1, th2) = (q1.theta, q2.theta);
    let (l1, l2) = (q1.lambda, q2.lambda);
    let (m1, m2) = (q1.mu, q2.mu);

    let serve1 = ExhaustivePolicy::serve_forever(2, 0);
    let serve2 = ExhaustivePolicy::serve_forever(2, 1);
    let pure = ExhaustivePolicy::zero(2);

    let throughput_of = |policy: &ExhaustivePolicy, alpha: &[f64; 2]| -> f64 {
        match policy.sentinel() {
            Some(j) => inst.queue(j).lambda,
            None => {
                let t = policy.as_finite().unwrap();
                equilibrium_objective(inst, &t, alpha, Objective::Throughput)
            }
        }
    };

    if th1 <= tau + c2 && th2 <= tau + c1 {
        // neither queue can sustain all-joining: alpha = 1
        let alpha0 = [1.0, 1.0];
        let policy = if l1 > l2 {
            if th1 < tau + c2 * (1.0 - m2 / l1) {
                serve1
            } else {
                pure
            }
        } else if th2 < tau + c1 * (1.0 - m1 / l2) {
            serve2
        } else {
            pure
        };
        let objective = throughput_of(&policy, &alpha0);
        return Ok(TwoQueueAnalysis {
            regime: TwoQueueRegime::AllBalk,
            alpha0,
            policy,
            objective,
        });
    }

    if th1 > tau + c2 && th2 * den <= tau * (1.0 - rho2) {
        let alpha0 = [(tau + c2) / th1, 1.0];
        let (policy, alpha_at) = if th2 < tau {
            let serve2_better = l2 > l1 && th2 < tau + (l2 - m1) / l2 * (l1 * th1 / (m1 - l1));
            if serve2_better {
                (serve2, alpha0)
            } else {
                // push the first queue's variable to one
                let t2 = th1 - c2 - tau;
                (ExhaustivePolicy::finite(vec![0.0, t2])?, [1.0, 1.0])
            }
        } else {
            // cross-multiplied form of "lambda_2 beats the pure policy";
            // the bracket may be negative, so keep it on one side
            let bracket = l2 * (m2 * (m1 - l1) - m1 * (l2 - l1));
            let serve2_better = l2 > l1 && th2 * bracket < m1 * (l2 - l1) * (m2 - l2) * tau;
            if serve2_better {
                (serve2, alpha0)
            } else {
                (pure, alpha0)
            }
        };
        let objective = throughput_of(&policy, &alpha_at);
        return Ok(TwoQueueAnalysis {
            regime: TwoQueueRegime::FirstJoins,
            alpha0,
            policy,
            objective,
        });
    }

    if th2 > tau + c1 && th1 * den <= tau * (1.0 - rho1) {
        let alpha0 = [1.0, (tau + c1) / th2];
        let (policy, alpha_at) = if th1 < tau {
            let serve1_better = l1 > l2 && th1 < tau + (l1 - m2) / l1 * (l2 * th2 / (m2 - l2));
            if serve1_better {
                (serve1, alpha0)
            } else {
                let t1 = th2 - c1 - tau;
                (ExhaustivePolicy::finite(vec![t1, 0.0])?, [1.0, 1.0])
            }
        } else {
            let bracket = l1 * (m1 * (m2 - l2) - m2 * (l1 - l2));
            let serve1_better = l1 > l2 && th1 * bracket < m2 * (l1 - l2) * (m1 - l1) * tau;
            if serve1_better {
                (serve1, alpha0)
            } else {
                (pure, alpha0)
            }
        };
        let objective = throughput_of(&policy, &alpha_at);
        return Ok(TwoQueueAnalysis {
            regime: TwoQueueRegime::SecondJoins,
            alpha0,
            policy,
            objective,
        });
    }

    let alpha0 = [
        tau / th1 * (1.0 - rho1) / den,
        tau / th2 * (1.0 - rho2) / den,
    ];
    let objective = throughput_of(&pure, &alpha0);
    Ok(TwoQueueAnalysis {
        regime: TwoQueueRegime::AllJoin,
        alpha0,
        policy: pure,
        objective,
    })
}

/// Sign of the slope of the objective in `T_j` when no queue is
/// all-joining: positive means serving `j` forever dominates.
pub fn empty_set_slope_sign(inst: &SystemInstance, j: usize, objective: Objective) -> Result<f64> {
    inst.require_stable()?;
    let w_j = objective.weight(inst.queue(j));
    let mut drain = 0.0;
    for q in inst.queues() {
        drain += objective.weight(q) * (q.mu - q.lambda) * q.c().unwrap();
    }
    Ok(w_j * inst.queue(j).lambda * inst.total_switchover() - drain)
}

/// Re-solve the equilibrium at a ladder boundary through the pivoting
/// pass, for consistency checks: the departing queue's variable must sit
/// at one and the all-joining set must have shed exactly the earlier
/// ladder members.
pub fn equilibrium_at_boundary(
    inst: &SystemInstance,
    j: usize,
    t_j: f64,
) -> Result<EndoEquilibrium> {
    let mut t = vec![0.0; inst.n()];
    t[j] = t_j;
    solve_equilibrium_finite(inst, &t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endo::{policy_objective, PostClearance};
    use crate::model::QueueParams;

    fn fig6(theta_scale: f64) -> SystemInstance {
        let lambda = [1.0, 1.2, 0.4, 0.2];
        let mu = [5.0, 3.0, 2.0, 4.0];
        let theta0 = [3.5, 0.5, 2.5, 2.0];
        SystemInstance::new(
            (0..4)
                .map(|i| QueueParams::new(lambda[i], mu[i], 1.5 / 4.0, theta_scale * theta0[i]))
                .collect(),
        )
        .unwrap()
    }

    fn symmetric(theta: f64) -> SystemInstance {
        SystemInstance::new(vec![
            QueueParams::new(1.0, 3.0, 0.5, theta),
            QueueParams::new(1.0, 3.0, 0.5, theta),
        ])
        .unwrap()
    }

    #[test]
    fn moderate_patience_interior_optimum() {
        let inst = fig6(1.5);
        let (policy, value, trace) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert_eq!(trace.initial_all_joining, vec![0, 2]);
        assert_eq!(trace.chosen_queue, Some(1));
        assert_eq!(trace.ladder, vec![2, 0]);
        let t = policy.as_finite().unwrap();
        assert!((t[1] - 0.654605).abs() < 5e-3, "T_j = {}", t[1]);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[2], 0.0);
        assert_eq!(t[3], 0.0);
        assert!(value > trace.initial_objective);
        assert!((value - 2.022316).abs() < 1e-4);
        assert!(trace.evaluations.len() <= trace.initial_all_joining.len() + 1);
    }

    #[test]
    fn low_patience_pure_policy() {
        let inst = fig6(0.5);
        let (policy, value, trace) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert!(trace.initial_all_joining.is_empty());
        assert!(policy.sentinel().is_none());
        assert_eq!(policy.as_finite().unwrap(), vec![0.0; 4]);
        assert!((value - trace.initial_objective).abs() < 1e-12);
        // slope test agrees: objective falls in T_j
        assert!(empty_set_slope_sign(&inst, 1, Objective::Throughput).unwrap() < 0.0);
    }

    #[test]
    fn symmetric_tie_goes_to_pure_policy() {
        let inst = symmetric(0.5);
        let (policy, value, _) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert!(policy.sentinel().is_none());
        assert!((value - 1.0).abs() < 1e-12);
        // exact tie: the slope numerator vanishes
        let slope = empty_set_slope_sign(&inst, 1, Objective::Throughput).unwrap();
        assert!(slope.abs() < 1e-12);
    }

    #[test]
    fn serve_forever_wins_when_slope_positive() {
        // large switchover, impatient customers: holding one queue is best
        let inst = SystemInstance::new(vec![
            QueueParams::new(2.0, 2.5, 2.0, 0.2),
            QueueParams::new(0.3, 2.5, 2.0, 0.2),
        ])
        .unwrap();
        let (policy, value, trace) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert!(trace.initial_all_joining.is_empty());
        assert!(empty_set_slope_sign(&inst, 0, Objective::Throughput).unwrap() > 0.0);
        assert_eq!(policy.sentinel(), Some(0));
        assert!((value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn first_best_returns_zero_policy() {
        let inst = symmetric(3.0);
        let (policy, value, trace) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert_eq!(trace.initial_all_joining, vec![0, 1]);
        assert_eq!(trace.chosen_queue, None);
        assert_eq!(policy.as_finite().unwrap(), vec![0.0, 0.0]);
        assert!((value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ladder_matches_manual_boundaries() {
        let inst = fig6(1.5);
        let trace = boundary_ladder(&inst, &[0, 2], 1).unwrap();
        assert_eq!(trace.ladder, vec![2, 0]);
        assert!((trace.boundaries[0] - 0.6546052631578946).abs() < 1e-9);
        assert!((trace.boundaries[1] - 2.154605263157895).abs() < 1e-9);
    }

    #[test]
    fn single_member_ladder() {
        // only queue 0 is all-joining: one boundary, two evaluations
        let inst = SystemInstance::new(vec![
            QueueParams::new(0.5, 3.0, 0.5, 6.0),
            QueueParams::new(1.0, 3.0, 0.5, 0.4),
        ])
        .unwrap();
        let (_, _, trace) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert_eq!(trace.initial_all_joining, vec![0]);
        assert_eq!(trace.ladder.len(), 1);
        assert!(trace.evaluations.len() <= 2);
    }

    #[test]
    fn ladder_tie_breaks_by_index() {
        let inst = SystemInstance::new(vec![
            QueueParams::new(0.2, 2.0, 0.2, 8.0),
            QueueParams::new(0.2, 2.0, 0.2, 8.0),
            QueueParams::new(1.5, 2.0, 0.2, 0.05),
        ])
        .unwrap();
        let eq = solve_equilibrium_finite(&inst, &[0.0; 3]).unwrap();
        assert_eq!(eq.all_joining, vec![0, 1]);
        let trace = boundary_ladder(&inst, &eq.all_joining, 2).unwrap();
        assert_eq!(trace.ladder, vec![0, 1]);
    }

    #[test]
    fn boundary_resolves_to_unit_alpha() {
        let inst = fig6(1.5);
        let trace = boundary_ladder(&inst, &[0, 2], 1).unwrap();
        for (step, &t_j) in trace.boundaries.iter().enumerate() {
            let eq = equilibrium_at_boundary(&inst, 1, t_j).unwrap();
            let k = trace.ladder[step];
            assert!((eq.alpha[k] - 1.0).abs() < 1e-8, "step {step}");
            let mut expect: Vec<usize> = trace.ladder[step + 1..].to_vec();
            expect.sort_unstable();
            assert_eq!(eq.all_joining, expect, "step {step}");
        }
    }

    #[test]
    fn two_queue_patient_pair_first_best() {
        let inst = symmetric(3.0);
        let out = two_queue_closed_form(&inst).unwrap();
        assert_eq!(out.regime, TwoQueueRegime::AllJoin);
        assert!((out.alpha0[0] - 2.0 / 3.0).abs() < 1e-12);
        assert!((out.alpha0[1] - 2.0 / 3.0).abs() < 1e-12);
        assert!(out.policy.sentinel().is_none());
        assert!((out.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_queue_impatient_pair() {
        let inst = symmetric(0.5);
        let out = two_queue_closed_form(&inst).unwrap();
        assert_eq!(out.regime, TwoQueueRegime::AllBalk);
        assert_eq!(out.alpha0, [1.0, 1.0]);
        assert!(out.policy.sentinel().is_none());
        assert!((out.objective - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_queue_matches_general_solver() {
        let cases = [
            (3.0, 3.0),
            (0.5, 0.5),
            (4.0, 0.3),
            (0.3, 4.0),
            (6.0, 1.5),
            (1.5, 6.0),
        ];
        for (tha, thb) in cases {
            let inst = SystemInstance::new(vec![
                QueueParams::new(1.0, 3.0, 0.5, tha),
                QueueParams::new(1.2, 2.8, 0.5, thb),
            ])
            .unwrap();
            let closed = two_queue_closed_form(&inst).unwrap();
            let eq = solve_equilibrium_finite(&inst, &[0.0, 0.0]).unwrap();
            for i in 0..2 {
                assert!(
                    (closed.alpha0[i] - eq.alpha[i]).abs() < 1e-8,
                    "theta ({tha}, {thb}) queue {i}: {} vs {}",
                    closed.alpha0[i],
                    eq.alpha[i]
                );
            }
            let (_, value, _) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
            assert!(
                (closed.objective - value).abs() < 1e-7 * (1.0 + value.abs()),
                "theta ({tha}, {thb}): {} vs {value}",
                closed.objective
            );
        }
    }

    #[test]
    fn reward_mode_switches_chosen_queue() {
        // queue 0 has the higher arrival rate, queue 1 the higher
        // weighted rate
        let inst = SystemInstance::new(vec![
            QueueParams::new(1.2, 3.0, 0.5, 0.3).with_reward(1.0),
            QueueParams::new(1.0, 3.0, 0.5, 0.3).with_reward(2.0),
        ])
        .unwrap();
        let (_, _, th_trace) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        assert_eq!(th_trace.chosen_queue, Some(0));
        let (_, _, rw_trace) = optimize_exhaustive(&inst, Objective::Reward).unwrap();
        assert_eq!(rw_trace.chosen_queue, Some(1));
    }

    #[test]
    fn unit_rewards_reproduce_throughput_policy_bitwise() {
        let inst = fig6(1.5);
        let (p1, v1, t1) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        let (p2, v2, t2) = optimize_exhaustive(&inst, Objective::Reward).unwrap();
        assert_eq!(p1, p2);
        assert_eq!(v1.to_bits(), v2.to_bits());
        assert_eq!(t1.boundaries, t2.boundaries);
    }

    #[test]
    fn sentinel_and_finite_policies_roundtrip_objective() {
        let inst = fig6(1.5);
        let (policy, value, _) = optimize_exhaustive(&inst, Objective::Throughput).unwrap();
        let (replay, _) = policy_objective(&inst, &policy, Objective::Throughput).unwrap();
        assert!((value - replay).abs() < 1e-9);
        let sentinel = ExhaustivePolicy::new(vec![
            PostClearance::Finite(0.0),
            PostClearance::ServeForever,
            PostClearance::Finite(0.0),
            PostClearance::Finite(0.0),
        ])
        .unwrap();
        let (v, eq) = policy_objective(&inst, &sentinel, Objective::Throughput).unwrap();
        assert_eq!(v, 1.2);
        assert!(eq.is_none());
    }
}
