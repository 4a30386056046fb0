//! Instance schema and machine-readable output documents.
//!
//! Instances are read from JSON of the form
//!
//! ```text
//! {"queues": [{"lambda": 1.0, "mu": 3.0, "tau": 0.5, "theta": 2.0, "reward": 1.0}, ...],
//!  "total_switchover": 1.0}
//! ```
//!
//! `reward` defaults to one. Switchover times may be given per queue
//! (`tau`), as a single `total_switchover` scalar (the split is spread
//! evenly; only the total enters any formula), or both, in which case they
//! must agree. Output documents round every number to 12 significant
//! digits and spell the serve-forever sentinel as the string
//! `"infinity"`; queue indices in output documents are 1-based.

use serde::Deserialize;
use serde_json::{json, Value};

use crate::endo::{EndoEquilibrium, ExhaustivePolicy, PostClearance};
use crate::endo_opt::OptimizerTrace;
use crate::exo::{sample_cycle, ExoEquilibriumOutcome, Objective, OnOffSchedule};
use crate::exo_opt::RecoveredSchedule;
use crate::model::{QueueParams, SystemInstance};
use crate::{Error, Result};

#[derive(Debug, Deserialize)]
struct RawQueue {
    lambda: f64,
    mu: f64,
    #[serde(default)]
    tau: Option<f64>,
    theta: f64,
    #[serde(default)]
    reward: Option<f64>,
}

#[derive(Debug, Deserialize)]
struct RawInstance {
    queues: Vec<RawQueue>,
    #[serde(default)]
    total_switchover: Option<f64>,
}

/// Parse and validate an instance document.
pub fn parse_instance(text: &str) -> Result<SystemInstance> {
    let raw: RawInstance =
        serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    let n = raw.queues.len();
    let all_tau_absent = raw.queues.iter().all(|q| q.tau.is_none());
    let spread = match raw.total_switchover {
        Some(total) if all_tau_absent => Some(total / n.max(1) as f64),
        _ => None,
    };
    let queues: Vec<QueueParams> = raw
        .queues
        .iter()
        .map(|q| QueueParams {
            lambda: q.lambda,
            mu: q.mu,
            tau: q.tau.or(spread).unwrap_or(0.0),
            theta: q.theta,
            reward: q.reward.unwrap_or(1.0),
        })
        .collect();
    match raw.total_switchover {
        Some(total) => SystemInstance::with_total_switchover(queues, total),
        None => SystemInstance::new(queues),
    }
}

/// Serialize an instance in the same schema [`parse_instance`] reads.
pub fn instance_to_value(inst: &SystemInstance) -> Value {
    json!({
        "queues": inst
            .queues()
            .iter()
            .map(|q| {
                json!({
                    "lambda": num(q.lambda),
                    "mu": num(q.mu),
                    "tau": num(q.tau),
                    "theta": num(q.theta),
                    "reward": num(q.reward),
                })
            })
            .collect::<Vec<_>>(),
        "total_switchover": num(inst.total_switchover()),
    })
}

/// Round to 12 significant digits; output documents carry no more.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// JSON number rounded to 12 significant digits.
pub fn num(x: f64) -> Value {
    Value::from(sig12(x))
}

fn nums(values: &[f64]) -> Value {
    Value::from(values.iter().map(|&v| sig12(v)).collect::<Vec<f64>>())
}

fn one_based(indices: &[usize]) -> Value {
    Value::from(indices.iter().map(|&i| i + 1).collect::<Vec<usize>>())
}

/// Exogenous-equilibrium document: per-queue outcome patterns, spans, and
/// an optional sampled `(t, q, W)` trace over one cycle.
pub fn exo_report(
    inst: &SystemInstance,
    schedules: &[OnOffSchedule],
    outcomes: &[ExoEquilibriumOutcome],
    throughput: f64,
    reward: f64,
    trace_points: usize,
) -> Value {
    let per_queue: Vec<Value> = inst
        .queues()
        .iter()
        .zip(schedules)
        .zip(outcomes)
        .enumerate()
        .map(|(i, ((params, sched), outcome))| {
            let mut entry = json!({
                "queue": i + 1,
                "pattern": outcome.pattern.label(),
                "on": num(sched.on),
                "off": num(sched.off),
                "joining": num(outcome.joining),
                "not_joining": num(outcome.not_joining),
                "post_clearance": num(outcome.post_clearance),
                "k": outcome.off_period_count,
                "zeta": outcome.phase_offset.map(sig12),
                "q_min": num(outcome.q_min),
                "q_max": num(outcome.q_max),
            });
            if trace_points > 0 {
                let trace: Vec<Value> = sample_cycle(params, sched, outcome, trace_points)
                    .iter()
                    .map(|s| {
                        Value::from(vec![
                            sig12(s.t),
                            sig12(s.queue_length),
                            sig12(s.waiting_time),
                        ])
                    })
                    .collect();
                entry["trace"] = Value::from(trace);
            }
            entry
        })
        .collect();
    json!({
        "cycle": num(schedules[0].cycle()),
        "throughput": num(throughput),
        "reward": num(reward),
        "outcomes": per_queue,
    })
}

/// Optimal-exogenous-durations document.
pub fn opt_exo_report(
    inst: &SystemInstance,
    rec: &RecoveredSchedule,
    objective: Objective,
) -> Value {
    let patterns: Vec<&'static str> = inst
        .queues()
        .iter()
        .zip(&rec.schedules)
        .map(|(q, s)| crate::exo::classify_exogenous(q, s).pattern.label())
        .collect();
    json!({
        "objective": objective_label(objective),
        "value": num(rec.objective),
        "L": nums(&rec.schedules.iter().map(|s| s.on).collect::<Vec<_>>()),
        "L_bar": nums(&rec.schedules.iter().map(|s| s.off).collect::<Vec<_>>()),
        "T": nums(&rec.post_clearance),
        "patterns": patterns,
    })
}

/// Exhaustive-policy equilibrium document.
pub fn eq_endo_report(
    eq: &EndoEquilibrium,
    throughput: f64,
    reward: f64,
) -> Value {
    json!({
        "alpha": nums(&eq.alpha),
        "all_joining_set": one_based(&eq.all_joining),
        "on_durations": nums(&eq.on_durations),
        "off_durations": nums(&eq.off_durations),
        "not_joining": nums(&eq.not_joining),
        "throughput": num(throughput),
        "reward": num(reward),
        "pivot_steps": eq.pivot_steps,
    })
}

/// Post-clearance durations with the serve-forever sentinel spelled out.
pub fn policy_to_value(policy: &ExhaustivePolicy) -> Value {
    Value::from(
        policy
            .durations()
            .iter()
            .map(|d| match d {
                PostClearance::Finite(t) => num(*t),
                PostClearance::ServeForever => Value::String("infinity".into()),
            })
            .collect::<Vec<Value>>(),
    )
}

/// Optimal-exhaustive-policy document with the search trace.
pub fn opt_endo_report(
    policy: &ExhaustivePolicy,
    value: f64,
    trace: &OptimizerTrace,
    objective: Objective,
) -> Value {
    json!({
        "objective": objective_label(objective),
        "value": num(value),
        "T_star": policy_to_value(policy),
        "trace": {
            "initial_all_joining": one_based(&trace.initial_all_joining),
            "initial_objective": num(trace.initial_objective),
            "chosen_queue": trace.chosen_queue.map(|j| j + 1),
            "ladder": one_based(&trace.ladder),
            "boundaries": nums(&trace.boundaries),
            "evaluations": trace
                .evaluations
                .iter()
                .map(|e| {
                    json!({
                        "t_j": num(e.t_j),
                        "objective": num(e.objective),
                        "alpha": nums(&e.alpha),
                    })
                })
                .collect::<Vec<_>>(),
            "pivot_steps": trace.pivot_steps,
        },
    })
}

fn objective_label(objective: Objective) -> &'static str {
    match objective {
        Objective::Throughput => "throughput",
        Objective::Reward => "reward",
    }
}

/// Parse a post-clearance vector such as `0.5,0,infinity` (or `inf`).
pub fn parse_policy(text: &str) -> Result<ExhaustivePolicy> {
    let durations = text
        .split(',')
        .map(|part| {
            let part = part.trim();
            if part.eq_ignore_ascii_case("infinity") || part.eq_ignore_ascii_case("inf") {
                Ok(PostClearance::ServeForever)
            } else {
                part.parse::<f64>()
                    .map(PostClearance::Finite)
                    .map_err(|e| Error::Schema(format!("bad post-clearance value {part:?}: {e}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    ExhaustivePolicy::new(durations)
}
