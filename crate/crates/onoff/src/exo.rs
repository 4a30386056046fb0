//! Equilibrium outcomes of a single queue under exogenous on-off durations.
//!
//! Customers arrive continuously, observe the state, and join only if the
//! waiting time implied by the current state is within their patience. At
//! equilibrium the joining behavior settles into a herding cycle: one
//! contiguous joining span and one contiguous balking span per cycle. This
//! module evaluates the waiting-time formula, classifies the outcome into
//! one of the closed-form patterns, and reconstructs the periodic orbit as
//! piecewise-linear segments for tracing and cross-checks.

use serde::{Deserialize, Serialize};

use crate::model::{QueueParams, SystemInstance};
use crate::{Error, Result};

/// Tolerance for deciding that a floating-point quantity is an integer
/// (used for the off-period count and for boundary snapping inside the
/// waiting-time floor).
pub const INTEGER_TOL: f64 = 1e-9;

/// Exogenous on and off durations of one queue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OnOffSchedule {
    /// On duration `L`.
    pub on: f64,
    /// Off duration (time per cycle the server is elsewhere).
    pub off: f64,
}

impl OnOffSchedule {
    pub fn new(on: f64, off: f64) -> Self {
        OnOffSchedule { on, off }
    }

    pub fn cycle(&self) -> f64 {
        self.on + self.off
    }

    pub fn validate(&self, queue: usize) -> Result<()> {
        if !self.on.is_finite() || self.on <= 0.0 {
            return Err(Error::InvalidSchedule {
                queue,
                what: "on duration",
                value: self.on,
            });
        }
        if !self.off.is_finite() || self.off <= 0.0 {
            return Err(Error::InvalidSchedule {
                queue,
                what: "off duration",
                value: self.off,
            });
        }
        Ok(())
    }
}

/// Instantaneous state of one queue: length, server flag, and the time
/// remaining in the current on/off phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QueueState {
    pub queue_length: f64,
    pub on: bool,
    pub residual: f64,
}

/// The closed-form outcome patterns. `Exh*` outcomes clear the queue every
/// cycle; `NonExh*` outcomes carry a strictly positive backlog forever.
/// The `MuLeLambda*` variants cover oversaturated queues, where customers
/// mix at the indifference point instead of joining outright.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutcomePattern {
    #[serde(rename = "EXH_A")]
    ExhA,
    #[serde(rename = "EXH_B")]
    ExhB,
    #[serde(rename = "EXH_C")]
    ExhC,
    #[serde(rename = "EXH_D")]
    ExhD,
    #[serde(rename = "NONEXH_1")]
    NonExh1,
    #[serde(rename = "NONEXH_2")]
    NonExh2,
    #[serde(rename = "NONEXH_3")]
    NonExh3,
    #[serde(rename = "NONEXH_4")]
    NonExh4,
    #[serde(rename = "NONEXH_5")]
    NonExh5,
    #[serde(rename = "MU_LE_LAMBDA_EXH_A")]
    MuLeLambdaExhA,
    #[serde(rename = "MU_LE_LAMBDA_EXH_B")]
    MuLeLambdaExhB,
    #[serde(rename = "MU_LE_LAMBDA_NONEXH_1")]
    MuLeLambdaNonExh1,
    #[serde(rename = "MU_LE_LAMBDA_NONEXH_2")]
    MuLeLambdaNonExh2,
    #[serde(rename = "MU_LE_LAMBDA_NONEXH_3")]
    MuLeLambdaNonExh3,
    #[serde(rename = "MU_LE_LAMBDA_NONEXH_4")]
    MuLeLambdaNonExh4,
}

impl OutcomePattern {
    pub fn is_exhaustive(&self) -> bool {
        use OutcomePattern::*;
        matches!(self, ExhA | ExhB | ExhC | ExhD | MuLeLambdaExhA | MuLeLambdaExhB)
    }

    pub fn label(&self) -> &'static str {
        use OutcomePattern::*;
        match self {
            ExhA => "EXH_A",
            ExhB => "EXH_B",
            ExhC => "EXH_C",
            ExhD => "EXH_D",
            NonExh1 => "NONEXH_1",
            NonExh2 => "NONEXH_2",
            NonExh3 => "NONEXH_3",
            NonExh4 => "NONEXH_4",
            NonExh5 => "NONEXH_5",
            MuLeLambdaExhA => "MU_LE_LAMBDA_EXH_A",
            MuLeLambdaExhB => "MU_LE_LAMBDA_EXH_B",
            MuLeLambdaNonExh1 => "MU_LE_LAMBDA_NONEXH_1",
            MuLeLambdaNonExh2 => "MU_LE_LAMBDA_NONEXH_2",
            MuLeLambdaNonExh3 => "MU_LE_LAMBDA_NONEXH_3",
            MuLeLambdaNonExh4 => "MU_LE_LAMBDA_NONEXH_4",
        }
    }
}

/// The equilibrium outcome of one queue under an exogenous schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ExoEquilibriumOutcome {
    pub pattern: OutcomePattern,
    /// Joining duration per cycle.
    pub joining: f64,
    /// Balking duration per cycle; `joining + not_joining` is the cycle
    /// length exactly.
    pub not_joining: f64,
    /// Time per cycle the server keeps serving an already-empty queue.
    pub post_clearance: f64,
    /// Number of full off periods a customer joining at the patience
    /// boundary waits through (non-exhaustive patterns only).
    pub off_period_count: Option<u32>,
    /// Offset between a server phase switch and the nearest joining switch
    /// (non-exhaustive patterns only).
    pub phase_offset: Option<f64>,
    pub q_min: f64,
    pub q_max: f64,
}

fn snapped_floor(x: f64) -> f64 {
    let r = x.round();
    if (x - r).abs() < INTEGER_TOL * (1.0 + x.abs()) {
        r
    } else {
        x.floor()
    }
}

/// Waiting time faced by a customer arriving with the queue in `state`:
/// the backlog clearing time plus the residual off time plus one full off
/// duration for every additional on period the backlog spans.
///
/// States whose off-period count sits within `1e-9` of an integer are
/// snapped to that integer; such customers are served exactly at a phase
/// switch and the lower count applies.
pub fn waiting_time(params: &QueueParams, sched: &OnOffSchedule, state: &QueueState) -> f64 {
    let on_wait = state.queue_length / params.mu;
    let elapsed_on = if state.on { sched.on - state.residual } else { 0.0 };
    let z = snapped_floor((on_wait + elapsed_on) / sched.on).max(0.0);
    on_wait + if state.on { 0.0 } else { state.residual } + z * sched.off
}

/// Equilibrium post-clearance duration under an exogenous schedule, valid
/// for `lambda < mu`:
/// `T = max{L - lambda theta/(mu-lambda), L - lambda Lbar/(mu-lambda), 0}`.
/// Oversaturated queues always have zero post-clearance and are rejected.
pub fn post_clearance_duration(params: &QueueParams, sched: &OnOffSchedule) -> Result<f64> {
    if params.rho() >= 1.0 {
        return Err(Error::UnstableQueue {
            queue: 0,
            rho: params.rho(),
        });
    }
    let slack = params.lambda / (params.mu - params.lambda);
    Ok((sched.on - slack * params.theta)
        .max(sched.on - slack * sched.off)
        .max(0.0))
}

/// Pick the off-period count: the unique integer in
/// `[theta/cycle - 1, theta/cycle]`, taking the upper endpoint when the
/// ratio is itself an integer (the two representations coincide there).
fn off_period_count(theta: f64, cycle: f64) -> (u32, f64) {
    let x = theta / cycle;
    let r = x.round();
    let k = if (x - r).abs() < INTEGER_TOL * (1.0 + x.abs()) {
        r
    } else {
        x.floor()
    };
    (k.max(0.0) as u32, x)
}

fn in_interval(k: f64, lo: f64, hi: f64, tol: f64) -> bool {
    lo - tol <= k && k <= hi + tol
}

/// Classify the unique equilibrium outcome of one queue under an exogenous
/// schedule. Total: every valid `(params, schedule)` maps to a pattern.
pub fn classify_exogenous(params: &QueueParams, sched: &OnOffSchedule) -> ExoEquilibriumOutcome {
    debug_assert!(sched.validate(0).is_ok());
    let (l, lbar, theta) = (sched.on, sched.off, params.theta);
    let (lambda, mu) = (params.lambda, params.mu);
    let cycle = sched.cycle();

    // pattern-boundary ties resolve toward the post-clearance patterns,
    // whose formulas coincide with the neighbouring case at the boundary
    let snap = |x: f64| INTEGER_TOL * (1.0 + x.abs());

    if lambda < mu {
        let slack = lambda / (mu - lambda);
        if lbar >= theta {
            if l >= slack * theta - snap(slack * theta) {
                let joining = l + theta;
                return ExoEquilibriumOutcome {
                    pattern: OutcomePattern::ExhA,
                    joining,
                    not_joining: cycle - joining,
                    post_clearance: l - slack * theta,
                    off_period_count: None,
                    phase_offset: None,
                    q_min: 0.0,
                    q_max: lambda * theta,
                };
            }
            let joining = mu * l / lambda;
            let pattern = if l >= params.rho() * theta - snap(params.rho() * theta) {
                OutcomePattern::ExhB
            } else {
                OutcomePattern::ExhC
            };
            let q_max = match pattern {
                OutcomePattern::ExhB => lambda * theta,
                _ => mu * l,
            };
            return ExoEquilibriumOutcome {
                pattern,
                joining,
                not_joining: cycle - joining,
                post_clearance: 0.0,
                off_period_count: None,
                phase_offset: None,
                q_min: 0.0,
                q_max,
            };
        }
        if l >= slack * lbar - snap(slack * lbar) {
            return ExoEquilibriumOutcome {
                pattern: OutcomePattern::ExhD,
                joining: cycle,
                not_joining: 0.0,
                post_clearance: (l - slack * lbar).max(0.0),
                off_period_count: None,
                phase_offset: None,
                q_min: 0.0,
                q_max: lambda * lbar,
            };
        }
        return classify_nonexhaustive(params, sched);
    }

    // Oversaturated queue: customers mix with probability mu/lambda while
    // indifferent, so the joining span always carries inflow mu and spans
    // exactly one on duration of work.
    if lbar >= theta {
        let (pattern, q_max) = if l >= theta {
            (OutcomePattern::MuLeLambdaExhA, mu * theta)
        } else {
            (OutcomePattern::MuLeLambdaExhB, mu * l)
        };
        return ExoEquilibriumOutcome {
            pattern,
            joining: l,
            not_joining: cycle - l,
            post_clearance: 0.0,
            off_period_count: None,
            phase_offset: None,
            q_min: 0.0,
            q_max,
        };
    }
    classify_nonexhaustive_saturated(params, sched)
}

fn classify_nonexhaustive(params: &QueueParams, sched: &OnOffSchedule) -> ExoEquilibriumOutcome {
    let (l, lbar, theta) = (sched.on, sched.off, params.theta);
    let (lambda, mu) = (params.lambda, params.mu);
    let cycle = sched.cycle();
    let ratio = mu / lambda;
    let spare = (mu - lambda) / lambda;

    let (k, x) = off_period_count(theta, cycle);
    let kf = k as f64;
    let tol = INTEGER_TOL * (1.0 + x.abs());

    // Case windows for the off-period count; ties between adjacent cases
    // resolve to the lower-numbered case, whose outcome coincides.
    let case = if in_interval(kf, x - 1.0, (theta - lbar.max(ratio * l)) / cycle, tol) {
        1
    } else if in_interval(kf, (theta - ratio * l) / cycle, (theta - lbar) / cycle, tol) {
        2
    } else if in_interval(kf, (theta - lbar) / cycle, (theta - ratio * l) / cycle, tol) {
        3
    } else if in_interval(
        kf,
        (theta - lbar.min(ratio * l)) / cycle,
        (theta - spare * l) / cycle,
        tol,
    ) {
        4
    } else {
        debug_assert!(
            in_interval(kf, (theta - spare * l) / cycle, x, tol),
            "off-period count {kf} escaped every case window"
        );
        5
    };

    let joining = ratio * l;
    let not_joining = cycle - joining;
    let (pattern, zeta, q_min, q_max) = match case {
        1 => {
            let zeta = (kf + 1.0) * cycle - theta;
            let q_min = kf * mu * l + lambda * (l - zeta);
            (
                OutcomePattern::NonExh1,
                zeta,
                q_min,
                q_min + mu * l - lambda * (l - zeta),
            )
        }
        2 => {
            let zeta = kf * cycle + ratio * l - theta;
            let q_min = kf * mu * l + lambda * (ratio * l - lbar - zeta);
            (OutcomePattern::NonExh2, zeta, q_min, q_min + lambda * lbar)
        }
        3 => {
            let zeta = kf * cycle + lbar - theta;
            let q_min = kf * mu * l;
            (OutcomePattern::NonExh3, zeta, q_min, q_min + mu * l)
        }
        4 => {
            let zeta = kf * cycle + lbar - theta;
            let q_min = kf * mu * l;
            (
                OutcomePattern::NonExh4,
                zeta,
                q_min,
                q_min + lambda * (lbar - zeta),
            )
        }
        _ => {
            let zeta = kf * cycle + spare * l - theta;
            let q_min = kf * mu * l - lambda * zeta;
            (
                OutcomePattern::NonExh5,
                zeta,
                q_min,
                q_min + (mu - lambda) * l,
            )
        }
    };

    ExoEquilibriumOutcome {
        pattern,
        joining,
        not_joining,
        post_clearance: 0.0,
        off_period_count: Some(k),
        phase_offset: Some(zeta),
        q_min,
        q_max,
    }
}

fn classify_nonexhaustive_saturated(
    params: &QueueParams,
    sched: &OnOffSchedule,
) -> ExoEquilibriumOutcome {
    let (l, lbar, theta) = (sched.on, sched.off, params.theta);
    let mu = params.mu;
    let cycle = sched.cycle();

    let (k, x) = off_period_count(theta, cycle);
    let kf = k as f64;
    let tol = INTEGER_TOL * (1.0 + x.abs());

    let case = if in_interval(kf, x - 1.0, (theta - l.max(lbar)) / cycle, tol) {
        1
    } else if in_interval(kf, (theta - l) / cycle, (theta - lbar) / cycle, tol) {
        2
    } else if in_interval(kf, (theta - lbar) / cycle, (theta - l) / cycle, tol) {
        3
    } else {
        debug_assert!(
            in_interval(kf, (theta - l.min(lbar)) / cycle, x, tol),
            "off-period count {kf} escaped every saturated case window"
        );
        4
    };

    let (pattern, zeta, q_min, q_max) = match case {
        1 => {
            let zeta = (kf + 1.0) * cycle - theta;
            let q_min = kf * mu * l + mu * (l - zeta);
            (OutcomePattern::MuLeLambdaNonExh1, zeta, q_min, q_min + mu * zeta)
        }
        2 => {
            let zeta = kf * cycle + l - theta;
            let q_min = kf * mu * l + mu * (l - lbar - zeta);
            (OutcomePattern::MuLeLambdaNonExh2, zeta, q_min, q_min + mu * lbar)
        }
        3 => {
            let zeta = kf * cycle + lbar - theta;
            let q_min = kf * mu * l;
            (OutcomePattern::MuLeLambdaNonExh3, zeta, q_min, q_min + mu * l)
        }
        _ => {
            let zeta = kf * cycle + lbar - theta;
            let q_min = kf * mu * l;
            (
                OutcomePattern::MuLeLambdaNonExh4,
                zeta,
                q_min,
                q_min + mu * (lbar - zeta),
            )
        }
    };

    ExoEquilibriumOutcome {
        pattern,
        joining: l,
        not_joining: cycle - l,
        post_clearance: 0.0,
        off_period_count: Some(k),
        phase_offset: Some(zeta),
        q_min,
        q_max,
    }
}

/// What to maximize: raw served rate or reward-weighted served rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "throughput")]
    Throughput,
    #[serde(rename = "reward")]
    Reward,
}

impl Objective {
    pub(crate) fn weight(&self, params: &QueueParams) -> f64 {
        match self {
            Objective::Throughput => 1.0,
            Objective::Reward => params.reward,
        }
    }
}

fn check_cycle_consistency(inst: &SystemInstance, schedules: &[OnOffSchedule]) -> Result<()> {
    assert_eq!(schedules.len(), inst.n(), "one schedule per queue");
    for (i, s) in schedules.iter().enumerate() {
        s.validate(i)?;
    }
    if inst.n() < 2 {
        return Ok(());
    }
    let total_on: f64 = schedules.iter().map(|s| s.on).sum();
    for (i, s) in schedules.iter().enumerate() {
        let expected = inst.total_switchover() + total_on - s.on;
        if (s.off - expected).abs() > 1e-9 * (1.0 + expected.abs()) {
            return Err(Error::CycleInconsistent {
                queue: i,
                actual: s.off,
                expected,
            });
        }
    }
    Ok(())
}

/// Long-run average objective of cycle-consistent exogenous schedules:
/// `sum_i w_i (mu_i (L_i - T_i) + lambda_i T_i) / (L_1 + Lbar_1)` with each
/// `T_i` the equilibrium post-clearance duration.
pub fn exogenous_objective(
    inst: &SystemInstance,
    schedules: &[OnOffSchedule],
    objective: Objective,
) -> Result<f64> {
    check_cycle_consistency(inst, schedules)?;
    let cycle = schedules[0].cycle();
    let mut total = 0.0;
    for (q, s) in inst.queues().iter().zip(schedules) {
        let outcome = classify_exogenous(q, s);
        let t = outcome.post_clearance;
        total += objective.weight(q) * (q.mu * (s.on - t) + q.lambda * t);
    }
    Ok(total / cycle)
}

/// Served customers per unit time at equilibrium.
pub fn exogenous_throughput(inst: &SystemInstance, schedules: &[OnOffSchedule]) -> Result<f64> {
    exogenous_objective(inst, schedules, Objective::Throughput)
}

/// Reward collected per unit time at equilibrium.
pub fn exogenous_reward(inst: &SystemInstance, schedules: &[OnOffSchedule]) -> Result<f64> {
    exogenous_objective(inst, schedules, Objective::Reward)
}

/// One linear piece of the periodic queue-length orbit. Times are measured
/// from the start of the off period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleSegment {
    pub start: f64,
    pub end: f64,
    pub q_start: f64,
    pub slope: f64,
    /// Whether arrivals join during this piece.
    pub joining: bool,
    /// Joining probability while they do (below one only for
    /// oversaturated queues holding the indifference point).
    pub join_fraction: f64,
}

impl CycleSegment {
    pub fn queue_at(&self, t: f64) -> f64 {
        self.q_start + self.slope * (t - self.start)
    }
}

/// Reconstruct the periodic orbit of a classified outcome as contiguous
/// linear segments covering `[0, cycle)`, anchored at the off-period start.
pub fn cycle_segments(
    params: &QueueParams,
    sched: &OnOffSchedule,
    outcome: &ExoEquilibriumOutcome,
) -> Vec<CycleSegment> {
    let (l, lbar, theta) = (sched.on, sched.off, params.theta);
    let (lambda, mu) = (params.lambda, params.mu);
    let cycle = sched.cycle();
    let saturated = lambda >= mu;
    let frac = if saturated { mu / lambda } else { 1.0 };
    let zeta = outcome.phase_offset.unwrap_or(0.0);
    let join = outcome.joining;

    // (start, slope while the piece lasts, joining flag)
    use OutcomePattern::*;
    let breaks: Vec<(f64, f64, bool)> = match outcome.pattern {
        ExhA => {
            let clear = lambda / (mu - lambda) * theta;
            vec![
                (0.0, 0.0, false),
                (lbar - theta, lambda, true),
                (lbar, -(mu - lambda), true),
                (lbar + clear, 0.0, true),
            ]
        }
        ExhB => vec![
            (0.0, 0.0, false),
            (lbar - theta, lambda, true),
            (lbar, -(mu - lambda), true),
            (lbar + (join - theta), -mu, false),
        ],
        ExhC => vec![
            (0.0, 0.0, false),
            (lbar - theta, lambda, true),
            (lbar - theta + join, 0.0, false),
            (lbar, -mu, false),
        ],
        ExhD => {
            let clear = lambda / (mu - lambda) * lbar;
            vec![
                (0.0, lambda, true),
                (lbar, -(mu - lambda), true),
                (lbar + clear, 0.0, true),
            ]
        }
        NonExh1 => vec![
            (0.0, lambda, true),
            (join - (l - zeta), 0.0, false),
            (lbar, -mu, false),
            (lbar + zeta, -(mu - lambda), true),
        ],
        NonExh2 => vec![
            (0.0, lambda, true),
            (lbar, -(mu - lambda), true),
            (lbar + zeta, -mu, false),
            (lbar + zeta + outcome.not_joining, -(mu - lambda), true),
        ],
        NonExh3 => vec![
            (0.0, 0.0, false),
            (zeta, lambda, true),
            (zeta + join, 0.0, false),
            (lbar, -mu, false),
        ],
        NonExh4 => vec![
            (0.0, 0.0, false),
            (zeta, lambda, true),
            (lbar, -(mu - lambda), true),
            (lbar + (join - (lbar - zeta)), -mu, false),
        ],
        NonExh5 => vec![
            (0.0, lambda, true),
            (zeta, 0.0, false),
            (zeta + outcome.not_joining, lambda, true),
            (lbar, -(mu - lambda), true),
        ],
        MuLeLambdaExhA => vec![
            (0.0, 0.0, false),
            (lbar - theta, mu, true),
            (lbar, 0.0, true),
            (lbar + l - theta, -mu, false),
        ],
        MuLeLambdaExhB => vec![
            (0.0, 0.0, false),
            (lbar - theta, mu, true),
            (lbar - theta + l, 0.0, false),
            (lbar, -mu, false),
        ],
        MuLeLambdaNonExh1 => vec![
            (0.0, mu, true),
            (zeta, 0.0, false),
            (lbar, -mu, false),
            (lbar + zeta, 0.0, true),
        ],
        MuLeLambdaNonExh2 => vec![
            (0.0, mu, true),
            (lbar, 0.0, true),
            (lbar + zeta, -mu, false),
            (lbar + zeta + lbar, 0.0, true),
        ],
        MuLeLambdaNonExh3 => vec![
            (0.0, 0.0, false),
            (zeta, mu, true),
            (zeta + l, 0.0, false),
            (lbar, -mu, false),
        ],
        MuLeLambdaNonExh4 => vec![
            (0.0, 0.0, false),
            (zeta, mu, true),
            (lbar, 0.0, true),
            (lbar + (l - (lbar - zeta)), -mu, false),
        ],
    };

    let mut segments = Vec::with_capacity(breaks.len());
    let mut q_cur = if outcome.pattern.is_exhaustive() {
        0.0
    } else {
        outcome.q_min
    };
    for (idx, &(start, slope, joining)) in breaks.iter().enumerate() {
        let end = breaks.get(idx + 1).map(|b| b.0).unwrap_or(cycle);
        if end - start > 1e-12 * cycle {
            segments.push(CycleSegment {
                start,
                end,
                q_start: q_cur,
                slope,
                joining,
                join_fraction: if joining { frac } else { 0.0 },
            });
            q_cur += slope * (end - start);
        }
    }
    segments
}

/// One sampled point of the periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceSample {
    pub t: f64,
    pub queue_length: f64,
    pub waiting_time: f64,
    pub joining: bool,
}

/// Sample the reconstructed orbit at `points + 1` equally spaced times
/// across one cycle (including both endpoints). The waiting time is
/// evaluated through [`waiting_time`] from the reconstructed state.
pub fn sample_cycle(
    params: &QueueParams,
    sched: &OnOffSchedule,
    outcome: &ExoEquilibriumOutcome,
    points: usize,
) -> Vec<TraceSample> {
    let segments = cycle_segments(params, sched, outcome);
    let cycle = sched.cycle();
    (0..=points)
        .map(|i| {
            let t = cycle * i as f64 / points.max(1) as f64;
            let t_wrapped = if t >= cycle { t - cycle } else { t };
            let seg = segments
                .iter()
                .rfind(|s| s.start <= t_wrapped + 1e-12)
                .unwrap_or(&segments[0]);
            let q = seg.queue_at(t_wrapped).max(0.0);
            let on = t_wrapped >= sched.off;
            let residual = if on { cycle - t_wrapped } else { sched.off - t_wrapped };
            let w = waiting_time(
                params,
                sched,
                &QueueState {
                    queue_length: q,
                    on,
                    residual,
                },
            );
            TraceSample {
                t: t_wrapped,
                queue_length: q,
                waiting_time: w,
                joining: seg.joining,
            }
        })
        .collect()
}
