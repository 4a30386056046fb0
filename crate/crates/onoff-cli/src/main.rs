//! Command-line front end: instance ingestion, solver dispatch, sweeps,
//! simulation export, and cross-validation.
//!
//! Exit codes: 0 on success, 1 on invalid input (the violated invariant is
//! named on stderr), 2 on an internal cross-check failure.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

use onoff::endo::{policy_objective, solve_equilibrium, ExhaustivePolicy};
use onoff::endo_opt::{optimize_exhaustive, two_queue_closed_form};
use onoff::exo::{
    classify_exogenous, exogenous_objective, Objective, OnOffSchedule,
};
use onoff::exo_opt::{optimize_exogenous, optimize_single_queue, SingleQueueConstraints};
use onoff::json::{
    eq_endo_report, exo_report, num, opt_endo_report, opt_exo_report, parse_instance,
    parse_policy, sig12,
};
use onoff::sim::{simulate_exhaustive, simulate_exogenous, SimConfig, SimTrace, WarmStart};
use onoff::{Error, SystemInstance};

#[derive(Parser)]
#[command(
    name = "onoff",
    version,
    about = "Equilibria and optimal controls for on-off fluid queues with strategic customers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectiveArg {
    Throughput,
    Reward,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Objective {
        match o {
            ObjectiveArg::Throughput => Objective::Throughput,
            ObjectiveArg::Reward => Objective::Reward,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify the equilibrium outcome of each queue under exogenous
    /// on-off durations
    EqExo {
        #[arg(long)]
        instance: PathBuf,
        /// Schedules as `on:off` pairs (`"2:4,3:3"`), inline JSON
        /// (`[{"on":2,"off":4},...]`), or a path to such JSON
        #[arg(long)]
        schedule: String,
        /// Sample the (t, q, W) orbit of each queue at this many points
        #[arg(long, default_value_t = 0)]
        trace_points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Optimal exogenous on-off durations (LP for n >= 2, constrained
    /// closed form for n = 1)
    OptExo {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "throughput")]
        objective: ObjectiveArg,
        /// Work limit for the single-queue closed form
        #[arg(long)]
        l_max: Option<f64>,
        /// Forced off/on ratio for the single-queue closed form
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equilibrium of an exhaustive service policy
    EqEndo {
        #[arg(long)]
        instance: PathBuf,
        /// Post-clearance durations, e.g. `0.5,0,0` (`infinity` allowed once)
        #[arg(long = "T")]
        t: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal exhaustive service policy
    OptEndo {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "throughput")]
        objective: ObjectiveArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Forward-simulate the fluid dynamics and export the converged cycle
    Simulate {
        #[arg(long)]
        instance: PathBuf,
        /// Exogenous schedules (same formats as eq-exo)
        #[arg(long, conflicts_with = "t")]
        schedule: Option<String>,
        /// Exhaustive policy post-clearance durations
        #[arg(long = "T")]
        t: Option<String>,
        #[arg(long)]
        dt: Option<f64>,
        /// Convergence horizon in cycles
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Objective and equilibrium along a grid of post-clearance durations
    /// for one queue
    Sweep {
        #[arg(long)]
        instance: PathBuf,
        /// Queue receiving the swept duration (1-based)
        #[arg(long)]
        queue: usize,
        /// Grid `start:end:step`
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value = "throughput")]
        objective: ObjectiveArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross-check closed forms, the LP route, and the simulator on one
    /// instance
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn verbose() -> bool {
    std::env::var("ONOFF_LOG").map(|v| !v.is_empty() && v != "0").unwrap_or(false)
}

fn log(msg: &str) {
    if verbose() {
        eprintln!("onoff: {msg}");
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            let internal = matches!(
                e,
                Error::LpInfeasible
                    | Error::LpUnbounded
                    | Error::SingularSubmatrix
                    | Error::SimulationStalled
            );
            if internal {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> onoff::Result<ExitCode> {
    match command {
        Command::EqExo {
            instance,
            schedule,
            trace_points,
            out,
            format,
        } => {
            let inst = load_instance(&instance)?;
            let schedules = parse_schedules(&schedule, inst.n())?;
            let throughput = exogenous_objective(&inst, &schedules, Objective::Throughput)?;
            let reward = exogenous_objective(&inst, &schedules, Objective::Reward)?;
            let outcomes: Vec<_> = inst
                .queues()
                .iter()
                .zip(&schedules)
                .map(|(q, s)| classify_exogenous(q, s))
                .collect();
            let doc = exo_report(&inst, &schedules, &outcomes, throughput, reward, trace_points);
            match format {
                Format::Json => emit(out.as_deref(), &pretty(&doc))?,
                Format::Csv => {
                    let mut csv = String::from(
                        "queue,pattern,on,off,joining,not_joining,post_clearance,q_min,q_max\n",
                    );
                    for (i, o) in outcomes.iter().enumerate() {
                        csv.push_str(&format!(
                            "{},{},{},{},{},{},{},{},{}\n",
                            i + 1,
                            o.pattern.label(),
                            fmt(schedules[i].on),
                            fmt(schedules[i].off),
                            fmt(o.joining),
                            fmt(o.not_joining),
                            fmt(o.post_clearance),
                            fmt(o.q_min),
                            fmt(o.q_max),
                        ));
                    }
                    emit(out.as_deref(), &csv)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::OptExo {
            instance,
            objective,
            l_max,
            beta,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let objective: Objective = objective.into();
            let doc = if inst.n() == 1 {
                let (l_max, beta) = match (l_max, beta) {
                    (Some(l), Some(b)) => (l, b),
                    _ => {
                        return Err(Error::Schema(
                            "single-queue optimization needs --l-max and --beta".into(),
                        ))
                    }
                };
                let cons = SingleQueueConstraints::new(l_max, beta)?;
                let q = inst.queue(0);
                let (sched, t, th) = optimize_single_queue(q, &cons)?;
                let pattern = classify_exogenous(q, &sched).pattern.label();
                let weight = match objective {
                    Objective::Throughput => 1.0,
                    Objective::Reward => q.reward,
                };
                serde_json::json!({
                    "objective": match objective {
                        Objective::Throughput => "throughput",
                        Objective::Reward => "reward",
                    },
                    "value": num(weight * th),
                    "L": [num(sched.on)],
                    "L_bar": [num(sched.off)],
                    "T": [num(t)],
                    "patterns": [pattern],
                })
            } else {
                let rec = optimize_exogenous(&inst, objective)?;
                opt_exo_report(&inst, &rec, objective)
            };
            emit(out.as_deref(), &pretty(&doc))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::EqEndo {
            instance,
            t,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let policy = parse_policy(&t)?;
            if policy.n() != inst.n() {
                return Err(Error::Schema(format!(
                    "policy has {} durations for {} queues",
                    policy.n(),
                    inst.n()
                )));
            }
            let eq = solve_equilibrium(&inst, &policy)?;
            let tv = policy.as_finite().expect("finite after solve");
            let throughput =
                onoff::endo::equilibrium_objective(&inst, &tv, &eq.alpha, Objective::Throughput);
            let reward =
                onoff::endo::equilibrium_objective(&inst, &tv, &eq.alpha, Objective::Reward);
            emit(out.as_deref(), &pretty(&eq_endo_report(&eq, throughput, reward)))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::OptEndo {
            instance,
            objective,
            out,
        } => {
            let inst = load_instance(&instance)?;
            let objective: Objective = objective.into();
            let (policy, value, trace) = optimize_exhaustive(&inst, objective)?;
            emit(
                out.as_deref(),
                &pretty(&opt_endo_report(&policy, value, &trace, objective)),
            )?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            instance,
            schedule,
            t,
            dt,
            horizon,
            out,
            format,
        } => {
            let inst = load_instance(&instance)?;
            let mut cfg = SimConfig {
                dt,
                ..SimConfig::default()
            };
            if let Some(h) = horizon {
                cfg.horizon_cycles = h;
            }
            let (trace, offsets) = match (schedule, t) {
                (Some(s), None) => {
                    let schedules = parse_schedules(&s, inst.n())?;
                    let trace = simulate_exogenous(&inst, &schedules, &cfg)?;
                    let offsets = exo_offsets(&inst, &schedules);
                    (trace, Some(offsets))
                }
                (None, Some(tv)) => {
                    let policy = parse_policy(&tv)?;
                    (simulate_exhaustive(&inst, &policy, &cfg)?, None)
                }
                _ => {
                    return Err(Error::Schema(
                        "simulate needs exactly one of --schedule or --T".into(),
                    ))
                }
            };
            log(&format!(
                "simulation converged: {} (cycles: {})",
                trace.converged(),
                trace.queues[0].cycles_run
            ));
            let body = match format {
                Format::Csv => sim_csv(&trace, offsets.as_deref()),
                Format::Json => pretty(&sim_json(&trace)),
            };
            emit(out.as_deref(), &body)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            instance,
            queue,
            grid,
            objective,
            out,
        } => {
            let inst = load_instance(&instance)?;
            if queue == 0 || queue > inst.n() {
                return Err(Error::Schema(format!(
                    "queue index {queue} out of range 1..={}",
                    inst.n()
                )));
            }
            let grid = parse_grid(&grid)?;
            let objective: Objective = objective.into();
            let rows = sweep(&inst, queue - 1, &grid, objective)?;
            let mut csv = String::from("t_j,objective");
            for i in 0..inst.n() {
                csv.push_str(&format!(",alpha_{}", i + 1));
            }
            csv.push('\n');
            for (t_j, value, alpha) in rows {
                csv.push_str(&fmt(t_j));
                csv.push(',');
                csv.push_str(&fmt(value));
                for a in alpha {
                    csv.push(',');
                    csv.push_str(&fmt(a));
                }
                csv.push('\n');
            }
            emit(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { instance, dt, out } => {
            let inst = load_instance(&instance)?;
            let report = validate(&inst, dt)?;
            emit(out.as_deref(), &report.text)?;
            if report.ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(2))
            }
        }
    }
}

fn load_instance(path: &PathBuf) -> onoff::Result<SystemInstance> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))?;
    parse_instance(&text)
}

fn parse_schedules(text: &str, n: usize) -> onoff::Result<Vec<OnOffSchedule>> {
    let trimmed = text.trim();
    let schedules: Vec<OnOffSchedule> = if trimmed.starts_with('[') {
        serde_json::from_str(trimmed).map_err(|e| Error::Schema(e.to_string()))?
    } else if std::path::Path::new(trimmed).exists() {
        let body = fs::read_to_string(trimmed).map_err(|e| Error::Schema(e.to_string()))?;
        serde_json::from_str(&body).map_err(|e| Error::Schema(e.to_string()))?
    } else {
        trimmed
            .split(',')
            .map(|pair| {
                let (on, off) = pair
                    .split_once(':')
                    .ok_or_else(|| Error::Schema(format!("expected on:off, got {pair:?}")))?;
                let on: f64 = on
                    .trim()
                    .parse()
                    .map_err(|e| Error::Schema(format!("bad on duration {on:?}: {e}")))?;
                let off: f64 = off
                    .trim()
                    .parse()
                    .map_err(|e| Error::Schema(format!("bad off duration {off:?}: {e}")))?;
                Ok(OnOffSchedule::new(on, off))
            })
            .collect::<onoff::Result<_>>()?
    };
    if schedules.len() != n {
        return Err(Error::Schema(format!(
            "{} schedules for {} queues",
            schedules.len(),
            n
        )));
    }
    Ok(schedules)
}

fn parse_grid(text: &str) -> onoff::Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Schema(format!("grid must be start:end:step, got {text:?}")));
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|e| Error::Schema(format!("bad grid start: {e}")))?;
    let end: f64 = parts[1]
        .parse()
        .map_err(|e| Error::Schema(format!("bad grid end: {e}")))?;
    let step: f64 = parts[2]
        .parse()
        .map_err(|e| Error::Schema(format!("bad grid step: {e}")))?;
    if !step.is_finite() || step <= 0.0 || end < start {
        return Err(Error::Schema("grid needs end >= start and step > 0".into()));
    }
    let count = ((end - start) / step).floor() as usize + 1;
    Ok((0..count).map(|k| start + step * k as f64).collect())
}

/// Evaluate the objective over the grid with a small worker pool; results
/// come back ordered by grid index regardless of completion order.
fn sweep(
    inst: &SystemInstance,
    queue: usize,
    grid: &[f64],
    objective: Objective,
) -> onoff::Result<Vec<(f64, f64, Vec<f64>)>> {
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(8)
        .min(grid.len().max(1));
    let mut rows: Vec<Option<(f64, f64, Vec<f64>)>> = vec![None; grid.len()];
    std::thread::scope(|scope| -> onoff::Result<()> {
        let mut handles = Vec::new();
        for w in 0..workers {
            let inst = &inst;
            handles.push(scope.spawn(move || -> onoff::Result<Vec<(usize, f64, f64, Vec<f64>)>> {
                let mut local = Vec::new();
                for (k, &t_j) in grid.iter().enumerate().skip(w).step_by(workers) {
                    let mut t = vec![0.0; inst.n()];
                    t[queue] = t_j;
                    let policy = ExhaustivePolicy::finite(t)?;
                    let (value, eq) = policy_objective(inst, &policy, objective)?;
                    let alpha = eq.map(|e| e.alpha).unwrap_or_default();
                    local.push((k, t_j, value, alpha));
                }
                Ok(local)
            }));
        }
        for h in handles {
            for (k, t_j, value, alpha) in h.join().expect("sweep worker panicked")? {
                rows[k] = Some((t_j, value, alpha));
            }
        }
        Ok(())
    })?;
    Ok(rows.into_iter().map(|r| r.expect("filled row")).collect())
}

/// Global on-period start offsets when the queues are laid out in service
/// order (only used to present per-queue clocks on one timeline).
fn exo_offsets(inst: &SystemInstance, schedules: &[OnOffSchedule]) -> Vec<f64> {
    let mut offsets = Vec::with_capacity(inst.n());
    let mut acc = 0.0;
    for (q, s) in inst.queues().iter().zip(schedules) {
        offsets.push(acc);
        acc += s.on + q.tau;
    }
    offsets
}

fn sim_csv(trace: &SimTrace, exo_on_offsets: Option<&[f64]>) -> String {
    let n = trace.queues.len();
    let mut csv = String::from("t");
    for kind in ["q", "W", "join", "on"] {
        for i in 1..=n {
            csv.push_str(&format!(",{kind}_{i}"));
        }
    }
    csv.push('\n');
    match exo_on_offsets {
        None => {
            // exhaustive run: all queues share the global sample clock
            let rows = trace.queues[0].samples.len();
            for r in 0..rows {
                csv.push_str(&fmt(trace.queues[0].samples[r].t));
                for field in 0..4 {
                    for q in &trace.queues {
                        let s = &q.samples[r.min(q.samples.len() - 1)];
                        csv.push(',');
                        match field {
                            0 => csv.push_str(&fmt(s.queue_length)),
                            1 => csv.push_str(&fmt(s.waiting_time)),
                            2 => csv.push_str(&fmt(s.join_fraction)),
                            _ => csv.push_str(if s.serving { "1" } else { "0" }),
                        }
                    }
                }
                csv.push('\n');
            }
        }
        Some(offsets) => {
            // per-queue clocks anchored at each off start; lay the queues
            // out in service order on a common cycle
            let cycle = trace.queues[0].measured.on_duration
                + trace.queues[0].measured.off_duration;
            let rows = trace.queues.iter().map(|q| q.samples.len()).min().unwrap();
            for r in 0..rows {
                let g = cycle * r as f64 / rows as f64;
                csv.push_str(&fmt(g));
                for field in 0..4 {
                    for (i, q) in trace.queues.iter().enumerate() {
                        // local clock starts when this queue's off begins
                        let off_start = offsets[i] + q.measured.on_duration;
                        let local = (g - off_start).rem_euclid(cycle);
                        let idx = ((local / cycle) * q.samples.len() as f64) as usize;
                        let s = &q.samples[idx.min(q.samples.len() - 1)];
                        csv.push(',');
                        match field {
                            0 => csv.push_str(&fmt(s.queue_length)),
                            1 => csv.push_str(&fmt(s.waiting_time)),
                            2 => csv.push_str(&fmt(s.join_fraction)),
                            _ => csv.push_str(if s.serving { "1" } else { "0" }),
                        }
                    }
                }
                csv.push('\n');
            }
        }
    }
    csv
}

fn sim_json(trace: &SimTrace) -> Value {
    serde_json::json!({
        "converged": trace.converged(),
        "certification_gap": num(trace.certification_gap),
        "queues": trace
            .queues
            .iter()
            .map(|q| {
                serde_json::json!({
                    "converged": q.converged,
                    "cycles_run": q.cycles_run,
                    "joining": num(q.measured.joining),
                    "not_joining": num(q.measured.not_joining),
                    "post_clearance": num(q.measured.post_clearance),
                    "q_min": num(q.measured.q_min),
                    "q_max": num(q.measured.q_max),
                    "throughput": num(q.measured.throughput),
                    "alpha": q.measured.alpha.map(sig12),
                    "on_duration": num(q.measured.on_duration),
                    "off_duration": num(q.measured.off_duration),
                })
            })
            .collect::<Vec<_>>(),
    })
}

struct ValidationReport {
    ok: bool,
    text: String,
}

/// Closed form vs. LP vs. simulator on one instance.
fn validate(inst: &SystemInstance, dt: Option<f64>) -> onoff::Result<ValidationReport> {
    let mut text = String::new();
    let mut ok = true;
    let stable = inst.require_stable().is_ok();

    // exogenous: classify a few schedules per queue and simulate them
    let mut worst_exo: f64 = 0.0;
    for (i, q) in inst.queues().iter().enumerate() {
        let base = q.theta;
        let candidates = [
            OnOffSchedule::new(base, 0.5 * base),
            OnOffSchedule::new(0.5 * base, 2.0 * base),
            OnOffSchedule::new(0.4 * base, 4.3 * base),
        ];
        for sched in candidates {
            let single = SystemInstance::new(vec![*q]).expect("valid single queue");
            let outcome = classify_exogenous(q, &sched);
            let step = dt.unwrap_or_else(|| {
                1e-3 * sched.on.min(sched.off).min(q.theta)
            });
            let cfg = SimConfig {
                dt: Some(step),
                horizon_cycles: 400,
                warm_start: WarmStart::Predicted,
                ..SimConfig::default()
            };
            let trace = simulate_exogenous(&single, &[sched], &cfg)?;
            let m = &trace.queues[0].measured;
            let tol = 5.0 * (q.lambda + q.mu) * step;
            let gap = (m.joining - outcome.joining)
                .abs()
                .max((m.post_clearance - outcome.post_clearance).abs())
                .max((m.q_min - outcome.q_min).abs())
                .max((m.q_max - outcome.q_max).abs());
            worst_exo = worst_exo.max(gap / tol);
            if gap > tol || !trace.queues[0].converged {
                ok = false;
                text.push_str(&format!(
                    "FAIL exogenous queue {} {:?}: gap {gap:.3e} (tolerance {tol:.3e}, converged {})\n",
                    i + 1,
                    outcome.pattern,
                    trace.queues[0].converged,
                ));
            }
        }
    }
    text.push_str(&format!(
        "exogenous classifier vs simulator: worst gap {:.3} of tolerance\n",
        worst_exo
    ));

    if stable {
        // pivoting vs greatest-element LP at T = 0 and a positive T
        let mut worst_lcp: f64 = 0.0;
        let c: Vec<f64> = inst.queues().iter().map(|q| q.c().unwrap()).collect();
        let policies = [
            ExhaustivePolicy::zero(inst.n()),
            ExhaustivePolicy::finite(c.iter().map(|ci| 0.3 * ci).collect())?,
        ];
        for policy in &policies {
            let eq = solve_equilibrium(inst, policy)?;
            let via_lp = onoff::endo::equilibrium_via_lp(inst, policy)?;
            for (a, b) in eq.alpha.iter().zip(&via_lp) {
                worst_lcp = worst_lcp.max((a - b).abs());
            }
        }
        if worst_lcp > 1e-8 {
            ok = false;
            text.push_str(&format!("FAIL pivoting vs LP: max-abs {worst_lcp:.3e}\n"));
        } else {
            text.push_str(&format!(
                "pivoting vs greatest-element LP: max-abs {worst_lcp:.3e}\n"
            ));
        }

        // equilibrium simulator at the pure exhaustive policy
        if inst.total_switchover() > 0.0 {
            let cfg = SimConfig {
                dt,
                horizon_cycles: 600,
                ..SimConfig::default()
            };
            let trace = simulate_exhaustive(inst, &ExhaustivePolicy::zero(inst.n()), &cfg)?;
            let eq = solve_equilibrium(inst, &ExhaustivePolicy::zero(inst.n()))?;
            let mut worst_alpha: f64 = 0.0;
            for (qs, a) in trace.queues.iter().zip(&eq.alpha) {
                worst_alpha = worst_alpha.max((qs.measured.alpha.unwrap_or(f64::NAN) - a).abs());
            }
            if !trace.converged() || worst_alpha > 0.02 || trace.certification_gap > 0.02 {
                ok = false;
                text.push_str(&format!(
                    "FAIL exhaustive simulator: converged {}, alpha gap {worst_alpha:.3e}, certification gap {:.3e}\n",
                    trace.converged(),
                    trace.certification_gap,
                ));
            } else {
                text.push_str(&format!(
                    "exhaustive simulator vs pivoting: alpha gap {worst_alpha:.3e}, certification gap {:.3e}\n",
                    trace.certification_gap,
                ));
            }
        }

        // optimizer vs a grid on the chosen queue
        let (policy, value, trace) = optimize_exhaustive(inst, Objective::Throughput)?;
        if let Some(j) = trace.chosen_queue {
            let t_hi = trace.boundaries.last().copied().unwrap_or(0.0).max(0.0)
                + 2.0 * (inst.total_switchover() + c.iter().sum::<f64>());
            let mut grid_best = f64::NEG_INFINITY;
            for k in 0..=32 {
                let t_j = t_hi * k as f64 / 32.0;
                let mut t = vec![0.0; inst.n()];
                t[j] = t_j;
                let (v, _) = policy_objective(inst, &ExhaustivePolicy::finite(t)?, Objective::Throughput)?;
                grid_best = grid_best.max(v);
            }
            if value < grid_best - 1e-6 {
                ok = false;
                text.push_str(&format!(
                    "FAIL optimizer: value {value:.9} below grid best {grid_best:.9}\n"
                ));
            } else {
                text.push_str(&format!(
                    "optimizer value {value:.9} >= 33-point grid best {grid_best:.9}\n"
                ));
            }
        } else {
            text.push_str("optimizer: first-best at the pure exhaustive policy\n");
        }
        let _ = policy;

        // two-queue closed form
        if inst.n() == 2 {
            let closed = two_queue_closed_form(inst)?;
            let eq = solve_equilibrium(inst, &ExhaustivePolicy::zero(2))?;
            let gap = (closed.alpha0[0] - eq.alpha[0])
                .abs()
                .max((closed.alpha0[1] - eq.alpha[1]).abs());
            if gap > 1e-8 || (closed.objective - value).abs() > 1e-7 * (1.0 + value.abs()) {
                ok = false;
                text.push_str(&format!(
                    "FAIL two-queue closed form: alpha gap {gap:.3e}, objective {} vs {value}\n",
                    closed.objective,
                ));
            } else {
                text.push_str("two-queue closed form agrees with the general solvers\n");
            }
        }
    } else {
        text.push_str("skipping exhaustive-policy checks: some queue has lambda >= mu\n");
    }

    text.push_str(if ok { "OK\n" } else { "CHECKS FAILED\n" });
    Ok(ValidationReport { ok, text })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable document");
    s.push('\n');
    s
}

fn fmt(x: f64) -> String {
    let r = sig12(x);
    let mut out = format!("{r}");
    if out.contains('.') || out.contains('e') || out.contains("inf") || out.contains("NaN") {
    } else {
        out.push_str(".0");
    }
    out
}

fn emit(out: Option<&std::path::Path>, body: &str) -> onoff::Result<()> {
    use std::io::Write;
    match out {
        Some(path) => fs::write(path, body)
            .map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display()))),
        None => {
            // a closed pipe (e.g. `| head`) is not an error
            let _ = std::io::stdout().write_all(body.as_bytes());
            Ok(())
        }
    }
}
