use dtc_probe::analysis::{
    beta_of_gamma, fit_size_exponent, qfi_vs_size, run_sweep, scaling_study, sweep_qfi_epsilon, threshold_of_size,
    threshold_scan, LinearFit, PowerLawFit, ScalingPlan, SweepSpec,
};
use dtc_probe::circuit::{build_schedule, emit_qasm};
use dtc_probe::metrology::{qfi, seminorm_bound};
use dtc_probe::{FloquetOperator, InteractionTable, ProbeSpec};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{require_nonempty, require_positive, RunConfig};
use crate::error::{CliError, CliResult};
use crate::output::{emit, render_rows};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Simulate,
    Sweep,
    Threshold,
    Scaling,
    GammaScan,
    EpsilonSweep,
    ExportQasm,
    BoundCheck,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Simulate => "simulate",
            Task::Sweep => "sweep",
            Task::Threshold => "threshold",
            Task::Scaling => "scaling",
            Task::GammaScan => "gamma-scan",
            Task::EpsilonSweep => "epsilon-sweep",
            Task::ExportQasm => "export-qasm",
            Task::BoundCheck => "bound-check",
        }
    }
}

pub fn run(task: Task, config: &RunConfig) -> CliResult<()> {
    match task {
        Task::Simulate => simulate(config),
        Task::Sweep => sweep(config),
        Task::Threshold => threshold(config),
        Task::Scaling => scaling(config),
        Task::GammaScan => gamma_scan(config),
        Task::EpsilonSweep => epsilon_sweep(config),
        Task::ExportQasm => export_qasm(config),
        Task::BoundCheck => bound_check(config),
    }
}

fn finish<T: Serialize>(config: &RunConfig, task: Task, rows: &[T], summary: Value) -> CliResult<()> {
    let bytes = render_rows(rows, config.output.format)?;
    report(task, &summary);
    emit(config, task.name(), &bytes, rows.len(), &summary)
}

/// Human-readable summary on stderr, one `key = value` per line.
fn report(task: Task, summary: &Value) {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, v, out);
                }
            }
            other => out.push(format!("{prefix} = {other}")),
        }
    }
    let mut lines = Vec::new();
    walk("", summary, &mut lines);
    for line in lines {
        eprintln!("[{}] {line}", task.name());
    }
}

fn power_law(fit: &PowerLawFit) -> Value {
    json!({
        "exponent": fit.exponent,
        "prefactor": fit.prefactor(),
        "r_squared": fit.r_squared,
        "points": fit.n_points,
    })
}

fn linear(fit: &LinearFit) -> Value {
    json!({ "a": fit.slope, "b": fit.intercept, "r_squared": fit.r_squared, "points": fit.n_points })
}

#[derive(Serialize)]
struct SimulateRow {
    cycle: usize,
    fidelity: f64,
    qfi: f64,
    bound: f64,
}

fn simulate(config: &RunConfig) -> CliResult<()> {
    let spec = config.probe_spec()?;
    let table = InteractionTable::build(spec.sites(), spec.gamma())?;
    let op = FloquetOperator::new(spec, &table)?;
    let mut rows = Vec::with_capacity(config.simulate.cycles + 1);
    op.run(op.prepare(), config.simulate.cycles, |s| {
        rows.push(SimulateRow {
            cycle: s.cycle(),
            fidelity: s.revival_fidelity(),
            qfi: qfi(s)?,
            bound: seminorm_bound(spec.sites(), spec.gamma(), s.cycle())?,
        });
        Ok(())
    })?;
    let last = rows.last().expect("cycle 0 is always recorded");
    let min_even = rows
        .iter()
        .filter(|r| r.cycle % 2 == 0)
        .map(|r| r.fidelity)
        .fold(f64::INFINITY, f64::min);
    let per_n2 = if last.cycle > 0 { last.qfi / (last.cycle as f64).powi(2) } else { 0.0 };
    let summary = json!({
        "final_qfi": last.qfi,
        "final_qfi_over_n2": per_n2,
        "min_even_cycle_fidelity": min_even,
    });
    finish(config, Task::Simulate, &rows, summary)
}

fn sweep(config: &RunConfig) -> CliResult<()> {
    let axis = config.sweep_axis()?;
    let spec = SweepSpec {
        axis,
        grid: config.sweep.grid.points("sweep.grid")?,
        template: config.probe_spec()?,
        cycles: config.sweep.cycles,
    };
    let rows = run_sweep(&spec).map_err(|e| CliError::from(e).within("sweep"))?;
    let peak = rows
        .iter()
        .max_by(|a, b| a.qfi.total_cmp(&b.qfi))
        .map(|r| json!({ "qfi": r.qfi, "omega": r.omega, "epsilon": r.epsilon, "sites": r.sites, "gamma": r.gamma, "cycle": r.cycle }));
    let summary = json!({ "axis": axis, "points": rows.len(), "max": peak });
    finish(config, Task::Sweep, &rows, summary)
}

fn threshold(config: &RunConfig) -> CliResult<()> {
    let t = &config.threshold;
    require_nonempty("threshold.sizes", &t.sizes)?;
    require_positive("threshold.cycles", t.cycles)?;
    let rule = config.peak_rule()?;
    let grid = t.grid.points("threshold.grid")?;
    let template = config.probe_spec()?;
    let rows = threshold_scan(&template, &t.sizes, &grid, t.cycles, rule)
        .map_err(|e| CliError::from(e).within("threshold"))?;
    let fit = if rows.len() >= 3 {
        power_law(&threshold_of_size(&rows)?)
    } else {
        Value::Null
    };
    finish(config, Task::Threshold, &rows, json!({ "omega_max_vs_sites": fit }))
}

fn plan(config: &RunConfig) -> CliResult<ScalingPlan> {
    let s = &config.scaling;
    require_nonempty("scaling.sizes", &s.sizes)?;
    require_positive("scaling.cycles", s.cycles)?;
    require_positive("scaling.detect_cycles", s.detect_cycles)?;
    Ok(ScalingPlan {
        sizes: s.sizes.clone(),
        epsilon: config.probe.epsilon,
        dtc_omega: s.dtc_omega.0,
        omega_grid: s.grid.points("scaling.grid")?,
        scaling_cycles: s.cycles,
        detect_cycles: s.detect_cycles,
        rule: config.peak_rule()?,
    })
}

#[derive(Serialize)]
struct ScalingRow {
    sites: usize,
    omega_dtc: f64,
    qfi_dtc: f64,
    omega_max: f64,
    qfi_threshold: f64,
}

fn scaling(config: &RunConfig) -> CliResult<()> {
    config.probe_spec()?;
    let plan = plan(config)?;
    let study = scaling_study(config.probe.gamma, &plan).map_err(|e| CliError::from(e).within("scaling"))?;
    let rows: Vec<ScalingRow> = study
        .dtc
        .iter()
        .zip(&study.at_threshold)
        .map(|(d, t)| ScalingRow {
            sites: d.sites,
            omega_dtc: d.omega,
            qfi_dtc: d.qfi,
            omega_max: t.omega,
            qfi_threshold: t.qfi,
        })
        .collect();
    let summary = json!({
        "gamma": study.gamma,
        "beta_dtc": power_law(&study.beta_dtc),
        "beta_threshold": power_law(&study.beta_threshold),
        "omega_max_vs_sites": power_law(&study.omega_max_fit),
    });
    finish(config, Task::Scaling, &rows, summary)
}

#[derive(Serialize)]
struct GammaRow {
    gamma: u32,
    phase: &'static str,
    beta: f64,
    log_prefactor: f64,
    r_squared: f64,
    points: usize,
}

impl GammaRow {
    fn new(gamma: u32, phase: &'static str, fit: &PowerLawFit) -> Self {
        GammaRow {
            gamma,
            phase,
            beta: fit.exponent,
            log_prefactor: fit.log_prefactor,
            r_squared: fit.r_squared,
            points: fit.n_points,
        }
    }
}

fn gamma_scan(config: &RunConfig) -> CliResult<()> {
    config.probe_spec()?;
    let plan = plan(config)?;
    let gammas = &config.scaling.gammas;
    require_nonempty("scaling.gammas", gammas)?;
    let mut rows = Vec::new();
    let mut dtc = Vec::new();
    let mut thr = Vec::new();
    for &g in gammas {
        if config.scaling.with_threshold {
            let study = scaling_study(g, &plan).map_err(|e| CliError::from(e).within("scaling"))?;
            rows.push(GammaRow::new(g, "dtc", &study.beta_dtc));
            rows.push(GammaRow::new(g, "threshold", &study.beta_threshold));
            dtc.push(study.beta_dtc.exponent);
            thr.push(study.beta_threshold.exponent);
        } else {
            let template = ProbeSpec::ferromagnetic(plan.sizes[0], g, plan.epsilon, plan.dtc_omega)
                .map_err(|e| CliError::from(e).within("scaling"))?;
            let points: Vec<(usize, f64)> = plan.sizes.iter().map(|&l| (l, plan.dtc_omega)).collect();
            let fit = fit_size_exponent(&qfi_vs_size(&template, &points, plan.scaling_cycles)?)?;
            rows.push(GammaRow::new(g, "dtc", &fit));
            dtc.push(fit.exponent);
        }
    }
    let ansatz = |betas: &[f64]| -> CliResult<Value> {
        if betas.len() >= 3 {
            Ok(linear(&beta_of_gamma(gammas, betas)?))
        } else {
            Ok(Value::Null)
        }
    };
    let summary = json!({
        "dtc": ansatz(&dtc)?,
        "threshold": if thr.is_empty() { Value::Null } else { ansatz(&thr)? },
    });
    finish(config, Task::GammaScan, &rows, summary)
}

fn epsilon_sweep(config: &RunConfig) -> CliResult<()> {
    let grid = config.epsilon_sweep.grid.points("epsilon_sweep.grid")?;
    let rows = sweep_qfi_epsilon(&config.probe_spec()?, &grid, config.epsilon_sweep.cycles)
        .map_err(|e| CliError::from(e).within("epsilon_sweep"))?;
    let best = rows
        .iter()
        .max_by(|a, b| a.qfi.total_cmp(&b.qfi))
        .map(|r| json!({ "epsilon": r.epsilon, "qfi": r.qfi }));
    finish(config, Task::EpsilonSweep, &rows, json!({ "points": rows.len(), "max": best }))
}

fn export_qasm(config: &RunConfig) -> CliResult<()> {
    let spec = config.probe_spec()?;
    let schedule = build_schedule(&spec, config.qasm.cycles, config.qasm.measure)?;
    let text = emit_qasm(&schedule);
    let summary = json!({
        "sites": schedule.sites,
        "cycles": schedule.cycles,
        "two_qubit_gates": schedule.two_qubit_gate_count(),
        "single_qubit_gates": schedule.single_qubit_gate_count(),
        "measure": schedule.measure,
    });
    report(Task::ExportQasm, &summary);
    emit(config, Task::ExportQasm.name(), text.as_bytes(), schedule.cycles, &summary)
}

#[derive(Serialize)]
struct BoundRow {
    cycle: usize,
    qfi: f64,
    bound: f64,
    ratio: Option<f64>,
}

fn bound_check(config: &RunConfig) -> CliResult<()> {
    let spec = config.probe_spec()?;
    let table = InteractionTable::build(spec.sites(), spec.gamma())?;
    let op = FloquetOperator::new(spec, &table)?;
    let mut rows = Vec::new();
    op.run(op.prepare(), config.bound_check.cycles, |s| {
        let q = qfi(s)?;
        let bound = seminorm_bound(spec.sites(), spec.gamma(), s.cycle())?;
        rows.push(BoundRow {
            cycle: s.cycle(),
            qfi: q,
            bound,
            ratio: (bound > 0.0).then(|| q / bound),
        });
        Ok(())
    })?;
    let max_ratio = rows.iter().filter_map(|r| r.ratio).fold(0.0, f64::max);
    finish(config, Task::BoundCheck, &rows, json!({ "max_ratio": max_ratio, "violations": 0 }))
}
