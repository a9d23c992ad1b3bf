//! `dtc-probe`: command-line front end for Floquet QFI simulations.

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::commands::Task;
use crate::config::{Angle, Format, Grid, RunConfig, Rule};
use crate::error::{exit, CliResult};

#[derive(Parser)]
#[command(name = "dtc-probe", version, about = "Floquet time-crystal QFI simulator")]
struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Data file to write (stdout when omitted). A `<out>.meta.json` sidecar is written next to it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct ProbeArgs {
    /// Chain length L.
    #[arg(long)]
    sites: Option<usize>,
    /// Interaction exponent γ.
    #[arg(long)]
    gamma: Option<u32>,
    /// Pulse error ε.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Detuning ω in radians or as `<x>pi/2`.
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<Angle>,
    /// Initial basis state index.
    #[arg(long)]
    init: Option<u64>,
}

#[derive(Args, Default)]
struct ScalingArgs {
    /// Comma-separated chain lengths.
    #[arg(long, value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    /// Detuning of the DTC-phase series.
    #[arg(long)]
    dtc_omega: Option<Angle>,
    /// Cycle count at which sizes are compared.
    #[arg(long)]
    cycles: Option<usize>,
    /// Cycle count of the threshold scans.
    #[arg(long)]
    detect_cycles: Option<usize>,
    /// ω grid for threshold scans.
    #[arg(long)]
    grid: Option<Grid>,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve one probe and record fidelity, QFI and bound per cycle.
    Simulate {
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long)]
        cycles: Option<usize>,
    },
    /// QFI along one axis (omega, epsilon, L, n, gamma).
    Sweep {
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long)]
        axis: Option<String>,
        /// `log:lo:hi:n`, `lin:lo:hi:n` or a comma list.
        #[arg(long)]
        grid: Option<Grid>,
        #[arg(long)]
        cycles: Option<usize>,
    },
    /// Finite-size threshold ω_max for several chain lengths.
    Threshold {
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        grid: Option<Grid>,
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long, value_enum)]
        rule: Option<Rule>,
        #[arg(long)]
        factor: Option<f64>,
    },
    /// Size exponents β at small ω and at the threshold for one γ.
    Scaling {
        #[command(flatten)]
        probe: ProbeArgs,
        #[command(flatten)]
        scaling: ScalingArgs,
    },
    /// β for several γ and the linear fit β = aγ + b.
    GammaScan {
        #[command(flatten)]
        probe: ProbeArgs,
        #[command(flatten)]
        scaling: ScalingArgs,
        #[arg(long, value_delimiter = ',')]
        gammas: Option<Vec<u32>>,
        /// Also fit β at the threshold (runs threshold scans).
        #[arg(long)]
        with_threshold: bool,
    },
    /// QFI as a function of the pulse error ε.
    EpsilonSweep {
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long)]
        grid: Option<Grid>,
        #[arg(long)]
        cycles: Option<usize>,
    },
    /// Write the gate schedule as OpenQASM 3.
    ExportQasm {
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long)]
        measure: bool,
    },
    /// Compare the QFI of every cycle with the seminorm ceiling.
    BoundCheck {
        #[command(flatten)]
        probe: ProbeArgs,
        #[arg(long)]
        cycles: Option<usize>,
    },
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl ProbeArgs {
    fn apply(self, c: &mut RunConfig) {
        set(&mut c.probe.sites, self.sites);
        set(&mut c.probe.gamma, self.gamma);
        set(&mut c.probe.epsilon, self.epsilon);
        set(&mut c.probe.omega, self.omega);
        set(&mut c.probe.init_state, self.init);
    }
}

impl ScalingArgs {
    fn apply(self, c: &mut RunConfig) {
        let s = &mut c.scaling;
        set(&mut s.sizes, self.sizes);
        set(&mut s.dtc_omega, self.dtc_omega);
        set(&mut s.cycles, self.cycles);
        set(&mut s.detect_cycles, self.detect_cycles);
        set(&mut s.grid, self.grid);
    }
}

fn resolve(cli: Cli) -> CliResult<(Task, RunConfig)> {
    let mut c = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if cli.out.is_some() {
        c.output.path = cli.out;
    }
    set(&mut c.output.format, cli.format);
    set(&mut c.workers, cli.workers);
    let task = match cli.command {
        Command::Simulate { probe, cycles } => {
            probe.apply(&mut c);
            set(&mut c.simulate.cycles, cycles);
            Task::Simulate
        }
        Command::Sweep { probe, axis, grid, cycles } => {
            probe.apply(&mut c);
            set(&mut c.sweep.axis, axis);
            set(&mut c.sweep.grid, grid);
            set(&mut c.sweep.cycles, cycles);
            Task::Sweep
        }
        Command::Threshold { probe, sizes, grid, cycles, rule, factor } => {
            probe.apply(&mut c);
            set(&mut c.threshold.sizes, sizes);
            set(&mut c.threshold.grid, grid);
            set(&mut c.threshold.cycles, cycles);
            set(&mut c.threshold.rule, rule);
            set(&mut c.threshold.factor, factor);
            Task::Threshold
        }
        Command::Scaling { probe, scaling } => {
            probe.apply(&mut c);
            scaling.apply(&mut c);
            Task::Scaling
        }
        Command::GammaScan { probe, scaling, gammas, with_threshold } => {
            probe.apply(&mut c);
            scaling.apply(&mut c);
            set(&mut c.scaling.gammas, gammas);
            c.scaling.with_threshold |= with_threshold;
            Task::GammaScan
        }
        Command::EpsilonSweep { probe, grid, cycles } => {
            probe.apply(&mut c);
            set(&mut c.epsilon_sweep.grid, grid);
            set(&mut c.epsilon_sweep.cycles, cycles);
            Task::EpsilonSweep
        }
        Command::ExportQasm { probe, cycles, measure } => {
            probe.apply(&mut c);
            set(&mut c.qasm.cycles, cycles);
            c.qasm.measure |= measure;
            Task::ExportQasm
        }
        Command::BoundCheck { probe, cycles } => {
            probe.apply(&mut c);
            set(&mut c.bound_check.cycles, cycles);
            Task::BoundCheck
        }
    };
    c.probe_spec()?;
    Ok((task, c))
}

fn execute(task: Task, config: &RunConfig) -> CliResult<()> {
    #[cfg(feature = "parallel")]
    if config.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.workers)
            .build()
            .map_err(|e| error::CliError::config("workers", e.to_string()))?;
        return pool.install(|| commands::run(task, config));
    }
    commands::run(task, config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = resolve(cli).and_then(|(task, config)| execute(task, &config));
    match outcome {
        Ok(()) => ExitCode::from(exit::OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
