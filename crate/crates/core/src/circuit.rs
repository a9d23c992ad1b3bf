//! Gate-level realization of the Floquet drive as OpenQASM 3.
//!
//! One cycle is `L − 1` nearest-neighbour ZZ rotations `exp(−i θ_j Z Z)` with
//! `θ_j = (π/2 − ω) j^γ`, followed by `exp(−i Φ X)` on every qubit. The
//! emitted text uses the standard-library half-angle conventions
//! `rzz(φ) = exp(−i φ/2 Z⊗Z)` and `rx(φ) = exp(−i φ/2 X)`, so every angle is
//! written as twice the physical one.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{bond_weights, ProbeSpec, StateVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateSchedule {
    pub sites: usize,
    pub cycles: usize,
    /// Unreduced per-bond angles `θ_j`, `j = 1 … L−1`.
    pub zz_angles: Vec<f64>,
    /// Pulse angle Φ.
    pub rx_angle: f64,
    pub measure: bool,
}

/// One emitted instruction. Angles use the half-angle gate convention.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Rzz { angle: f64, a: usize, b: usize },
    Rx { angle: f64, qubit: usize },
    Measure { qubit: usize },
}

pub fn build_schedule(spec: &ProbeSpec, cycles: usize, measure: bool) -> Result<GateSchedule> {
    let theta = spec.phase_angle();
    let zz_angles = bond_weights(spec.sites(), spec.gamma())?
        .into_iter()
        .map(|w| theta * w as f64)
        .collect();
    Ok(GateSchedule {
        sites: spec.sites(),
        cycles,
        zz_angles,
        rx_angle: spec.pulse_angle(),
        measure,
    })
}

impl GateSchedule {
    /// `θ_j mod 2π`, the values written to the circuit.
    pub fn reduced_zz_angles(&self) -> Vec<f64> {
        self.zz_angles.iter().map(|t| t.rem_euclid(TAU)).collect()
    }

    pub fn two_qubit_gate_count(&self) -> usize {
        self.cycles * (self.sites - 1)
    }

    pub fn single_qubit_gate_count(&self) -> usize {
        self.cycles * self.sites
    }

    /// Instructions in emission order.
    pub fn gates(&self) -> Vec<Gate> {
        let zz: Vec<f64> = self.reduced_zz_angles().into_iter().map(|t| 2.0 * t).collect();
        let rx = 2.0 * self.rx_angle;
        let mut gates = Vec::with_capacity(
            self.two_qubit_gate_count() + self.single_qubit_gate_count() + self.sites,
        );
        for _ in 0..self.cycles {
            for (j, &angle) in zz.iter().enumerate() {
                gates.push(Gate::Rzz { angle, a: j, b: j + 1 });
            }
            for qubit in 0..self.sites {
                gates.push(Gate::Rx { angle: rx, qubit });
            }
        }
        if self.measure {
            for qubit in 0..self.sites {
                gates.push(Gate::Measure { qubit });
            }
        }
        gates
    }
}

/// Formats an angle: exact multiples of π/2 symbolically, everything else
/// with 17 significant digits.
fn format_angle(x: f64) -> String {
    match x {
        _ if x == 0.0 => "0".to_string(),
        _ if x == FRAC_PI_2 => "pi/2".to_string(),
        _ if x == PI => "pi".to_string(),
        _ if x == 3.0 * FRAC_PI_2 => "3*pi/2".to_string(),
        _ => format!("{x:.16e}"),
    }
}

fn parse_angle(s: &str) -> Result<f64> {
    match s {
        "0" => Ok(0.0),
        "pi/2" => Ok(FRAC_PI_2),
        "pi" => Ok(PI),
        "3*pi/2" => Ok(3.0 * FRAC_PI_2),
        other => other
            .parse::<f64>()
            .map_err(|_| Error::Domain(format!("unrecognised angle `{other}`"))),
    }
}

/// Renders the schedule as an OpenQASM 3 program.
pub fn emit_qasm(schedule: &GateSchedule) -> String {
    let mut out = String::new();
    let l = schedule.sites;
    out.push_str("OPENQASM 3.0;\n");
    out.push_str("include \"stdgates.inc\";\n");
    out.push_str("// kicked Stark Ising Floquet drive\n");
    out.push_str("// convention: rzz(a) = exp(-i a/2 Z.Z), rx(a) = exp(-i a/2 X)\n");
    out.push_str("// so rzz(2 theta_j) = exp(-i theta_j Z.Z) and rx(2 Phi) = exp(-i Phi X)\n");
    let _ = writeln!(out, "// sites = {l}, cycles = {}", schedule.cycles);
    let _ = writeln!(out, "qubit[{l}] q;");
    if schedule.measure {
        let _ = writeln!(out, "bit[{l}] c;");
    }
    let mut cycle = 0;
    for gate in schedule.gates() {
        match gate {
            Gate::Rzz { angle, a, b } => {
                if a == 0 {
                    cycle += 1;
                    let _ = writeln!(out, "// cycle {cycle}");
                }
                let _ = writeln!(out, "rzz({}) q[{a}], q[{b}];", format_angle(angle));
            }
            Gate::Rx { angle, qubit } => {
                let _ = writeln!(out, "rx({}) q[{qubit}];", format_angle(angle));
            }
            Gate::Measure { qubit } => {
                let _ = writeln!(out, "c[{qubit}] = measure q[{qubit}];");
            }
        }
    }
    out
}

fn parse_qubit(s: &str) -> Result<usize> {
    s.trim()
        .strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|i| i.parse().ok())
        .ok_or_else(|| Error::Domain(format!("bad qubit operand `{s}`")))
}

/// Reads back the subset of OpenQASM produced by [`emit_qasm`]. Returns the
/// register size and the instruction list.
pub fn parse_emitted_qasm(text: &str) -> Result<(usize, Vec<Gate>)> {
    let mut sites = None;
    let mut gates = Vec::new();
    for raw in text.lines() {
        let line = raw.trim();
        if line.is_empty()
            || line.starts_with("//")
            || line.starts_with("OPENQASM")
            || line.starts_with("include")
            || line.starts_with("bit[")
        {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| Error::Domain(format!("missing `;` in `{line}`")))?;
        if let Some(rest) = stmt.strip_prefix("qubit[") {
            let n = rest
                .split(']')
                .next()
                .and_then(|n| n.parse().ok())
                .ok_or_else(|| Error::Domain(format!("bad register `{line}`")))?;
            sites = Some(n);
        } else if let Some(rest) = stmt.strip_prefix("rzz(") {
            let (angle, args) = rest
                .split_once(')')
                .ok_or_else(|| Error::Domain(format!("bad gate `{line}`")))?;
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| Error::Domain(format!("rzz needs two qubits: `{line}`")))?;
            gates.push(Gate::Rzz {
                angle: parse_angle(angle)?,
                a: parse_qubit(a)?,
                b: parse_qubit(b)?,
            });
        } else if let Some(rest) = stmt.strip_prefix("rx(") {
            let (angle, arg) = rest
                .split_once(')')
                .ok_or_else(|| Error::Domain(format!("bad gate `{line}`")))?;
            gates.push(Gate::Rx {
                angle: parse_angle(angle)?,
                qubit: parse_qubit(arg)?,
            });
        } else if let Some((_, q)) = stmt.split_once("= measure") {
            gates.push(Gate::Measure { qubit: parse_qubit(q)? });
        } else {
            return Err(Error::Domain(format!("unsupported statement `{line}`")));
        }
    }
    let sites = sites.ok_or_else(|| Error::Domain("no qubit register declared".into()))?;
    Ok((sites, gates))
}

/// Applies `gates` one at a time to `state`. Measurements are skipped.
pub fn simulate_gates(state: &mut StateVector, gates: &[Gate]) -> Result<()> {
    let sites = state.sites();
    let check = |q: usize| {
        if q < sites {
            Ok(())
        } else {
            Err(Error::Domain(format!("qubit {q} outside register of {sites}")))
        }
    };
    for gate in gates {
        match *gate {
            Gate::Rzz { angle, a, b } => {
                check(a)?;
                check(b)?;
                let half = 0.5 * angle;
                let same = Complex64::from_polar(1.0, -half);
                let differ = Complex64::from_polar(1.0, half);
                for (z, amp) in state.amplitudes_mut().iter_mut().enumerate() {
                    let parity = ((z >> a) ^ (z >> b)) & 1;
                    *amp *= if parity == 0 { same } else { differ };
                }
            }
            Gate::Rx { angle, qubit } => {
                check(qubit)?;
                let (s, c) = (0.5 * angle).sin_cos();
                let mask = 1usize << qubit;
                let amps = state.amplitudes_mut();
                for z in 0..amps.len() {
                    if z & mask == 0 {
                        let (x, y) = (amps[z], amps[z | mask]);
                        amps[z] = c * x + Complex64::new(0.0, -s) * y;
                        amps[z | mask] = Complex64::new(0.0, -s) * x + c * y;
                    }
                }
            }
            Gate::Measure { qubit } => check(qubit)?,
        }
    }
    Ok(())
}
