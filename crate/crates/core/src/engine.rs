//! Exact state-vector evolution of the kicked Stark Ising chain.
//!
//! One Floquet cycle is a diagonal pass `D = exp(-i θ H_I)` with
//! `θ = π/2 − ω`, followed by a global rotation `R = exp(-i Φ Σ σˣ)` with
//! `Φ = (1 − ε) π/2`. Alongside the state the engine propagates its exact
//! derivative with respect to ω using the product rule
//!
//! ```text
//! ψ'  = R D ψ
//! ∂ψ' = R D ∂ψ + R (i E ⊙ D ψ)
//! ```
//!
//! Bit `j − 1` of a basis index encodes site `j`; bit value 0 is spin up.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::active as k;

pub const MIN_SITES: usize = 2;
pub const MAX_SITES: usize = 24;

/// Renormalize ψ once its squared norm drifts further than this from one.
const NORM_DRIFT: f64 = 1e-12;

/// Physical configuration of one probe.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSpec {
    sites: usize,
    gamma: u32,
    epsilon: f64,
    omega: f64,
    init_state: u64,
}

impl ProbeSpec {
    pub fn new(sites: usize, gamma: u32, epsilon: f64, omega: f64, init_state: u64) -> Result<Self> {
        let spec = ProbeSpec {
            sites,
            gamma,
            epsilon,
            omega,
            init_state,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Ferromagnetic all-up initial state `|0…0⟩`.
    pub fn ferromagnetic(sites: usize, gamma: u32, epsilon: f64, omega: f64) -> Result<Self> {
        Self::new(sites, gamma, epsilon, omega, 0)
    }

    fn validate(&self) -> Result<()> {
        if !(MIN_SITES..=MAX_SITES).contains(&self.sites) {
            return Err(Error::config(
                "sites",
                format!("{} not in [{MIN_SITES}, {MAX_SITES}]", self.sites),
            ));
        }
        if self.gamma < 1 {
            return Err(Error::config("gamma", "must be a positive integer"));
        }
        if !self.epsilon.is_finite() || !(0.0..1.0).contains(&self.epsilon) {
            return Err(Error::config(
                "epsilon",
                format!("{} not in [0, 1)", self.epsilon),
            ));
        }
        if !self.omega.is_finite() {
            return Err(Error::config("omega", "must be finite"));
        }
        if self.init_state >= 1u64 << self.sites {
            return Err(Error::config(
                "init_state",
                format!("{} not below 2^{}", self.init_state, self.sites),
            ));
        }
        Ok(())
    }

    pub fn with_omega(&self, omega: f64) -> Result<Self> {
        Self::new(self.sites, self.gamma, self.epsilon, omega, self.init_state)
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        Self::new(self.sites, self.gamma, epsilon, self.omega, self.init_state)
    }

    /// Changes the chain length. The initial state is kept if it still fits,
    /// otherwise this fails.
    pub fn with_sites(&self, sites: usize) -> Result<Self> {
        Self::new(sites, self.gamma, self.epsilon, self.omega, self.init_state)
    }

    pub fn with_gamma(&self, gamma: u32) -> Result<Self> {
        Self::new(self.sites, gamma, self.epsilon, self.omega, self.init_state)
    }

    pub fn with_init_state(&self, init_state: u64) -> Result<Self> {
        Self::new(self.sites, self.gamma, self.epsilon, self.omega, init_state)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn init_state(&self) -> u64 {
        self.init_state
    }

    pub fn dimension(&self) -> usize {
        1 << self.sites
    }

    /// Φ = (1 − ε) π/2.
    pub fn pulse_angle(&self) -> f64 {
        (1.0 - self.epsilon) * FRAC_PI_2
    }

    /// θ = π/2 − ω, the per-cycle interaction phase JT.
    pub fn phase_angle(&self) -> f64 {
        FRAC_PI_2 - self.omega
    }
}

/// Dense vector of `2^L` complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    sites: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn zeros(sites: usize) -> Self {
        StateVector {
            sites,
            amps: vec![Complex64::new(0.0, 0.0); 1 << sites],
        }
    }

    pub fn basis(sites: usize, index: u64) -> Result<Self> {
        if index >= 1u64 << sites {
            return Err(Error::config(
                "init_state",
                format!("{index} not below 2^{sites}"),
            ));
        }
        let mut state = Self::zeros(sites);
        state.amps[index as usize] = Complex64::new(1.0, 0.0);
        Ok(state)
    }

    pub fn from_amplitudes(sites: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << sites {
            return Err(Error::DimensionMismatch {
                expected: 1 << sites,
                found: amps.len(),
            });
        }
        Ok(StateVector { sites, amps })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        k::norm_sqr(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.check_len(other.len())?;
        Ok(k::inner(&self.amps, &other.amps))
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amps[index].norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalize(&mut self) -> Result<()> {
        let norm = self.norm_sqr().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::NumericalIntegrity(format!(
                "cannot normalize state with norm {norm}"
            )));
        }
        k::scale(&mut self.amps, 1.0 / norm);
        Ok(())
    }

    fn check_len(&self, expected: usize) -> Result<()> {
        if self.amps.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: self.amps.len(),
            });
        }
        Ok(())
    }
}

/// Bond weights `j^γ` for `j = 1 … L−1`, rejecting overflow.
pub fn bond_weights(sites: usize, gamma: u32) -> Result<Vec<i64>> {
    (1..sites as i64)
        .map(|j| {
            j.checked_pow(gamma)
                .ok_or_else(|| Error::config("gamma", format!("{j}^{gamma} overflows i64")))
        })
        .collect()
}

/// λ_max = Σ_{j=1}^{L−1} j^γ, the largest eigenvalue of the interaction.
pub fn coupling_sum(sites: usize, gamma: u32) -> Result<i64> {
    bond_weights(sites, gamma)?
        .into_iter()
        .try_fold(0i64, |acc, w| acc.checked_add(w))
        .ok_or_else(|| Error::config("gamma", "coupling sum overflows i64"))
}

/// Integer interaction energies `E(z) = Σ j^γ s_j(z) s_{j+1}(z)` for every
/// basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionTable {
    sites: usize,
    gamma: u32,
    max_energy: i64,
    energies: Vec<i64>,
}

impl InteractionTable {
    pub fn build(sites: usize, gamma: u32) -> Result<Self> {
        if !(MIN_SITES..=MAX_SITES).contains(&sites) {
            return Err(Error::config(
                "sites",
                format!("{sites} not in [{MIN_SITES}, {MAX_SITES}]"),
            ));
        }
        if gamma < 1 {
            return Err(Error::config("gamma", "must be a positive integer"));
        }
        let weights = bond_weights(sites, gamma)?;
        let max_energy = coupling_sum(sites, gamma)?;
        let mut energies = vec![0i64; 1 << sites];
        k::fill_energies(&mut energies, &weights);
        Ok(InteractionTable {
            sites,
            gamma,
            max_energy,
            energies,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn gamma(&self) -> u32 {
        self.gamma
    }

    pub fn energies(&self) -> &[i64] {
        &self.energies
    }

    pub fn energy(&self, index: usize) -> i64 {
        self.energies[index]
    }

    /// Σ j^γ; attained by both ferromagnetic states.
    pub fn max_energy(&self) -> i64 {
        self.max_energy
    }

    /// Minimum over all basis states (the Néel configurations).
    pub fn min_energy(&self) -> i64 {
        -self.max_energy
    }
}

/// `amp_z ← exp(−i θ E(z)) amp_z`.
pub fn apply_diagonal(state: &mut StateVector, table: &InteractionTable, theta: f64) -> Result<()> {
    if state.sites != table.sites {
        return Err(Error::DimensionMismatch {
            expected: table.energies.len(),
            found: state.len(),
        });
    }
    k::apply_energy_phases(&mut state.amps, &table.energies, theta);
    Ok(())
}

/// Applies `[[cos Φ, −i sin Φ], [−i sin Φ, cos Φ]]` to every site.
pub fn apply_global_x(state: &mut StateVector, phi: f64) {
    let (s, c) = phi.sin_cos();
    k::rotate_all_x(&mut state.amps, state.sites, c, s);
}

/// A state after `cycle` Floquet periods together with its ω-derivative.
#[derive(Debug, Clone)]
pub struct SensingState {
    psi: StateVector,
    dpsi: StateVector,
    cycle: usize,
    spec: ProbeSpec,
}

impl SensingState {
    /// Assembles a state from explicit parts, e.g. for an oracle that
    /// computes ψ and ∂ψ by other means.
    pub fn from_parts(spec: ProbeSpec, psi: StateVector, dpsi: StateVector, cycle: usize) -> Result<Self> {
        for v in [&psi, &dpsi] {
            if v.sites != spec.sites || v.len() != spec.dimension() {
                return Err(Error::DimensionMismatch {
                    expected: spec.dimension(),
                    found: v.len(),
                });
            }
        }
        Ok(SensingState {
            psi,
            dpsi,
            cycle,
            spec,
        })
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    /// ∂_ω|ψ_n⟩. Not normalized.
    pub fn dpsi(&self) -> &StateVector {
        &self.dpsi
    }

    pub fn cycle(&self) -> usize {
        self.cycle
    }

    pub fn spec(&self) -> &ProbeSpec {
        &self.spec
    }

    /// `|⟨z₀|ψ_n⟩|²` for the recorded initial basis index.
    pub fn revival_fidelity(&self) -> f64 {
        self.psi.probability(self.spec.init_state as usize)
    }

    pub fn into_parts(self) -> (StateVector, StateVector) {
        (self.psi, self.dpsi)
    }
}

/// One Floquet period `U_ω = R D` bound to a spec and a shared energy table.
#[derive(Debug)]
pub struct FloquetOperator<'t> {
    spec: ProbeSpec,
    table: &'t InteractionTable,
    phases: Vec<Complex64>,
    cos_phi: f64,
    sin_phi: f64,
}

impl<'t> FloquetOperator<'t> {
    pub fn new(spec: ProbeSpec, table: &'t InteractionTable) -> Result<Self> {
        if table.sites != spec.sites || table.gamma != spec.gamma {
            return Err(Error::config(
                "table",
                format!(
                    "table built for (L={}, γ={}) but spec has (L={}, γ={})",
                    table.sites, table.gamma, spec.sites, spec.gamma
                ),
            ));
        }
        let phases = k::phase_table(&table.energies, spec.phase_angle());
        let (sin_phi, cos_phi) = spec.pulse_angle().sin_cos();
        Ok(FloquetOperator {
            spec,
            table,
            phases,
            cos_phi,
            sin_phi,
        })
    }

    pub fn spec(&self) -> &ProbeSpec {
        &self.spec
    }

    pub fn table(&self) -> &InteractionTable {
        self.table
    }

    /// Cycle-0 state: the configured basis state with zero derivative.
    pub fn prepare(&self) -> SensingState {
        let mut psi = StateVector::zeros(self.spec.sites);
        psi.amps[self.spec.init_state as usize] = Complex64::new(1.0, 0.0);
        SensingState {
            dpsi: StateVector::zeros(self.spec.sites),
            psi,
            cycle: 0,
            spec: self.spec,
        }
    }

    /// Cycle-0 state from an arbitrary normalized initial vector.
    pub fn prepare_from(&self, psi: StateVector) -> Result<SensingState> {
        if psi.sites != self.spec.sites {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dimension(),
                found: psi.len(),
            });
        }
        let norm = psi.norm_sqr();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::config(
                "initial_state",
                format!("squared norm {norm} is not 1"),
            ));
        }
        Ok(SensingState {
            dpsi: StateVector::zeros(self.spec.sites),
            psi,
            cycle: 0,
            spec: self.spec,
        })
    }

    /// Advances ψ and ∂ψ by one period.
    pub fn step(&self, state: &mut SensingState) -> Result<()> {
        if state.psi.sites != self.spec.sites {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dimension(),
                found: state.psi.len(),
            });
        }
        let sites = self.spec.sites;
        k::phase_with_derivative(
            &mut state.psi.amps,
            &mut state.dpsi.amps,
            &self.phases,
            &self.table.energies,
        );
        k::rotate_all_x(&mut state.psi.amps, sites, self.cos_phi, self.sin_phi);
        k::rotate_all_x(&mut state.dpsi.amps, sites, self.cos_phi, self.sin_phi);
        state.cycle += 1;
        renormalize_if_drifted(&mut state.psi)
    }

    /// ψ only, no derivative.
    pub fn step_state(&self, psi: &mut StateVector) -> Result<()> {
        if psi.sites != self.spec.sites {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dimension(),
                found: psi.len(),
            });
        }
        k::apply_phases(&mut psi.amps, &self.phases);
        k::rotate_all_x(&mut psi.amps, self.spec.sites, self.cos_phi, self.sin_phi);
        renormalize_if_drifted(psi)
    }

    pub fn evolve(&self, cycles: usize) -> Result<SensingState> {
        let mut state = self.prepare();
        for _ in 0..cycles {
            self.step(&mut state)?;
        }
        Ok(state)
    }

    /// `U_ω^n |z₀⟩` without the derivative; half the work of [`evolve`](Self::evolve).
    pub fn evolve_state(&self, cycles: usize) -> Result<StateVector> {
        let mut psi = StateVector::basis(self.spec.sites, self.spec.init_state)?;
        for _ in 0..cycles {
            self.step_state(&mut psi)?;
        }
        Ok(psi)
    }

    /// Evolves `cycles` periods, handing every intermediate state (cycle 0
    /// included) to `observe`.
    pub fn run<F>(&self, initial: SensingState, cycles: usize, mut observe: F) -> Result<SensingState>
    where
        F: FnMut(&SensingState) -> Result<()>,
    {
        let mut state = initial;
        observe(&state)?;
        for _ in 0..cycles {
            self.step(&mut state)?;
            observe(&state)?;
        }
        Ok(state)
    }
}

fn renormalize_if_drifted(psi: &mut StateVector) -> Result<()> {
    let norm = psi.norm_sqr();
    if !norm.is_finite() {
        return Err(Error::NumericalIntegrity("non-finite state norm".into()));
    }
    if (norm - 1.0).abs() > NORM_DRIFT {
        k::scale(&mut psi.amps, 1.0 / norm.sqrt());
    }
    Ok(())
}

/// Evolves `spec.init_state` through `cycles` Floquet periods.
pub fn evolve(spec: &ProbeSpec, cycles: usize) -> Result<SensingState> {
    let table = InteractionTable::build(spec.sites, spec.gamma)?;
    FloquetOperator::new(*spec, &table)?.evolve(cycles)
}
