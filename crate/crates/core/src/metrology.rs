//! Fisher information of evolved probe states.

use num_complex::Complex64;
use serde::Serialize;

use crate::engine::{coupling_sum, FloquetOperator, InteractionTable, ProbeSpec, SensingState, StateVector};
use crate::error::{Error, Result};
use crate::kernels::active as k;

/// Round-off below this magnitude is clamped to zero; anything more negative
/// is reported as an integrity violation.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;

/// Relative slack allowed above the seminorm ceiling.
pub const BOUND_SLACK: f64 = 1e-9;

pub const DEFAULT_FD_STEP: f64 = 1e-6;
pub const DEFAULT_PROBABILITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QfiRecord {
    pub sites: usize,
    pub gamma: u32,
    pub epsilon: f64,
    pub omega: f64,
    pub cycle: usize,
    pub qfi: f64,
}

impl QfiRecord {
    pub fn from_state(state: &SensingState) -> Result<Self> {
        let spec = state.spec();
        Ok(QfiRecord {
            sites: spec.sites(),
            gamma: spec.gamma(),
            epsilon: spec.epsilon(),
            omega: spec.omega(),
            cycle: state.cycle(),
            qfi: qfi(state)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CfiRecord {
    pub omega: f64,
    pub cycle: usize,
    pub cfi: f64,
    pub probability_floor: f64,
}

/// Pure-state QFI `4(⟨∂ψ|∂ψ⟩ − |⟨∂ψ|ψ⟩|²)`.
///
/// Evaluated as `4‖∂ψ − ⟨ψ|∂ψ⟩ψ‖²`, which equals the expression above for
/// normalized ψ but does not cancel catastrophically when ∂ψ is nearly
/// parallel to ψ. Every value is checked against zero and against the
/// seminorm ceiling `4n²(Σ j^γ)²`.
pub fn qfi(state: &SensingState) -> Result<f64> {
    let psi = state.psi();
    let dpsi = state.dpsi();
    if psi.len() != dpsi.len() {
        return Err(Error::DimensionMismatch {
            expected: psi.len(),
            found: dpsi.len(),
        });
    }
    let norm = psi.norm_sqr();
    if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
        return Err(Error::NumericalIntegrity(format!(
            "state norm² {norm} is not 1"
        )));
    }
    let overlap = k::inner(psi.amplitudes(), dpsi.amplitudes());
    let raw = 4.0 * k::residual_sqr(dpsi.amplitudes(), psi.amplitudes(), overlap);
    let resolution = 4.0 * dpsi.norm_sqr() * RESIDUAL_RESOLUTION * RESIDUAL_RESOLUTION;
    let value = clamp_round_off(raw)?;
    let value = if value <= resolution { 0.0 } else { value };

    let spec = state.spec();
    let bound = seminorm_bound(spec.sites(), spec.gamma(), state.cycle())?;
    if value > bound * (1.0 + BOUND_SLACK) + NEGATIVE_TOLERANCE {
        return Err(Error::NumericalIntegrity(format!(
            "qfi {value} exceeds seminorm bound {bound} at n = {}",
            state.cycle()
        )));
    }
    Ok(value)
}

/// Relative size of the smallest residual component distinguishable from
/// cancellation noise in `dψ − ⟨ψ|dψ⟩ψ`.
const RESIDUAL_RESOLUTION: f64 = 64.0 * f64::EPSILON;

fn clamp_round_off(raw: f64) -> Result<f64> {
    if !raw.is_finite() {
        return Err(Error::NumericalIntegrity(format!("non-finite qfi {raw}")));
    }
    if raw < -NEGATIVE_TOLERANCE {
        return Err(Error::NumericalIntegrity(format!("negative qfi {raw}")));
    }
    Ok(raw.max(0.0))
}

fn check_step(delta: f64) -> Result<()> {
    if !(1e-8..=1e-4).contains(&delta) {
        return Err(Error::config("delta", format!("{delta} not in [1e-8, 1e-4]")));
    }
    Ok(())
}

/// Fidelity-curvature estimate `8(1 − |⟨ψ(ω−δ/2)|ψ(ω+δ/2)⟩|)/δ²`.
///
/// Independent of the derivative recursion; used to validate [`qfi`].
pub fn qfi_finite_difference(spec: &ProbeSpec, cycles: usize, delta: f64) -> Result<f64> {
    check_step(delta)?;
    let table = InteractionTable::build(spec.sites(), spec.gamma())?;
    let minus = shifted_state(spec, &table, cycles, -0.5 * delta)?;
    let plus = shifted_state(spec, &table, cycles, 0.5 * delta)?;
    // 1 − |⟨a|b⟩| = ‖a − u b‖²/2 with u the phase of ⟨b|a⟩
    let overlap = plus.inner(&minus)?;
    let u = if overlap.norm() > 0.0 {
        overlap / overlap.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    let dist = k::aligned_distance_sqr(minus.amplitudes(), plus.amplitudes(), u);
    clamp_round_off(4.0 * dist / (delta * delta))
}

fn shifted_state(spec: &ProbeSpec, table: &InteractionTable, cycles: usize, shift: f64) -> Result<StateVector> {
    let shifted = spec.with_omega(spec.omega() + shift)?;
    FloquetOperator::new(shifted, table)?.evolve_state(cycles)
}

/// Classical Fisher information of a computational-basis measurement.
///
/// `Σ_{z : p_z(ω) > floor} (Δp_z/δ)² / p_z(ω)`, with Δp_z the central
/// difference between ω ± δ/2.
pub fn cfi_computational(spec: &ProbeSpec, cycles: usize, delta: f64, floor: f64) -> Result<CfiRecord> {
    check_step(delta)?;
    if !(floor > 0.0) {
        return Err(Error::config("probability_floor", "must be positive"));
    }
    let table = InteractionTable::build(spec.sites(), spec.gamma())?;
    let centre = FloquetOperator::new(*spec, &table)?.evolve_state(cycles)?;
    let minus = shifted_state(spec, &table, cycles, -0.5 * delta)?;
    let plus = shifted_state(spec, &table, cycles, 0.5 * delta)?;
    let cfi = centre
        .amplitudes()
        .iter()
        .zip(minus.amplitudes().iter().zip(plus.amplitudes()))
        .filter_map(|(c, (m, p))| {
            let p0 = c.norm_sqr();
            (p0 > floor).then(|| {
                let slope = (p.norm_sqr() - m.norm_sqr()) / delta;
                slope * slope / p0
            })
        })
        .sum();
    Ok(CfiRecord {
        omega: spec.omega(),
        cycle: cycles,
        cfi,
        probability_floor: floor,
    })
}

/// `4 n² (Σ_{j=1}^{L−1} j^γ)²`, computed in exact integer arithmetic.
pub fn seminorm_bound(sites: usize, gamma: u32, cycles: usize) -> Result<f64> {
    let lambda = coupling_sum(sites, gamma)? as u128;
    let n = cycles as u128;
    4u128
        .checked_mul(n * n)
        .and_then(|v| v.checked_mul(lambda * lambda))
        .map(|v| v as f64)
        .ok_or_else(|| Error::config("cycles", "seminorm bound overflows"))
}

/// Converts QFI about the detuning ω into QFI about the drive frequency at
/// resonance: `F(ω_d) = F(ω) (π / 8J)²`.
pub fn qfi_frequency(qfi_omega: f64, coupling: f64) -> Result<f64> {
    if !(coupling > 0.0) || !coupling.is_finite() {
        return Err(Error::config("coupling", format!("{coupling} must be positive")));
    }
    let factor = std::f64::consts::PI / (8.0 * coupling);
    Ok(qfi_omega * factor * factor)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::evolve;

    fn raw_state(sites: usize, psi: Vec<Complex64>, dpsi: Vec<Complex64>, cycle: usize) -> SensingState {
        let spec = ProbeSpec::new(sites, 1, 0.1, 0.0, 0).unwrap();
        SensingState::from_parts(
            spec,
            StateVector::from_amplitudes(sites, psi).unwrap(),
            StateVector::from_amplitudes(sites, dpsi).unwrap(),
            cycle,
        )
        .unwrap()
    }

    #[test]
    fn phase_only_derivative_has_zero_qfi() {
        let a = Complex64::new(0.6, 0.0);
        let b = Complex64::new(0.0, 0.8);
        let psi = vec![a, b, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)];
        let dpsi: Vec<_> = psi.iter().map(|x| Complex64::new(0.0, 2.5) * x).collect();
        let s = raw_state(2, psi, dpsi, 1);
        assert!(qfi(&s).unwrap().abs() < 1e-15);
    }

    #[test]
    fn orthogonal_derivative_gives_four_v() {
        let psi = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let dpsi = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.3, 0.0),
            Complex64::new(0.0, -0.4),
            Complex64::new(0.0, 0.0),
        ];
        let s = raw_state(2, psi, dpsi, 1);
        assert!((qfi(&s).unwrap() - 4.0 * 0.25).abs() < 1e-15);
    }

    #[test]
    fn qfi_matches_direct_formula() {
        let spec = ProbeSpec::new(8, 2, 0.05, 3e-3, 0).unwrap();
        let s = evolve(&spec, 6).unwrap();
        let dd = s.dpsi().norm_sqr();
        let ov = s.dpsi().inner(s.psi()).unwrap().norm_sqr();
        let direct = 4.0 * (dd - ov);
        let q = qfi(&s).unwrap();
        assert!((q - direct).abs() <= 1e-9 * direct, "{q} vs {direct}");
    }

    #[test]
    fn qfi_rejects_bound_violation_and_bad_norm() {
        // L=2, γ=1, n=1: bound 4; an orthogonal derivative of norm² 4 gives qfi 16
        let psi = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let dpsi = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(2.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let s = raw_state(2, psi.clone(), dpsi.clone(), 1);
        assert!(matches!(qfi(&s), Err(Error::NumericalIntegrity(_))));

        let doubled: Vec<_> = psi.iter().map(|x| x * 2.0).collect();
        let s = raw_state(2, doubled, dpsi, 1);
        assert!(matches!(qfi(&s), Err(Error::NumericalIntegrity(_))));

        assert!(clamp_round_off(-1e-10).unwrap() == 0.0);
        assert!(matches!(clamp_round_off(-1e-6), Err(Error::NumericalIntegrity(_))));
        assert!(matches!(clamp_round_off(f64::NAN), Err(Error::NumericalIntegrity(_))));
    }

    #[test]
    fn finite_difference_zero_for_perfect_pulse() {
        let spec = ProbeSpec::new(8, 2, 0.0, 1e-3, 0).unwrap();
        assert!(qfi_finite_difference(&spec, 10, 1e-5).unwrap() < 1e-6);
    }

    #[test]
    fn finite_difference_agrees_with_exact_derivative() {
        let spec = ProbeSpec::new(8, 2, 0.01, 1e-3, 0).unwrap();
        let exact = qfi(&evolve(&spec, 10).unwrap()).unwrap();
        let fd = qfi_finite_difference(&spec, 10, 1e-5).unwrap();
        assert!(((fd - exact) / exact).abs() < 1e-3, "{fd} vs {exact}");
    }

    #[test]
    fn finite_difference_converges_at_second_order() {
        // L=6 with a strongly ω-dependent point: the O(δ²) term dominates
        // round-off for δ in [1e-3 .. 1e-4] scaled steps
        let spec = ProbeSpec::new(6, 2, 0.2, 0.3, 0).unwrap();
        let exact = qfi(&evolve(&spec, 8).unwrap()).unwrap();
        let e1 = (qfi_finite_difference(&spec, 8, 1e-4).unwrap() - exact).abs();
        let e2 = (qfi_finite_difference(&spec, 8, 5e-5).unwrap() - exact).abs();
        let ratio = e1 / e2;
        assert!((3.0..5.0).contains(&ratio), "error ratio {ratio}");
    }

    #[test]
    fn finite_difference_step_range() {
        let spec = ProbeSpec::new(4, 1, 0.1, 0.0, 0).unwrap();
        assert!(qfi_finite_difference(&spec, 2, 1e-3).is_err());
        assert!(qfi_finite_difference(&spec, 2, 1e-9).is_err());
    }

    #[test]
    fn cfi_is_zero_for_perfect_pulse_and_below_qfi() {
        let spec = ProbeSpec::new(8, 2, 0.0, 2e-3, 5).unwrap();
        let r = cfi_computational(&spec, 7, DEFAULT_FD_STEP, DEFAULT_PROBABILITY_FLOOR).unwrap();
        assert!(r.cfi < 1e-9);

        let spec = ProbeSpec::new(8, 2, 0.05, 2e-3, 0).unwrap();
        let r = cfi_computational(&spec, 7, DEFAULT_FD_STEP, DEFAULT_PROBABILITY_FLOOR).unwrap();
        let q = qfi(&evolve(&spec, 7).unwrap()).unwrap();
        assert!(r.cfi >= 0.0 && r.cfi <= q * (1.0 + 1e-6), "{} vs {q}", r.cfi);
        assert!(cfi_computational(&spec, 7, DEFAULT_FD_STEP, 0.0).is_err());
    }

    #[test]
    fn seminorm_bound_examples() {
        assert_eq!(seminorm_bound(4, 1, 1).unwrap(), 144.0);
        assert_eq!(seminorm_bound(4, 2, 2).unwrap(), 3136.0);
        assert_eq!(seminorm_bound(10, 3, 0).unwrap(), 0.0);
    }

    #[test]
    fn frequency_conversion() {
        let v = qfi_frequency(100.0, 1.0).unwrap();
        assert!((v - 100.0 * (std::f64::consts::PI / 8.0).powi(2)).abs() < 1e-12);
        assert!((v - 15.421).abs() < 1e-3);
        assert_eq!(qfi_frequency(0.0, 3.0).unwrap(), 0.0);
        assert!((qfi_frequency(7.5, std::f64::consts::PI / 8.0).unwrap() - 7.5).abs() < 1e-12);
        assert!(qfi_frequency(1.0, 0.0).is_err());
        assert!(qfi_frequency(1.0, -2.0).is_err());
    }
}
