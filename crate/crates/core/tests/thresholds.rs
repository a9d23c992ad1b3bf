use std::f64::consts::FRAC_PI_2;

use dtc_probe::analysis::{default_omega_grid, scan_threshold, sweep_qfi_epsilon, threshold_scan, DETECT_CYCLES};
use dtc_probe::metrology::{cfi_computational, DEFAULT_FD_STEP, DEFAULT_PROBABILITY_FLOOR};
use dtc_probe::{evolve, qfi, PeakRule, ProbeSpec};

fn l12() -> ProbeSpec {
    ProbeSpec::ferromagnetic(12, 2, 0.01, 1e-3).unwrap()
}

#[test]
fn threshold_at_twelve_sites_follows_size_law() {
    let t = scan_threshold(&l12(), &default_omega_grid(), DETECT_CYCLES, PeakRule::default()).unwrap();
    let law = 1.47 * 12f64.powf(-2.255);
    assert!(t.omega_max > law / 1.5 && t.omega_max < law * 1.5, "{t:?} vs {law}");
    assert!(t.grid_resolution > 1.0 && t.grid_resolution < 1.07);
}

#[test]
fn threshold_position_is_stable_between_ten_and_twenty_cycles() {
    let grid = default_omega_grid();
    for (l, gamma) in [(8, 2), (12, 2), (8, 3), (12, 3)] {
        let t = ProbeSpec::ferromagnetic(l, gamma, 0.01, 1e-3).unwrap();
        let a = scan_threshold(&t, &grid, 10, PeakRule::default()).unwrap();
        let b = scan_threshold(&t, &grid, 20, PeakRule::default()).unwrap();
        let cells = (a.omega_max / b.omega_max).ln().abs() / a.grid_resolution.ln();
        assert!(cells <= 1.0, "L={l} γ={gamma}: {a:?} {b:?} differ by {cells} cells");
    }
}

#[test]
fn two_cycle_curve_has_no_prominent_peak() {
    let err = scan_threshold(&l12(), &default_omega_grid(), 2, PeakRule::default()).unwrap_err();
    assert!(matches!(err, dtc_probe::Error::ThresholdNotBracketed(_)), "{err}");
}

#[test]
fn threshold_shrinks_with_chain_length() {
    let t = ProbeSpec::ferromagnetic(8, 2, 0.01, 1e-3).unwrap();
    let res = threshold_scan(&t, &[8, 10, 12, 14], &default_omega_grid(), DETECT_CYCLES, PeakRule::default()).unwrap();
    assert!(res.windows(2).all(|w| w[1].omega_max < w[0].omega_max), "{res:?}");
}

#[test]
fn computational_basis_cfi_is_informative_at_threshold() {
    let base = ProbeSpec::ferromagnetic(10, 2, 0.01, 1e-3).unwrap();
    let t = scan_threshold(&base, &default_omega_grid(), DETECT_CYCLES, PeakRule::default()).unwrap();
    let spec = base.with_omega(t.omega_max).unwrap();
    let c = cfi_computational(&spec, DETECT_CYCLES, DEFAULT_FD_STEP, DEFAULT_PROBABILITY_FLOOR).unwrap();
    let q = qfi(&evolve(&spec, DETECT_CYCLES).unwrap()).unwrap();
    assert!(c.cfi > 1e-3 * q, "cfi {} qfi {q}", c.cfi);
    assert!(c.cfi <= q * (1.0 + 1e-6));
}

#[test]
fn epsilon_sweep_matches_independent_baseline() {
    // reference values from an independent dense NumPy evolution
    let spec = ProbeSpec::ferromagnetic(12, 2, 0.0, 1e-4 * FRAC_PI_2).unwrap();
    let recs = sweep_qfi_epsilon(&spec, &[0.0, 0.01, 0.05], 10).unwrap();
    assert_eq!(recs[0].qfi, 0.0);
    for (r, want) in recs[1..].iter().zip([13982.0, 340993.0]) {
        assert!((r.qfi - want).abs() < 1e-3 * want, "{r:?} vs {want}");
    }
}
