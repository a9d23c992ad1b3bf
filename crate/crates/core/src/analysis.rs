//! Parameter sweeps, finite-size thresholds and power-law exponents.
//!
//! Sweep points are independent evolutions and are evaluated concurrently
//! when the `parallel` feature is on; results always follow input order.

use std::f64::consts::FRAC_PI_2;

use serde::Serialize;

use crate::engine::{FloquetOperator, InteractionTable, ProbeSpec};
use crate::error::{Error, Result};
use crate::kernels::map_points;
use crate::metrology::QfiRecord;

pub const DEFAULT_GRID_POINTS: usize = 200;
pub const DEFAULT_OMEGA_MIN: f64 = 1e-6 * FRAC_PI_2;
pub const DEFAULT_OMEGA_MAX: f64 = 0.3 * FRAC_PI_2;

/// Detuning used for DTC-phase size scaling.
pub const DTC_OMEGA: f64 = 1e-6 * FRAC_PI_2;
/// Cycle count at which size exponents are extracted.
pub const SCALING_CYCLES: usize = 2;
/// Cycle count at which the threshold peak is located. The QFI of a
/// basis-state probe after two cycles does not depend on ω, so the peak
/// only exists from the third cycle on.
pub const DETECT_CYCLES: usize = 10;
pub const DEFAULT_EPSILON: f64 = 0.01;

/// Minimum number of points accepted by the regressions.
pub const MIN_FIT_POINTS: usize = 3;
/// Minimum sweep length for threshold detection.
pub const MIN_THRESHOLD_POINTS: usize = 20;

/// `count` logarithmically spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::config("grid", format!("need 0 < lo < hi, got [{lo}, {hi}]")));
    }
    if count < 2 {
        return Err(Error::config("grid.points", "need at least two points"));
    }
    let (a, b) = (lo.ln(), hi.ln());
    let step = (b - a) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| match i {
            0 => lo,
            i if i == count - 1 => hi,
            i => (a + step * i as f64).exp(),
        })
        .collect())
}

/// 200 log-spaced detunings in `[1e-6·π/2, 0.3·π/2]`.
pub fn default_omega_grid() -> Vec<f64> {
    log_grid(DEFAULT_OMEGA_MIN, DEFAULT_OMEGA_MAX, DEFAULT_GRID_POINTS).expect("static grid is valid")
}

fn check_grid(field: &str, grid: &[f64], lo: f64, hi: f64, open: bool) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config(field, "grid is empty"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::config(field, "grid must be strictly increasing"));
    }
    let inside = |v: f64| if open { v > lo && v < hi } else { v >= lo && v <= hi };
    if let Some(v) = grid.iter().find(|v| !inside(**v)) {
        let (l, r) = if open { ('(', ')') } else { ('[', ']') };
        return Err(Error::config(field, format!("{v} outside {l}{lo}, {hi}{r}")));
    }
    Ok(())
}

fn qfi_at(spec: ProbeSpec, table: &InteractionTable, cycles: usize) -> Result<QfiRecord> {
    let state = FloquetOperator::new(spec, table)?.evolve(cycles)?;
    QfiRecord::from_state(&state)
}

/// QFI after `cycles` periods at every detuning in `grid` (each in (0, π/2)).
pub fn sweep_qfi_omega(template: &ProbeSpec, grid: &[f64], cycles: usize) -> Result<Vec<QfiRecord>> {
    check_grid("omega_grid", grid, 0.0, FRAC_PI_2, true)?;
    let table = InteractionTable::build(template.sites(), template.gamma())?;
    let specs = grid
        .iter()
        .map(|&w| template.with_omega(w))
        .collect::<Result<Vec<_>>>()?;
    map_points(&specs, |s| qfi_at(*s, &table, cycles))
        .into_iter()
        .collect()
}

/// QFI after `cycles` periods at every pulse error in `grid` (each in [0, 0.5]).
pub fn sweep_qfi_epsilon(template: &ProbeSpec, grid: &[f64], cycles: usize) -> Result<Vec<QfiRecord>> {
    check_grid("epsilon_grid", grid, 0.0, 0.5, false)?;
    let table = InteractionTable::build(template.sites(), template.gamma())?;
    let specs = grid
        .iter()
        .map(|&e| template.with_epsilon(e))
        .collect::<Result<Vec<_>>>()?;
    map_points(&specs, |s| qfi_at(*s, &table, cycles))
        .into_iter()
        .collect()
}

/// QFI at every cycle `0..=max_cycle` of a single evolution.
pub fn qfi_series(spec: &ProbeSpec, max_cycle: usize) -> Result<Vec<QfiRecord>> {
    let table = InteractionTable::build(spec.sites(), spec.gamma())?;
    let op = FloquetOperator::new(*spec, &table)?;
    let mut out = Vec::with_capacity(max_cycle + 1);
    op.run(op.prepare(), max_cycle, |s| {
        out.push(QfiRecord::from_state(s)?);
        Ok(())
    })?;
    Ok(out)
}

/// Swept parameter of a [`SweepSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Omega,
    Epsilon,
    #[serde(rename = "L")]
    Sites,
    #[serde(rename = "n")]
    Cycles,
    Gamma,
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" => Ok(SweepAxis::Omega),
            "epsilon" => Ok(SweepAxis::Epsilon),
            "L" | "sites" => Ok(SweepAxis::Sites),
            "n" | "cycles" => Ok(SweepAxis::Cycles),
            "gamma" => Ok(SweepAxis::Gamma),
            other => Err(Error::config("axis", format!("unknown sweep axis `{other}`"))),
        }
    }
}

/// One-dimensional sweep around a fixed template.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub grid: Vec<f64>,
    pub template: ProbeSpec,
    /// Cycle count for every axis except [`SweepAxis::Cycles`].
    pub cycles: usize,
}

fn integer_grid(field: &str, grid: &[f64]) -> Result<Vec<u64>> {
    check_grid(field, grid, 0.0, f64::MAX, false)?;
    grid.iter()
        .map(|&v| {
            if v.fract() == 0.0 && v <= u32::MAX as f64 {
                Ok(v as u64)
            } else {
                Err(Error::config(field, format!("{v} is not a nonnegative integer")))
            }
        })
        .collect()
}

/// Runs any [`SweepSpec`], one record per grid value in grid order.
pub fn run_sweep(sweep: &SweepSpec) -> Result<Vec<QfiRecord>> {
    let t = &sweep.template;
    match sweep.axis {
        SweepAxis::Omega => sweep_qfi_omega(t, &sweep.grid, sweep.cycles),
        SweepAxis::Epsilon => sweep_qfi_epsilon(t, &sweep.grid, sweep.cycles),
        SweepAxis::Cycles => {
            let ns = integer_grid("grid", &sweep.grid)?;
            let max = *ns.last().expect("grid checked nonempty") as usize;
            let series = qfi_series(t, max)?;
            Ok(ns.iter().map(|&n| series[n as usize]).collect())
        }
        SweepAxis::Sites => {
            let specs = integer_grid("grid", &sweep.grid)?
                .into_iter()
                .map(|l| t.with_sites(l as usize))
                .collect::<Result<Vec<_>>>()?;
            specs
                .iter()
                .map(|s| {
                    let table = InteractionTable::build(s.sites(), s.gamma())?;
                    qfi_at(*s, &table, sweep.cycles)
                })
                .collect()
        }
        SweepAxis::Gamma => {
            let specs = integer_grid("grid", &sweep.grid)?
                .into_iter()
                .map(|g| t.with_gamma(g as u32))
                .collect::<Result<Vec<_>>>()?;
            specs
                .iter()
                .map(|s| {
                    let table = InteractionTable::build(s.sites(), s.gamma())?;
                    qfi_at(*s, &table, sweep.cycles)
                })
                .collect()
        }
    }
}

/// How the threshold peak is picked out of a QFI-versus-ω curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum PeakRule {
    /// First local maximum after the curve first exceeds `factor` times its
    /// small-ω plateau (the value at the smallest grid point). Past the
    /// threshold the curve oscillates and may exceed the threshold peak, so
    /// the first rise is the one that marks the DTC boundary.
    FirstProminent { factor: f64 },
    /// Global maximum of the whole sweep.
    GlobalMax,
}

impl Default for PeakRule {
    fn default() -> Self {
        PeakRule::FirstProminent { factor: 4.0 }
    }
}

/// Peak location on a sampled curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub index: usize,
    /// Grid value at `index`.
    pub raw: f64,
    /// Vertex of the parabola through the three points around `index` in
    /// (ln x, ln y).
    pub refined: f64,
    pub value: f64,
}

enum Scan {
    Found(usize),
    /// The prefix ended before the peak was confirmed.
    Incomplete,
}

fn scan_first_prominent(values: &[f64], factor: f64) -> Scan {
    let Some(&plateau) = values.first() else {
        return Scan::Incomplete;
    };
    let Some(mut i) = values.iter().position(|&q| q > factor * plateau) else {
        return Scan::Incomplete;
    };
    // climb; ties stay at the smaller x
    while i + 1 < values.len() && values[i + 1] > values[i] {
        i += 1;
    }
    if i + 1 == values.len() {
        Scan::Incomplete
    } else {
        Scan::Found(i)
    }
}

fn refine(xs: &[f64], ys: &[f64], i: usize) -> f64 {
    let pts = [i - 1, i, i + 1];
    if pts.iter().any(|&j| !(xs[j] > 0.0 && ys[j] > 0.0)) {
        return xs[i];
    }
    let (x0, x1, x2) = (xs[i - 1].ln(), xs[i].ln(), xs[i + 1].ln());
    let (y0, y1, y2) = (ys[i - 1].ln(), ys[i].ln(), ys[i + 1].ln());
    let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
    let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    if den == 0.0 || !den.is_finite() {
        return xs[i];
    }
    let vertex = x1 - 0.5 * num / den;
    vertex.clamp(x0, x2).exp()
}

/// Locates the peak of `ys(xs)` under `rule`. `xs` must be increasing.
pub fn locate_peak(xs: &[f64], ys: &[f64], rule: PeakRule) -> Result<Peak> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    if xs.len() < 3 {
        return Err(Error::ThresholdNotBracketed(format!(
            "{} points cannot bracket a peak",
            xs.len()
        )));
    }
    let index = match rule {
        PeakRule::FirstProminent { factor } => match scan_first_prominent(ys, factor) {
            Scan::Found(i) => i,
            Scan::Incomplete => {
                return Err(Error::ThresholdNotBracketed(format!(
                    "no local maximum rising {factor}× above the plateau inside [{}, {}]",
                    xs[0],
                    xs[xs.len() - 1]
                )))
            }
        },
        PeakRule::GlobalMax => {
            let mut best = 0;
            for (i, &y) in ys.iter().enumerate() {
                if y > ys[best] {
                    best = i;
                }
            }
            if best == 0 || best == ys.len() - 1 {
                return Err(Error::ThresholdNotBracketed(format!(
                    "global maximum at grid boundary x = {}",
                    xs[best]
                )));
            }
            best
        }
    };
    Ok(Peak {
        index,
        raw: xs[index],
        refined: refine(xs, ys, index),
        value: ys[index],
    })
}

/// Finite-size threshold of one (L, γ) series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdResult {
    pub sites: usize,
    pub gamma: u32,
    pub epsilon: f64,
    pub cycle: usize,
    /// Refined peak position in radians.
    pub omega_max: f64,
    /// Grid point of the raw maximum.
    pub omega_raw: f64,
    pub qfi_peak: f64,
    /// Ratio between neighbouring grid points at the peak.
    pub grid_resolution: f64,
}

fn threshold_from(records: &[QfiRecord], peak: Peak) -> ThresholdResult {
    let r = records[peak.index];
    ThresholdResult {
        sites: r.sites,
        gamma: r.gamma,
        epsilon: r.epsilon,
        cycle: r.cycle,
        omega_max: peak.refined,
        omega_raw: peak.raw,
        qfi_peak: peak.value,
        grid_resolution: records[peak.index + 1].omega / r.omega,
    }
}

/// Threshold of a completed ω sweep (at least 20 points of one series).
pub fn find_threshold(records: &[QfiRecord], rule: PeakRule) -> Result<ThresholdResult> {
    if records.len() < MIN_THRESHOLD_POINTS {
        return Err(Error::config(
            "sweep",
            format!("{} points, need at least {MIN_THRESHOLD_POINTS}", records.len()),
        ));
    }
    let first = records[0];
    if records
        .iter()
        .any(|r| r.sites != first.sites || r.gamma != first.gamma || r.cycle != first.cycle)
    {
        return Err(Error::config("sweep", "records mix different (L, γ, n)"));
    }
    let xs: Vec<f64> = records.iter().map(|r| r.omega).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.qfi).collect();
    let peak = locate_peak(&xs, &ys, rule)?;
    Ok(threshold_from(records, peak))
}

/// Same result as `find_threshold(sweep_qfi_omega(..))`, but for
/// [`PeakRule::FirstProminent`] evaluates the grid in ascending batches and
/// stops as soon as the first peak is confirmed.
pub fn scan_threshold(
    template: &ProbeSpec,
    grid: &[f64],
    cycles: usize,
    rule: PeakRule,
) -> Result<ThresholdResult> {
    let PeakRule::FirstProminent { factor } = rule else {
        return find_threshold(&sweep_qfi_omega(template, grid, cycles)?, rule);
    };
    check_grid("omega_grid", grid, 0.0, FRAC_PI_2, true)?;
    if grid.len() < MIN_THRESHOLD_POINTS {
        return Err(Error::config(
            "sweep",
            format!("{} points, need at least {MIN_THRESHOLD_POINTS}", grid.len()),
        ));
    }
    let table = InteractionTable::build(template.sites(), template.gamma())?;
    let batch = scan_batch();
    let mut records: Vec<QfiRecord> = Vec::with_capacity(grid.len());
    for chunk in grid.chunks(batch) {
        let specs = chunk
            .iter()
            .map(|&w| template.with_omega(w))
            .collect::<Result<Vec<_>>>()?;
        for r in map_points(&specs, |s| qfi_at(*s, &table, cycles)) {
            records.push(r?);
        }
        let ys: Vec<f64> = records.iter().map(|r| r.qfi).collect();
        if let Scan::Found(_) = scan_first_prominent(&ys, factor) {
            break;
        }
    }
    let xs: Vec<f64> = records.iter().map(|r| r.omega).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.qfi).collect();
    let peak = locate_peak(&xs, &ys, rule)?;
    Ok(threshold_from(&records, peak))
}

fn scan_batch() -> usize {
    #[cfg(feature = "parallel")]
    {
        (2 * rayon::current_num_threads()).max(4)
    }
    #[cfg(not(feature = "parallel"))]
    {
        4
    }
}

/// Thresholds for each chain length in `sizes`.
pub fn threshold_scan(
    template: &ProbeSpec,
    sizes: &[usize],
    grid: &[f64],
    cycles: usize,
    rule: PeakRule,
) -> Result<Vec<ThresholdResult>> {
    sizes
        .iter()
        .map(|&l| scan_threshold(&template.with_sites(l)?, grid, cycles, rule))
        .collect()
}

/// Least-squares line `y = slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// `y = exp(log_prefactor) · x^exponent`, fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn prefactor(&self) -> f64 {
        self.log_prefactor.exp()
    }

    pub fn predict(&self, x: f64) -> f64 {
        (self.log_prefactor + self.exponent * x.ln()).exp()
    }
}

/// Ordinary least squares on at least three finite points.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() {
        return Err(Error::DimensionMismatch {
            expected: xs.len(),
            found: ys.len(),
        });
    }
    let n = xs.len();
    if n < MIN_FIT_POINTS {
        return Err(Error::Domain(format!("{n} points, need at least {MIN_FIT_POINTS}")));
    }
    if xs.iter().chain(ys).any(|v| !v.is_finite()) {
        return Err(Error::Domain("non-finite fit input".into()));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        n_points: n,
    })
}

/// Fits `y ∝ x^k` by least squares of `ln y` on `ln x`.
pub fn fit_power_law(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if let Some(v) = xs.iter().chain(ys).find(|v| !(**v > 0.0)) {
        return Err(Error::Domain(format!("log-log fit needs positive values, got {v}")));
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let line = fit_linear(&lx, &ly)?;
    Ok(PowerLawFit {
        exponent: line.slope,
        log_prefactor: line.intercept,
        r_squared: line.r_squared,
        n_points: line.n_points,
    })
}

/// Time exponent α of `F_Q ∝ n^α` over the cycles of `n_grid` lying in
/// `window` (inclusive).
pub fn fit_time_scaling(spec: &ProbeSpec, n_grid: &[usize], window: (usize, usize)) -> Result<PowerLawFit> {
    let (lo, hi) = window;
    if lo > hi {
        return Err(Error::config("window", format!("empty window [{lo}, {hi}]")));
    }
    let selected: Vec<usize> = n_grid.iter().copied().filter(|n| (lo..=hi).contains(n)).collect();
    if !n_grid.contains(&lo) || !n_grid.contains(&hi) {
        return Err(Error::config("window", format!("[{lo}, {hi}] endpoints not in n_grid")));
    }
    let series = qfi_series(spec, hi)?;
    let xs: Vec<f64> = selected.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = selected.iter().map(|&n| series[n].qfi).collect();
    fit_power_law(&xs, &ys)
}

/// QFI for each `(L, ω)` pair at a fixed cycle count.
pub fn qfi_vs_size(template: &ProbeSpec, points: &[(usize, f64)], cycles: usize) -> Result<Vec<QfiRecord>> {
    points
        .iter()
        .map(|&(l, w)| {
            let spec = template.with_sites(l)?.with_omega(w)?;
            let table = InteractionTable::build(l, spec.gamma())?;
            let state = FloquetOperator::new(spec, &table)?.evolve(cycles)?;
            QfiRecord::from_state(&state)
        })
        .collect()
}

/// Size exponent β of `F_Q ∝ L^β`.
pub fn fit_size_exponent(records: &[QfiRecord]) -> Result<PowerLawFit> {
    let xs: Vec<f64> = records.iter().map(|r| r.sites as f64).collect();
    let ys: Vec<f64> = records.iter().map(|r| r.qfi).collect();
    fit_power_law(&xs, &ys)
}

/// Exponent of `ω_max ∝ L^k`.
pub fn threshold_of_size(results: &[ThresholdResult]) -> Result<PowerLawFit> {
    let xs: Vec<f64> = results.iter().map(|r| r.sites as f64).collect();
    let ys: Vec<f64> = results.iter().map(|r| r.omega_max).collect();
    fit_power_law(&xs, &ys)
}

/// Linear ansatz `β = aγ + b`; `slope` is a, `intercept` is b.
pub fn beta_of_gamma(gammas: &[u32], betas: &[f64]) -> Result<LinearFit> {
    let xs: Vec<f64> = gammas.iter().map(|&g| g as f64).collect();
    fit_linear(&xs, betas)
}

/// Everything extracted for one γ: thresholds, QFI at fixed small ω and at
/// the threshold, and the three fitted exponents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingStudy {
    pub gamma: u32,
    pub thresholds: Vec<ThresholdResult>,
    pub dtc: Vec<QfiRecord>,
    pub at_threshold: Vec<QfiRecord>,
    pub beta_dtc: PowerLawFit,
    pub beta_threshold: PowerLawFit,
    pub omega_max_fit: PowerLawFit,
}

/// Parameters of a [`scaling_study`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingPlan {
    pub sizes: Vec<usize>,
    pub epsilon: f64,
    pub dtc_omega: f64,
    pub omega_grid: Vec<f64>,
    pub scaling_cycles: usize,
    pub detect_cycles: usize,
    pub rule: PeakRule,
}

impl Default for ScalingPlan {
    fn default() -> Self {
        ScalingPlan {
            sizes: (8..=20).step_by(2).collect(),
            epsilon: DEFAULT_EPSILON,
            dtc_omega: DTC_OMEGA,
            omega_grid: default_omega_grid(),
            scaling_cycles: SCALING_CYCLES,
            detect_cycles: DETECT_CYCLES,
            rule: PeakRule::default(),
        }
    }
}

/// Size scaling of the QFI for one γ, in the DTC phase and at the threshold,
/// from ferromagnetic initial states.
pub fn scaling_study(gamma: u32, plan: &ScalingPlan) -> Result<ScalingStudy> {
    let first = *plan
        .sizes
        .first()
        .ok_or_else(|| Error::config("sizes", "no system sizes given"))?;
    let template = ProbeSpec::ferromagnetic(first, gamma, plan.epsilon, plan.dtc_omega)?;
    let thresholds = threshold_scan(&template, &plan.sizes, &plan.omega_grid, plan.detect_cycles, plan.rule)?;
    let dtc_points: Vec<(usize, f64)> = plan.sizes.iter().map(|&l| (l, plan.dtc_omega)).collect();
    let thr_points: Vec<(usize, f64)> = thresholds.iter().map(|t| (t.sites, t.omega_max)).collect();
    let dtc = qfi_vs_size(&template, &dtc_points, plan.scaling_cycles)?;
    let at_threshold = qfi_vs_size(&template, &thr_points, plan.scaling_cycles)?;
    Ok(ScalingStudy {
        gamma,
        beta_dtc: fit_size_exponent(&dtc)?,
        beta_threshold: fit_size_exponent(&at_threshold)?,
        omega_max_fit: threshold_of_size(&thresholds)?,
        thresholds,
        dtc,
        at_threshold,
    })
}
