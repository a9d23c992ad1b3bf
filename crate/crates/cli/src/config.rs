//! Run configuration: TOML file, command-line overrides, validation.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dtc_probe::analysis::{log_grid, PeakRule, SweepAxis};
use dtc_probe::ProbeSpec;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{CliError, CliResult};

/// An angle in radians, written either as a plain number or as a multiple of
/// π/2 (`0.05pi/2`, `1e-5*pi/2`, `pi/2`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(pub f64);

impl FromStr for Angle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let value = match t.strip_suffix("pi/2") {
            Some(head) => {
                let head = head.strip_suffix('*').unwrap_or(head);
                let k = if head.is_empty() {
                    1.0
                } else {
                    head.parse::<f64>().map_err(|_| format!("bad multiple of pi/2 in `{s}`"))?
                };
                k * FRAC_PI_2
            }
            None => t.parse::<f64>().map_err(|_| format!("`{s}` is neither a number nor `<x>pi/2`"))?,
        };
        if value.is_finite() {
            Ok(Angle(value))
        } else {
            Err(format!("`{s}` is not finite"))
        }
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Int(i64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Angle(v)),
            Raw::Int(v) => Ok(Angle(v as f64)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A one-dimensional grid: explicit values, `log:lo:hi:count` or
/// `lin:lo:hi:count` (endpoints inclusive).
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Values(Vec<f64>),
    Log { lo: f64, hi: f64, count: usize },
    Linear { lo: f64, hi: f64, count: usize },
}

impl Grid {
    pub fn points(&self, path: &str) -> CliResult<Vec<f64>> {
        match *self {
            Grid::Values(ref v) => Ok(v.clone()),
            Grid::Log { lo, hi, count } => log_grid(lo, hi, count).map_err(|e| CliError::from(e).within(path)),
            Grid::Linear { lo, hi, count } => {
                if count < 2 || !(hi > lo) {
                    return Err(CliError::config(path, "linear grid needs lo < hi and count ≥ 2"));
                }
                let step = (hi - lo) / (count - 1) as f64;
                Ok((0..count)
                    .map(|i| if i == count - 1 { hi } else { lo + step * i as f64 })
                    .collect())
            }
        }
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let ranged = |lo: &str, hi: &str, n: &str| -> Result<(f64, f64, usize), String> {
            Ok((
                lo.parse::<Angle>()?.0,
                hi.parse::<Angle>()?.0,
                n.trim().parse().map_err(|_| format!("bad point count `{n}`"))?,
            ))
        };
        match parts.as_slice() {
            ["log", lo, hi, n] => ranged(lo, hi, n).map(|(lo, hi, count)| Grid::Log { lo, hi, count }),
            ["lin", lo, hi, n] => ranged(lo, hi, n).map(|(lo, hi, count)| Grid::Linear { lo, hi, count }),
            [list] => list
                .split(',')
                .map(|v| v.parse::<Angle>().map(|a| a.0))
                .collect::<Result<Vec<_>, _>>()
                .map(Grid::Values),
            _ => Err(format!("`{s}` is not `log:lo:hi:n`, `lin:lo:hi:n` or a comma list")),
        }
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grid::Values(v) => {
                let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                f.write_str(&s.join(","))
            }
            Grid::Log { lo, hi, count } => write!(f, "log:{lo}:{hi}:{count}"),
            Grid::Linear { lo, hi, count } => write!(f, "lin:{lo}:{hi}:{count}"),
        }
    }
}

impl Serialize for Grid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Grid {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            List(Vec<Angle>),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::List(v) => Ok(Grid::Values(v.into_iter().map(|a| a.0).collect())),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

fn default_omega_grid() -> Grid {
    Grid::Log {
        lo: 1e-6 * FRAC_PI_2,
        hi: 0.3 * FRAC_PI_2,
        count: 200,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    FirstProminent,
    GlobalMax,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProbeConfig {
    pub sites: usize,
    pub gamma: u32,
    pub epsilon: f64,
    pub omega: Angle,
    pub init_state: u64,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            sites: 12,
            gamma: 2,
            epsilon: 0.01,
            omega: Angle(1e-5 * FRAC_PI_2),
            init_state: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub cycles: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        SimulateConfig { cycles: 100 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: String,
    pub grid: Grid,
    pub cycles: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            axis: "omega".into(),
            grid: default_omega_grid(),
            cycles: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdConfig {
    pub sizes: Vec<usize>,
    pub grid: Grid,
    pub cycles: usize,
    pub rule: Rule,
    /// Rise over the plateau that marks the first prominent peak.
    pub factor: f64,
}

impl Default for ThresholdConfig {
    fn default() -> Self {
        ThresholdConfig {
            sizes: vec![8, 10, 12, 14],
            grid: default_omega_grid(),
            cycles: 10,
            rule: Rule::FirstProminent,
            factor: 4.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScalingConfig {
    pub sizes: Vec<usize>,
    pub dtc_omega: Angle,
    /// Cycle count at which the QFI is compared across sizes.
    pub cycles: usize,
    /// Cycle count of the threshold scans.
    pub detect_cycles: usize,
    pub grid: Grid,
    pub gammas: Vec<u32>,
    /// Whether gamma-scan also runs the threshold studies.
    pub with_threshold: bool,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            sizes: (8..=20).step_by(2).collect(),
            dtc_omega: Angle(1e-6 * FRAC_PI_2),
            cycles: 2,
            detect_cycles: 10,
            grid: default_omega_grid(),
            gammas: vec![1, 2, 3, 4],
            with_threshold: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpsilonSweepConfig {
    pub grid: Grid,
    pub cycles: usize,
}

impl Default for EpsilonSweepConfig {
    fn default() -> Self {
        EpsilonSweepConfig {
            grid: Grid::Linear {
                lo: 0.0,
                hi: 0.5,
                count: 51,
            },
            cycles: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QasmConfig {
    pub cycles: usize,
    pub measure: bool,
}

impl Default for QasmConfig {
    fn default() -> Self {
        QasmConfig {
            cycles: 1,
            measure: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundCheckConfig {
    pub cycles: usize,
}

impl Default for BoundCheckConfig {
    fn default() -> Self {
        BoundCheckConfig { cycles: 50 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            path: None,
            format: Format::Csv,
        }
    }
}

/// Everything a run needs, after file loading and flag overrides.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub probe: ProbeConfig,
    pub simulate: SimulateConfig,
    pub sweep: SweepConfig,
    pub threshold: ThresholdConfig,
    pub scaling: ScalingConfig,
    pub epsilon_sweep: EpsilonSweepConfig,
    pub qasm: QasmConfig,
    pub bound_check: BoundCheckConfig,
    pub output: OutputConfig,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    /// Reserved; every pipeline is deterministic.
    pub seed: u64,
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| {
            let path = e
                .span()
                .map(|s| key_path_at(text, s.start))
                .unwrap_or_default();
            CliError::config(if path.is_empty() { "<file>".into() } else { path }, e.message().to_string())
        })
    }

    pub fn probe_spec(&self) -> CliResult<ProbeSpec> {
        let p = &self.probe;
        ProbeSpec::new(p.sites, p.gamma, p.epsilon, p.omega.0, p.init_state)
            .map_err(|e| CliError::from(e).within("probe"))
    }

    pub fn peak_rule(&self) -> CliResult<PeakRule> {
        match self.threshold.rule {
            Rule::GlobalMax => Ok(PeakRule::GlobalMax),
            Rule::FirstProminent if self.threshold.factor > 1.0 && self.threshold.factor.is_finite() => {
                Ok(PeakRule::FirstProminent {
                    factor: self.threshold.factor,
                })
            }
            Rule::FirstProminent => Err(CliError::config("threshold.factor", "must be a finite number above 1")),
        }
    }

    pub fn sweep_axis(&self) -> CliResult<SweepAxis> {
        self.sweep
            .axis
            .parse()
            .map_err(|e| CliError::from(e).within("sweep"))
    }
}

/// Dotted `section.key` of the TOML line containing byte `offset`.
fn key_path_at(text: &str, offset: usize) -> String {
    let mut section = String::new();
    let mut key = String::new();
    let mut pos = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('[') && trimmed.ends_with(']') {
            section = trimmed.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            key.clear();
        } else if let Some((k, _)) = trimmed.split_once('=') {
            key = k.trim().to_string();
        }
        if offset < pos + line.len() {
            break;
        }
        pos += line.len();
    }
    match (section.is_empty(), key.is_empty()) {
        (true, _) => key,
        (false, true) => section,
        (false, false) => format!("{section}.{key}"),
    }
}

pub fn require_positive(path: &str, value: usize) -> CliResult<()> {
    if value == 0 {
        Err(CliError::config(path, "must be at least 1"))
    } else {
        Ok(())
    }
}

pub fn require_nonempty<T>(path: &str, values: &[T]) -> CliResult<()> {
    if values.is_empty() {
        Err(CliError::config(path, "must not be empty"))
    } else {
        Ok(())
    }
}
