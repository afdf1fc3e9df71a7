use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aliasing::{Activation, Projection};
use crate::error::{Error, Result};
use crate::nets::TrainConfig;
use crate::problems::ProblemId;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Benchmark,
    Superres,
    Lowfreq,
    AliasingStudy,
    InitSensitivity,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::Benchmark,
        ExperimentKind::Superres,
        ExperimentKind::Lowfreq,
        ExperimentKind::AliasingStudy,
        ExperimentKind::InitSensitivity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Benchmark => "benchmark",
            ExperimentKind::Superres => "superres",
            ExperimentKind::Lowfreq => "lowfreq",
            ExperimentKind::AliasingStudy => "aliasing_study",
            ExperimentKind::InitSensitivity => "init_sensitivity",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        let norm = match norm.as_str() {
            "aliasing" => "aliasing_study",
            "init" => "init_sensitivity",
            other => other,
        };
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::Config(format!("unknown experiment {s}")))
    }
}

/// Preset model sizes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Desk,
    Paper,
}

/// Overrides applied on top of the preset of every network.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelOverrides {
    pub scale: Scale,
    /// Coefficients per axis of the coefficient-space models.
    pub length: Option<usize>,
    pub width: Option<usize>,
    pub features: Option<usize>,
    pub layers: Option<usize>,
    pub modes: Option<usize>,
    pub activation: Option<Activation>,
    pub real_weights: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DataSection {
    pub train_count: usize,
    pub test_count: usize,
    /// Dataset resolution, `0` for the problem default.
    pub resolution: usize,
    pub sigma: f64,
    pub dt: f64,
}

impl Default for DataSection {
    fn default() -> Self {
        Self {
            train_count: 200,
            test_count: 50,
            resolution: 0,
            sigma: 2.0,
            dt: 1e-4,
        }
    }
}

/// Input band and its shifts.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BandSection {
    /// Overrides the problem's default band.
    pub k_min: Option<usize>,
    pub k_max: Option<usize>,
    /// Band shifts: upwards for superres, downwards for lowfreq.
    pub shifts: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSection {
    /// Training grid of grid-based models, `0` for the preset.
    pub train: usize,
    /// Uniform evaluation grid, `0` for the dataset resolution.
    pub eval: usize,
    /// Training grids of the aliasing study. The smallest one also trains
    /// the model that is evaluated across `eval_sizes`.
    pub sizes: Vec<usize>,
    pub eval_sizes: Vec<usize>,
    pub projection: Projection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Experiment seed; every dataset is drawn from it.
    #[serde(default)]
    pub seed: u64,
    /// Architecture names, or `exact` for the exact spectral rule.
    pub models: Vec<String>,
    pub problems: Vec<ProblemId>,
    /// Initialisation seeds; one trained network per seed.
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Record wall-clock seconds; off keeps result files reproducible.
    #[serde(default)]
    pub timing: bool,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub model: ModelOverrides,
    #[serde(default)]
    pub data: DataSection,
    #[serde(default)]
    pub band: BandSection,
    #[serde(default)]
    pub grids: GridSection,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Band of `problem` after the overrides.
    pub fn band_for(&self, problem: ProblemId) -> Option<(usize, usize)> {
        let (lo, hi) = problem.default_band()?;
        Some((self.band.k_min.unwrap_or(lo), self.band.k_max.unwrap_or(hi)))
    }

    pub fn max_shift(&self) -> usize {
        self.band.shifts.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        let bad = |m: String| Err(Error::Config(m));
        if self.models.is_empty() || self.problems.is_empty() {
            return bad("at least one model and one problem are required".into());
        }
        if self.seeds.is_empty() {
            return bad("the seed list is empty".into());
        }
        for m in &self.models {
            if m != "exact" {
                m.parse::<crate::nets::Architecture>()
                    .map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        if let (Some(lo), Some(hi)) = (self.band.k_min, self.band.k_max) {
            if lo > hi {
                return bad(format!("empty band [{lo}, {hi}]"));
            }
        }
        for &p in &self.problems {
            if let Some((lo, _)) = self.band_for(p) {
                if lo < p.min_wavenumber() {
                    return bad(format!("{p} needs inputs above wavenumber {}", p.min_wavenumber()));
                }
            }
        }
        match self.kind {
            Superres | Lowfreq => {
                if self.band.shifts.is_empty() {
                    return bad(format!("{} needs band shifts", self.kind));
                }
                for &p in &self.problems {
                    let (lo, hi) = self
                        .band_for(p)
                        .ok_or_else(|| Error::Config(format!("{p} has no input band")))?;
                    let floor = p.min_wavenumber();
                    if self.kind == Lowfreq && self.max_shift() + floor > lo {
                        return bad(format!(
                            "shift {} moves band [{lo}, {hi}] below wavenumber {floor}",
                            self.max_shift()
                        ));
                    }
                    if self.kind == Superres {
                        let top = hi + self.max_shift();
                        if self.grids.eval < 2 * top + 1 {
                            return bad(format!(
                                "evaluation grid {} cannot resolve harmonic {top}; need at least {}",
                                self.grids.eval,
                                2 * top + 1
                            ));
                        }
                    }
                    if self.grids.train != 0 && self.grids.train < 2 * hi + 1 {
                        return bad(format!(
                            "training grid {} cannot resolve harmonic {hi}; need at least {}",
                            self.grids.train,
                            2 * hi + 1
                        ));
                    }
                }
            }
            AliasingStudy => {
                if self.grids.sizes.len() < 2 {
                    return bad("the aliasing study needs at least two grids".into());
                }
                if self.problems.iter().any(|p| p.dim() != 1) {
                    return bad("the aliasing study is one-dimensional".into());
                }
            }
            Benchmark | InitSensitivity => {}
        }
        Ok(())
    }
}

/// Shipped configurations, by name.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let text = match name {
        "benchmark" => include_str!("../../configs/benchmark.toml"),
        "benchmark_full" => include_str!("../../configs/benchmark_full.toml"),
        "superres" => include_str!("../../configs/superres.toml"),
        "lowfreq" => include_str!("../../configs/lowfreq.toml"),
        "aliasing_study" => include_str!("../../configs/aliasing_study.toml"),
        "init_sensitivity" => include_str!("../../configs/init_sensitivity.toml"),
        _ => return Err(Error::Config(format!("no preset named {name}"))),
    };
    ExperimentConfig::from_toml(text)
}

pub const PRESETS: [&str; 6] = [
    "benchmark",
    "benchmark_full",
    "superres",
    "lowfreq",
    "aliasing_study",
    "init_sensitivity",
];
