use std::path::{Path, PathBuf};

use helmstab::forward::{Solver, DEFAULT_POINTS_PER_UNIT};
use helmstab::geometry::{Disk, Point};
use helmstab::inverse::{ExperimentConfig, Regularization, SourceBasis};
use helmstab::io::SceneSpec;
use helmstab::wavedom::WaveEvalConfig;
use helmstab::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSpec {
    pub k_max: f64,
    pub points_per_unit: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { k_max: 8.0, points_per_unit: DEFAULT_POINTS_PER_UNIT }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseSpec {
    pub level: f64,
    pub seed: u64,
}

impl Default for NoiseSpec {
    fn default() -> Self {
        Self { level: 1e-2, seed: 20240917 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisSpec {
    Reference,
    #[default]
    Experiment,
    SquareGrid { n: usize, spacing: f64, radius: f64 },
    DiskGrid { extent: f64, spacing: f64, radius: f64, #[serde(default)] offset: Point },
    Explicit { f0: Vec<Disk>, f1: Vec<Disk> },
}

impl BasisSpec {
    pub fn build(&self) -> Result<SourceBasis> {
        match self {
            BasisSpec::Reference => Ok(SourceBasis::reference()),
            BasisSpec::Experiment => Ok(SourceBasis::experiment()),
            BasisSpec::SquareGrid { n, spacing, radius } => SourceBasis::square_grid(*n, *spacing, *radius),
            BasisSpec::DiskGrid { extent, spacing, radius, offset } => SourceBasis::disk_grid(*extent, *spacing, *radius, *offset),
            BasisSpec::Explicit { f0, f1 } => SourceBasis::new(f0.clone(), f1.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct ForwardOptions {
    pub solver: Solver,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveOptions {
    pub eval: WaveEvalConfig,
    /// Boundary node indices for the Fourier check; empty means 8 evenly spaced nodes.
    pub nodes: Vec<usize>,
    pub k_values: Vec<f64>,
    pub fourier_tolerance: f64,
    /// Node count of the disk used for the Parseval check.
    pub parseval_nodes: usize,
    pub omega_max: f64,
    pub parseval_tolerance: f64,
    /// Also run Parseval with dt halved and T_max doubled.
    pub refine: bool,
    pub export_traces: bool,
}

impl Default for WaveOptions {
    fn default() -> Self {
        Self {
            eval: WaveEvalConfig::default(),
            nodes: vec![],
            k_values: vec![1.0, 2.0, 5.0, 8.0],
            fourier_tolerance: 1e-3,
            parseval_nodes: 16,
            omega_max: 40.0,
            parseval_tolerance: 5e-2,
            refine: true,
            export_traces: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundsOptions {
    pub k_values: Vec<f64>,
    /// Sector points use k₂ = sector_ratio·k₁.
    pub sector_ratio: f64,
    pub tail_k_values: Vec<f64>,
}

impl Default for BoundsOptions {
    fn default() -> Self {
        Self { k_values: vec![1.0, 2.0, 4.0, 8.0], sector_ratio: 0.5, tail_k_values: vec![4.0, 8.0, 16.0] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataInput {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReconstructOptions {
    pub regularization: Regularization,
    /// Fit a persisted dataset instead of synthesizing one.
    pub data: Option<DataInput>,
    /// Replace the scene source by its projection onto the basis.
    pub inverse_crime: bool,
    /// Points per side of the field export grid.
    pub field_grid: usize,
}

impl Default for ReconstructOptions {
    fn default() -> Self {
        Self { regularization: Regularization::Discrepancy { level: 1e-2 }, data: None, inverse_crime: false, field_grid: 41 }
    }
}

/// Full description of one CLI run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub scene: SceneSpec,
    pub grid: GridSpec,
    pub noise: NoiseSpec,
    pub basis: BasisSpec,
    /// Output directory; `--out` wins.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub forward: ForwardOptions,
    pub wave: WaveOptions,
    pub bounds: BoundsOptions,
    pub reconstruct: ReconstructOptions,
    pub experiment: ExperimentConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// Applies `--seed` to every seeded stage.
    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        if let Some(s) = seed {
            self.noise.seed = s;
            self.experiment.seed = s;
        }
        self
    }

    /// The configuration as recorded in manifests (output directory removed).
    pub fn echo(&self) -> serde_json::Value {
        let mut c = self.clone();
        c.output = None;
        serde_json::to_value(&c).expect("config serializes")
    }
}
