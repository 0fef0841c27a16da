//! Scene descriptions, CSV/JSON persistence and run manifests.

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::forward::{CauchyDataSet, FrequencyGrid, NoiseInfo};
use crate::geometry::{make_disk, make_polygon, BoundaryNode, Bump, Point, Scene, SourceField, SourcePair, DEFAULT_ANGULAR, DEFAULT_RADIAL};
use crate::wavedom::WaveTrace;

/// Version string written into manifests.
pub const VERSION: &str = concat!("v", env!("CARGO_PKG_VERSION"));

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Disk { radius: f64, nodes: usize },
    Polygon { vertices: Vec<Point>, nodes_per_edge: usize },
}

fn default_radial() -> usize {
    DEFAULT_RADIAL
}

fn default_angular() -> usize {
    DEFAULT_ANGULAR
}

/// JSON form of a scene: domain plus bump lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneSpec {
    pub domain: DomainSpec,
    #[serde(default)]
    pub f0: Vec<Bump>,
    #[serde(default)]
    pub f1: Vec<Bump>,
    #[serde(default = "default_radial")]
    pub radial: usize,
    #[serde(default = "default_angular")]
    pub angular: usize,
}

impl Default for SceneSpec {
    fn default() -> Self {
        Self::reference()
    }
}

impl SceneSpec {
    pub fn reference() -> Self {
        let src = crate::geometry::reference_source();
        Self {
            domain: DomainSpec::Disk { radius: 1.0, nodes: 128 },
            f0: src.f0.bumps,
            f1: src.f1.bumps,
            radial: DEFAULT_RADIAL,
            angular: DEFAULT_ANGULAR,
        }
    }

    pub fn build(&self) -> Result<Scene> {
        let domain = match &self.domain {
            DomainSpec::Disk { radius, nodes } => make_disk(*radius, *nodes)?,
            DomainSpec::Polygon { vertices, nodes_per_edge } => make_polygon(vertices, *nodes_per_edge)?,
        };
        for b in self.f0.iter().chain(&self.f1) {
            crate::geometry::make_bump(b.center, b.radius, b.amplitude)?;
        }
        let source = SourcePair::with_density(SourceField::new(self.f0.clone()), SourceField::new(self.f1.clone()), self.radial, self.angular)?;
        Scene::new(domain, source)
    }

    /// SHA-256 of the canonical JSON encoding.
    pub fn hash(&self) -> String {
        sha256_hex(&serde_json::to_vec(self).expect("scene spec serializes"))
    }
}

#[derive(Serialize, Deserialize)]
struct DatasetRow {
    omega: f64,
    node_index: usize,
    re_u: f64,
    im_u: f64,
    re_ux: f64,
    im_ux: f64,
    re_uy: f64,
    im_uy: f64,
}

/// Metadata stored next to the dataset CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSidecar {
    pub grid: FrequencyGrid,
    pub nodes: Vec<BoundaryNode>,
    pub noise: NoiseInfo,
    pub scene_hash: String,
}

pub fn dataset_csv(data: &CauchyDataSet) -> Result<Vec<u8>> {
    data.validate()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    for f in 0..data.n_freq() {
        for j in 0..data.n_nodes() {
            let i = data.index(f, j);
            let (u, g) = (data.u[i], data.grad[i]);
            w.serialize(DatasetRow {
                omega: data.grid.samples[f],
                node_index: j,
                re_u: u.re,
                im_u: u.im,
                re_ux: g[0].re,
                im_ux: g[0].im,
                re_uy: g[1].re,
                im_uy: g[1].im,
            })?;
        }
    }
    finish(w)
}

pub fn dataset_sidecar(data: &CauchyDataSet) -> Result<Vec<u8>> {
    let side = DatasetSidecar { grid: data.grid.clone(), nodes: data.nodes.clone(), noise: data.noise.clone(), scene_hash: data.scene_hash.clone() };
    pretty(&side)
}

pub fn parse_dataset(csv_bytes: &[u8], sidecar: &[u8]) -> Result<CauchyDataSet> {
    let side: DatasetSidecar = serde_json::from_slice(sidecar)?;
    let n = side.grid.len() * side.nodes.len();
    let mut u = Vec::with_capacity(n);
    let mut grad = Vec::with_capacity(n);
    let mut r = csv::Reader::from_reader(csv_bytes);
    for (i, row) in r.deserialize::<DatasetRow>().enumerate() {
        let row = row?;
        let (f, j) = (i / side.nodes.len().max(1), i % side.nodes.len().max(1));
        if f >= side.grid.len() || row.node_index != j || row.omega != side.grid.samples[f] {
            return Err(Error::Config(format!("dataset row {i} does not match the sidecar grid and nodes")));
        }
        u.push(Complex64::new(row.re_u, row.im_u));
        grad.push([Complex64::new(row.re_ux, row.im_ux), Complex64::new(row.re_uy, row.im_uy)]);
    }
    let data = CauchyDataSet { grid: side.grid, nodes: side.nodes, u, grad, noise: side.noise, scene_hash: side.scene_hash };
    data.validate()?;
    Ok(data)
}

pub fn load_dataset(csv_path: &Path, sidecar_path: &Path) -> Result<CauchyDataSet> {
    parse_dataset(&fs::read(csv_path)?, &fs::read(sidecar_path)?)
}

/// Rows of any serializable record type as CSV with a header.
pub fn records_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    finish(w)
}

#[derive(Serialize)]
struct TraceRow {
    t: f64,
    node_index: usize,
    #[serde(rename = "U")]
    u: f64,
    #[serde(rename = "dU_dt")]
    u_t: f64,
}

/// (t, node_index, U, ∂ₜU) for each (node index, trace) pair.
pub fn traces_csv(traces: &[(usize, WaveTrace)]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (j, tr) in traces {
        for ((t, u), ut) in tr.times().zip(&tr.u).zip(&tr.u_t) {
            w.serialize(TraceRow { t, node_index: *j, u: *u, u_t: *ut })?;
        }
    }
    finish(w)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

pub fn pretty<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to rerun a command and check its outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub seed: Option<u64>,
    pub scene_hash: String,
    pub artifacts: Vec<FileEntry>,
    pub inputs: Vec<FileEntry>,
}

impl Manifest {
    pub fn new(command: &str, config: serde_json::Value, seed: Option<u64>, scene_hash: String) -> Self {
        Self { tool: "helmstab".into(), version: VERSION.into(), command: command.into(), config, seed, scene_hash, artifacts: vec![], inputs: vec![] }
    }
}

/// Output directory that records what it writes.
pub struct ArtifactWriter<'a> {
    dir: &'a Path,
    pub entries: Vec<FileEntry>,
}

impl<'a> ArtifactWriter<'a> {
    pub fn new(dir: &'a Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(Self { dir, entries: vec![] })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        fs::write(self.dir.join(name), bytes)?;
        self.entries.push(entry(name, bytes));
        Ok(())
    }

    /// Writes `manifest.json` listing every file written so far.
    pub fn finish(self, mut manifest: Manifest) -> Result<Manifest> {
        manifest.artifacts = self.entries;
        fs::write(self.dir.join("manifest.json"), pretty(&manifest)?)?;
        Ok(manifest)
    }
}

pub fn entry(name: &str, bytes: &[u8]) -> FileEntry {
    FileEntry { file: name.into(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 }
}
