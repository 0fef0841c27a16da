use std::fs;
use std::path::Path;

use helmstab::forward::{field, sweep_with, CauchyDataSet, FrequencyGrid};
use helmstab::functionals::{calibrate_tail_constant, empirical_tail, lemma31_bound, tail_bound, BoundReport, FunctionalKind, TAIL_OMEGA_MAX};
use helmstab::geometry::{Disk, InteriorGrid, Scene, SourcePair, DEFAULT_ANGULAR, DEFAULT_RADIAL};
use helmstab::inverse::{add_noise, assemble, error_metrics, increasing_stability_experiment, reconstruct, SolveStatus, SourceBasis};
use helmstab::io::{dataset_csv, dataset_sidecar, entry, load_dataset, pretty, records_csv, traces_csv, ArtifactWriter, Manifest};
use helmstab::wavedom::{parseval_check, temporal_fourier, ParsevalReport, WaveEvalConfig, WaveTrace};
use helmstab::{Error, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;

pub struct Run<'a> {
    pub cfg: &'a RunConfig,
    pub out: &'a Path,
}

fn manifest(run: &Run, command: &str, seed: Option<u64>) -> Manifest {
    Manifest::new(command, run.cfg.echo(), seed, run.cfg.scene.hash())
}

fn synthesize(run: &Run, scene: &Scene, truth: &SourcePair) -> Result<CauchyDataSet> {
    let cfg = run.cfg;
    let grid = FrequencyGrid::gauss(cfg.grid.k_max, cfg.grid.points_per_unit)?;
    let clean = sweep_with(&scene.domain, truth, &grid, cfg.forward.solver)?;
    let mut data = add_noise(&clean, cfg.noise.level, cfg.noise.seed)?;
    data.scene_hash = cfg.scene.hash();
    Ok(data)
}

pub fn forward(run: &Run) -> Result<Manifest> {
    let scene = run.cfg.scene.build()?;
    let data = synthesize(run, &scene, &scene.source)?;
    let mut w = ArtifactWriter::new(run.out)?;
    w.write("data.csv", &dataset_csv(&data)?)?;
    w.write("data.json", &dataset_sidecar(&data)?)?;
    w.finish(manifest(run, "forward", Some(run.cfg.noise.seed)))
}

#[derive(Serialize)]
struct FourierRow {
    node_index: usize,
    k: f64,
    re_fourier: f64,
    im_fourier: f64,
    re_field: f64,
    im_field: f64,
    rel_deviation: f64,
    tail_bound: f64,
}

#[derive(Serialize)]
struct ParsevalRow {
    dt: f64,
    t_max: f64,
    time_side: f64,
    time_tail: f64,
    freq_side: f64,
    freq_tail: f64,
    omega_max: f64,
    discrepancy: f64,
}

impl ParsevalRow {
    fn new(c: &WaveEvalConfig, r: ParsevalReport) -> Self {
        let ParsevalReport { time_side, time_tail, freq_side, freq_tail, omega_max, discrepancy } = r;
        Self { dt: c.dt, t_max: c.t_max, time_side, time_tail, freq_side, freq_tail, omega_max, discrepancy }
    }
}

#[derive(Serialize)]
struct WaveSummary {
    max_fourier_deviation: f64,
    parseval_discrepancy: Vec<f64>,
    passed: bool,
}

pub fn wave_check(run: &Run) -> Result<Manifest> {
    let opts = &run.cfg.wave;
    let scene = run.cfg.scene.build()?;
    opts.eval.validate(&scene.domain)?;
    let n = scene.domain.len();
    let nodes: Vec<usize> = if opts.nodes.is_empty() { (0..8.min(n)).map(|i| i * n / 8.min(n)).collect() } else { opts.nodes.clone() };
    if let Some(j) = nodes.iter().find(|j| **j >= n) {
        return Err(Error::Config(format!("node index {j} out of range for {n} nodes")));
    }
    let pairs: Vec<(usize, f64)> = nodes.iter().flat_map(|&j| opts.k_values.iter().map(move |&k| (j, k))).collect();
    let rows: Vec<FourierRow> = pairs
        .par_iter()
        .map(|&(j, k)| {
            let x = scene.domain.nodes[j].point;
            let est = temporal_fourier(x, k, &scene.source, &opts.eval)?;
            let u = field(x, Complex64::new(k, 0.0), &scene.source)?;
            let dev = (est.value - u).norm();
            let rel = if u.norm() > 0.0 { dev / u.norm() } else { dev };
            Ok(FourierRow { node_index: j, k, re_fourier: est.value.re, im_fourier: est.value.im, re_field: u.re, im_field: u.im, rel_deviation: rel, tail_bound: est.tail_bound })
        })
        .collect::<Result<_>>()?;
    let disk = scene.domain.resampled(opts.parseval_nodes)?;
    let grid = FrequencyGrid::gauss(opts.omega_max, run.cfg.grid.points_per_unit)?;
    let mut levels = vec![opts.eval];
    if opts.refine {
        levels.push(WaveEvalConfig { dt: 0.5 * opts.eval.dt, t_max: 2.0 * opts.eval.t_max, ..opts.eval });
    }
    let parseval: Vec<ParsevalRow> = levels
        .iter()
        .map(|c| Ok(ParsevalRow::new(c, parseval_check(&disk, &scene.source, &grid, c)?)))
        .collect::<Result<_>>()?;

    let max_dev = rows.iter().map(|r| r.rel_deviation).fold(0.0, f64::max);
    let disc: Vec<f64> = parseval.iter().map(|p| p.discrepancy).collect();
    let decreasing = disc.windows(2).all(|w| w[1] < w[0] || w[0] == 0.0);
    let passed = max_dev <= opts.fourier_tolerance && disc.iter().all(|d| *d <= opts.parseval_tolerance) && decreasing;

    let mut w = ArtifactWriter::new(run.out)?;
    w.write("fourier.csv", &records_csv(&rows)?)?;
    w.write("parseval.csv", &records_csv(&parseval)?)?;
    if opts.export_traces {
        let traces: Vec<(usize, WaveTrace)> = nodes
            .par_iter()
            .map(|&j| Ok((j, WaveTrace::sample(scene.domain.nodes[j].point, &scene.source, &opts.eval, opts.eval.dt)?)))
            .collect::<Result<_>>()?;
        w.write("traces.csv", &traces_csv(&traces)?)?;
    }
    w.write("wave_check.json", &pretty(&WaveSummary { max_fourier_deviation: max_dev, parseval_discrepancy: disc.clone(), passed })?)?;
    let m = w.finish(manifest(run, "wave-check", None))?;
    if !passed {
        return Err(Error::Accuracy(format!(
            "wave check failed: max Fourier deviation {max_dev:e}, Parseval discrepancies {disc:?}"
        )));
    }
    Ok(m)
}

#[derive(Serialize)]
struct TailRow {
    k: f64,
    tail: f64,
    k_times_tail: f64,
    bound: f64,
    c_tail: f64,
}

pub fn bounds(run: &Run) -> Result<Manifest> {
    let opts = &run.cfg.bounds;
    let scene = run.cfg.scene.build()?;
    let points: Vec<(Complex64, FunctionalKind)> = opts
        .k_values
        .iter()
        .flat_map(|&k| [Complex64::new(k, 0.0), Complex64::new(k, opts.sector_ratio * k)])
        .flat_map(|z| FunctionalKind::ALL.into_iter().map(move |kind| (z, kind)))
        .collect();
    let rows: Vec<BoundReport> = points.par_iter().map(|&(z, kind)| lemma31_bound(&scene.domain, &scene.source, z, kind)).collect::<Result<_>>()?;
    let budget = scene.source.sobolev_budget()?;
    let ppu = run.cfg.grid.points_per_unit;
    let c_tail = calibrate_tail_constant(&scene.domain, &scene.source, &budget, &opts.tail_k_values, ppu)?;
    let tails: Vec<TailRow> = opts
        .tail_k_values
        .iter()
        .map(|&k| {
            let tail = empirical_tail(&scene.domain, &scene.source, k, TAIL_OMEGA_MAX, ppu)?;
            Ok(TailRow { k, tail, k_times_tail: k * tail, bound: tail_bound(k, &budget, c_tail)?, c_tail })
        })
        .collect::<Result<_>>()?;
    let mut w = ArtifactWriter::new(run.out)?;
    w.write("bounds.csv", &records_csv(&rows)?)?;
    w.write("tail.csv", &records_csv(&tails)?)?;
    let m = w.finish(manifest(run, "bounds", None))?;
    if let Some(r) = rows.iter().find(|r| !r.holds()) {
        return Err(Error::Accuracy(format!("{} bound violated at k = {} + {}i (margin {:e})", r.label, r.k_re, r.k_im, r.margin)));
    }
    Ok(m)
}

#[derive(Serialize)]
struct CoefficientRow {
    index: usize,
    channel: &'static str,
    center_x: f64,
    center_y: f64,
    radius: f64,
    coefficient: f64,
    truth: Option<f64>,
}

#[derive(Serialize)]
struct FieldRow {
    x: f64,
    y: f64,
    f0_rec: f64,
    f1_rec: f64,
    f0_true: f64,
    f1_true: f64,
}

#[derive(Serialize)]
struct ReconstructionSummary {
    data: &'static str,
    inverse_crime: bool,
    n_coefficients: usize,
    alpha: f64,
    alpha_abs: f64,
    residual: f64,
    target: Option<f64>,
    status: SolveStatus,
    err_f0_h1: f64,
    err_f1_l2: f64,
    coefficient_error: Option<f64>,
}

fn error_grid_for(basis: &SourceBasis, truth: &SourcePair) -> Result<InteriorGrid> {
    let span: Vec<Disk> = basis.elements().map(|(_, d)| d).chain(truth.support()).collect();
    InteriorGrid::covering(&span, DEFAULT_RADIAL, DEFAULT_ANGULAR)
}

pub fn reconstruct_cmd(run: &Run) -> Result<Manifest> {
    let opts = &run.cfg.reconstruct;
    let scene = run.cfg.scene.build()?;
    let basis = run.cfg.basis.build()?;
    basis.validate(&scene.domain)?;
    let crime = opts.inverse_crime;
    let truth_coeffs = if crime { Some(basis.project(&scene.source)?) } else { None };
    let truth = match &truth_coeffs {
        Some(c) => basis.combine(c)?,
        None => scene.source.clone(),
    };
    let mut inputs = vec![];
    let data = match &opts.data {
        Some(inp) => {
            for p in [&inp.csv, &inp.sidecar] {
                let bytes = fs::read(p).map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                inputs.push(entry(&p.display().to_string(), &bytes));
            }
            load_dataset(&inp.csv, &inp.sidecar)?
        }
        None => synthesize(run, &scene, &truth)?,
    };
    let matrix = assemble(&scene.domain, &basis, &data.grid)?;
    let result = reconstruct(&matrix, &data, opts.regularization)?;
    let rec = result.fields(&basis)?;
    let (e0, e1) = error_metrics(&rec, &truth, &error_grid_for(&basis, &truth)?)?;
    let coefficient_error = truth_coeffs.as_ref().map(|c| {
        let num: f64 = result.coefficients.iter().zip(c).map(|(a, b)| (a - b).powi(2)).sum();
        let den: f64 = c.iter().map(|b| b * b).sum();
        if den > 0.0 { (num / den).sqrt() } else { num.sqrt() }
    });

    let coeffs: Vec<CoefficientRow> = basis
        .elements()
        .enumerate()
        .map(|(i, (ch, d))| CoefficientRow {
            index: i,
            channel: if ch == 0 { "f0" } else { "f1" },
            center_x: d.center[0],
            center_y: d.center[1],
            radius: d.radius,
            coefficient: result.coefficients[i],
            truth: truth_coeffs.as_ref().map(|c| c[i]),
        })
        .collect();
    let n = opts.field_grid.max(2);
    let r = scene.domain.origin_radius;
    let h = 2.0 * r / (n - 1) as f64;
    let fields: Vec<FieldRow> = (0..n * n)
        .map(|i| [-r + (i % n) as f64 * h, -r + (i / n) as f64 * h])
        .filter(|p| scene.domain.contains(*p))
        .map(|p| FieldRow { x: p[0], y: p[1], f0_rec: rec.f0.value(p), f1_rec: rec.f1.value(p), f0_true: truth.f0.value(p), f1_true: truth.f1.value(p) })
        .collect();
    let summary = ReconstructionSummary {
        data: if opts.data.is_some() { "file" } else { "synthetic" },
        inverse_crime: crime,
        n_coefficients: basis.len(),
        alpha: result.alpha,
        alpha_abs: result.alpha_abs,
        residual: result.residual,
        target: result.target,
        status: result.status,
        err_f0_h1: e0,
        err_f1_l2: e1,
        coefficient_error,
    };
    let mut w = ArtifactWriter::new(run.out)?;
    w.write("coefficients.csv", &records_csv(&coeffs)?)?;
    w.write("fields.csv", &records_csv(&fields)?)?;
    w.write("reconstruction.json", &pretty(&summary)?)?;
    let mut m = manifest(run, "reconstruct", Some(run.cfg.noise.seed));
    m.inputs = inputs;
    w.finish(m)
}

pub fn sweep_experiment(run: &Run) -> Result<Manifest> {
    let scene = run.cfg.scene.build()?;
    let basis = run.cfg.basis.build()?;
    let report = increasing_stability_experiment(&scene, &basis, &run.cfg.experiment)?;
    let mut w = ArtifactWriter::new(run.out)?;
    w.write("stability.csv", &records_csv(&report.rows)?)?;
    w.write("stability.json", &pretty(&report)?)?;
    w.finish(manifest(run, "sweep-experiment", Some(run.cfg.experiment.seed)))
}
