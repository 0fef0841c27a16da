//! Ridge reconstruction of (f₀, f₁) from band-limited Cauchy data.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{bump_form_factor, epsilon_norm, radiate, strength, sweep, CauchyDataSet, FrequencyGrid, NoiseInfo};
use crate::functionals::stability_rhs;
use crate::geometry::{dist, sobolev_norms, BoundaryNode, Bump, Disk, Domain, InteriorGrid, Point, Scene, SourceField, SourcePair, DEFAULT_ANGULAR, DEFAULT_RADIAL};
use crate::specfun::hankel1_01;

/// Rows per (frequency, node): re/im of ω·u, ∂₁u, ∂₂u.
pub const ROWS_PER_SAMPLE: usize = 6;
/// Smallest admissible eigenvalue of the unit-diagonal Gram matrix.
pub const GRAM_TOLERANCE: f64 = 1e-10;
/// Bisection range of log₁₀(α / λ_max).
pub const ALPHA_RANGE: (f64, f64) = (-16.0, 2.0);
/// Relative tolerance of the discrepancy match.
pub const DISCREPANCY_TOLERANCE: f64 = 0.05;
/// Final width of the log₁₀ α bracket.
const BISECTION_WIDTH: f64 = 1e-4;

/// Unit-amplitude bump elements for each channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceBasis {
    pub f0: Vec<Disk>,
    pub f1: Vec<Disk>,
}

impl SourceBasis {
    pub fn new(f0: Vec<Disk>, f1: Vec<Disk>) -> Result<Self> {
        if f0.is_empty() && f1.is_empty() {
            return Err(Error::Config("source basis is empty".into()));
        }
        if let Some(d) = f0.iter().chain(&f1).find(|d| !(d.radius > 0.0) || !d.center.iter().all(|c| c.is_finite())) {
            return Err(Error::Config(format!("invalid basis element {d:?}")));
        }
        Ok(Self { f0, f1 })
    }

    /// n × n square lattice centred at the origin, same elements in both channels.
    pub fn square_grid(n: usize, spacing: f64, radius: f64) -> Result<Self> {
        let off = 0.5 * (n as f64 - 1.0) * spacing;
        let disks: Vec<Disk> = (0..n * n)
            .map(|i| Disk { center: [(i % n) as f64 * spacing - off, (i / n) as f64 * spacing - off], radius })
            .collect();
        Self::new(disks.clone(), disks)
    }

    /// Lattice points offset + (i, j)·spacing with |c| + radius ≤ extent, both channels.
    pub fn disk_grid(extent: f64, spacing: f64, radius: f64, offset: Point) -> Result<Self> {
        if !(spacing > 0.0 && extent > radius) {
            return Err(Error::Config(format!("disk grid needs spacing > 0 and extent > radius, got {spacing}, {extent}")));
        }
        let m = (extent / spacing).ceil() as i64 + 1;
        let mut disks = Vec::new();
        for j in -m..=m {
            for i in -m..=m {
                let c = [offset[0] + i as f64 * spacing, offset[1] + j as f64 * spacing];
                if (c[0] * c[0] + c[1] * c[1]).sqrt() + radius <= extent {
                    disks.push(Disk { center: c, radius });
                }
            }
        }
        Self::new(disks.clone(), disks)
    }

    /// 5 × 5 lattice of radius-0.12 bumps, spacing 0.25.
    pub fn reference() -> Self {
        Self::square_grid(5, 0.25, 0.12).expect("valid reference basis")
    }

    /// 21 elements per channel on a 0.2 lattice inside |x| ≤ 0.95, radius 0.4.
    pub fn experiment() -> Self {
        Self::disk_grid(0.95, 0.2, 0.4, [0.0, 0.0]).expect("valid experiment basis")
    }

    pub fn n0(&self) -> usize {
        self.f0.len()
    }

    pub fn n1(&self) -> usize {
        self.f1.len()
    }

    pub fn len(&self) -> usize {
        self.n0() + self.n1()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Elements in column order: all f₀ elements, then all f₁ elements.
    pub fn elements(&self) -> impl Iterator<Item = (usize, Disk)> + '_ {
        self.f0.iter().map(|d| (0, *d)).chain(self.f1.iter().map(|d| (1, *d)))
    }

    /// Σ c·element per channel.
    pub fn combine(&self, coefficients: &[f64]) -> Result<SourcePair> {
        if coefficients.len() != self.len() {
            return Err(Error::Config(format!("{} coefficients for a basis of {}", coefficients.len(), self.len())));
        }
        let bump = |d: &Disk, a: f64| Bump { center: d.center, radius: d.radius, amplitude: a };
        let f0 = SourceField::new(self.f0.iter().zip(coefficients).map(|(d, a)| bump(d, *a)).collect());
        let f1 = SourceField::new(self.f1.iter().zip(&coefficients[self.n0()..]).map(|(d, a)| bump(d, *a)).collect());
        SourcePair::new(f0, f1)
    }

    fn channel_grid(disks: &[Disk]) -> Result<InteriorGrid> {
        InteriorGrid::covering(disks, DEFAULT_RADIAL, DEFAULT_ANGULAR)
    }

    fn gram(disks: &[Disk], grid: &InteriorGrid) -> DMatrix<f64> {
        let vals: Vec<Vec<f64>> = disks
            .iter()
            .map(|d| {
                let b = Bump { center: d.center, radius: d.radius, amplitude: 1.0 };
                grid.points.iter().map(|p| b.value(*p)).collect()
            })
            .collect();
        DMatrix::from_fn(disks.len(), disks.len(), |i, j| {
            vals[i].iter().zip(&vals[j]).zip(&grid.weights).map(|((a, b), w)| a * b * w).sum()
        })
    }

    /// Smallest eigenvalue of the unit-diagonal Gram matrix over both channels.
    pub fn gram_min_eigenvalue(&self) -> Result<f64> {
        let mut lo = f64::INFINITY;
        for disks in [&self.f0, &self.f1] {
            if disks.is_empty() {
                continue;
            }
            let g = Self::gram(disks, &Self::channel_grid(disks)?);
            let s = DMatrix::from_fn(g.nrows(), g.ncols(), |i, j| g[(i, j)] / (g[(i, i)] * g[(j, j)]).sqrt());
            lo = lo.min(SymmetricEigen::new(s).eigenvalues.min());
        }
        Ok(lo)
    }

    /// Checks support separation from ∂Ω and linear independence.
    pub fn validate(&self, domain: &Domain) -> Result<()> {
        for (_, d) in self.elements() {
            if !domain.contains(d.center) || domain.points().any(|x| dist(x, d.center) <= d.radius) {
                return Err(Error::Geometry(format!("basis element at ({}, {}) is not strictly inside the domain", d.center[0], d.center[1])));
            }
        }
        let lo = self.gram_min_eigenvalue()?;
        if !(lo > GRAM_TOLERANCE) {
            return Err(Error::Conditioning(format!("basis Gram matrix is degenerate (smallest eigenvalue {lo:e})")));
        }
        Ok(())
    }

    /// L² projection of `source` onto the span, channel by channel.
    pub fn project(&self, source: &SourcePair) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.len());
        for (disks, field) in [(&self.f0, &source.f0), (&self.f1, &source.f1)] {
            if disks.is_empty() {
                continue;
            }
            let all: Vec<Disk> = disks.iter().copied().chain(field.disks()).collect();
            let grid = Self::channel_grid(&all)?;
            let g = Self::gram(disks, &grid);
            let rhs = DVector::from_iterator(
                disks.len(),
                disks.iter().map(|d| {
                    let b = Bump { center: d.center, radius: d.radius, amplitude: 1.0 };
                    grid.integrate(|p| b.value(p) * field.value(p))
                }),
            );
            let chol = g.cholesky().ok_or_else(|| Error::Conditioning("basis Gram matrix is not positive definite".into()))?;
            out.extend(chol.solve(&rhs).iter());
        }
        Ok(out)
    }
}

/// Weighted real rows of one (frequency, node) sample.
pub fn sample_rows(omega: f64, u: Complex64, g: [Complex64; 2], scale: f64) -> [f64; ROWS_PER_SAMPLE] {
    let wu = u * omega;
    [wu.re * scale, wu.im * scale, g[0].re * scale, g[0].im * scale, g[1].re * scale, g[1].im * scale]
}

/// Stacked data vector b with ‖b‖² = ε².
pub fn data_vector(data: &CauchyDataSet) -> DVector<f64> {
    let mut b = DVector::zeros(ROWS_PER_SAMPLE * data.u.len());
    for f in 0..data.n_freq() {
        let (omega, wf) = (data.grid.samples[f], data.grid.weights[f]);
        for (j, nd) in data.nodes.iter().enumerate() {
            let i = data.index(f, j);
            let rows = sample_rows(omega, data.u[i], data.grad[i], (wf * nd.weight).sqrt());
            b.rows_mut(ROWS_PER_SAMPLE * i, ROWS_PER_SAMPLE).copy_from_slice(&rows);
        }
    }
    b
}

/// Discretized map from basis coefficients to weighted Cauchy data.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardMatrix {
    pub a: DMatrix<f64>,
    pub n0: usize,
    pub n1: usize,
    pub grid: FrequencyGrid,
    pub nodes: Vec<BoundaryNode>,
}

pub fn assemble(domain: &Domain, basis: &SourceBasis, grid: &FrequencyGrid) -> Result<ForwardMatrix> {
    if basis.is_empty() {
        return Err(Error::Conditioning("cannot assemble an empty basis".into()));
    }
    if domain.is_empty() || grid.is_empty() {
        return Err(Error::Config("domain and frequency grid must be nonempty".into()));
    }
    let n_nodes = domain.len();
    let rows = ROWS_PER_SAMPLE * n_nodes * grid.len();
    // one column pair per distinct element; f₀ and f₁ share the Hankel values
    let mut sites: Vec<Disk> = Vec::new();
    for (_, d) in basis.elements() {
        if !sites.contains(&d) {
            sites.push(d);
        }
    }
    let mut radii: Vec<f64> = Vec::new();
    for d in &sites {
        if !radii.contains(&d.radius) {
            radii.push(d.radius);
        }
    }
    let form: Vec<Vec<Complex64>> = radii
        .iter()
        .map(|&r| {
            let b = Bump { center: [0.0, 0.0], radius: r, amplitude: 1.0 };
            grid.samples.iter().map(|&w| bump_form_factor(&b, Complex64::new(w, 0.0))).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let columns: Vec<[Vec<f64>; 2]> = sites
        .par_iter()
        .map(|d| {
            let ri = radii.iter().position(|r| *r == d.radius).expect("radius is tabulated");
            let mut c0 = vec![0.0; rows];
            let mut c1 = vec![0.0; rows];
            for (f, (&omega, &wf)) in grid.samples.iter().zip(&grid.weights).enumerate() {
                let k = Complex64::new(omega, 0.0);
                let s0 = strength(Complex64::new(0.0, 1.0) * k, form[ri][f]);
                let s1 = strength(Complex64::new(1.0, 0.0), form[ri][f]);
                for (j, nd) in domain.nodes.iter().enumerate() {
                    let dd = dist(nd.point, d.center);
                    if dd <= d.radius {
                        return Err(Error::Geometry("basis element touches a boundary node".into()));
                    }
                    let h = hankel1_01(k * dd)?;
                    let scale = (wf * nd.weight).sqrt();
                    let at = ROWS_PER_SAMPLE * (f * n_nodes + j);
                    let (u, g) = radiate(k, s0, nd.point, d.center, dd, h);
                    c0[at..at + ROWS_PER_SAMPLE].copy_from_slice(&sample_rows(omega, u, g, scale));
                    let (u, g) = radiate(k, s1, nd.point, d.center, dd, h);
                    c1[at..at + ROWS_PER_SAMPLE].copy_from_slice(&sample_rows(omega, u, g, scale));
                }
            }
            Ok([c0, c1])
        })
        .collect::<Result<_>>()?;
    let mut a = DMatrix::zeros(rows, basis.len());
    for (col, (ch, d)) in basis.elements().enumerate() {
        let site = sites.iter().position(|s| *s == d).expect("site is tabulated");
        a.column_mut(col).copy_from_slice(&columns[site][ch]);
    }
    Ok(ForwardMatrix { a, n0: basis.n0(), n1: basis.n1(), grid: grid.clone(), nodes: domain.nodes.clone() })
}

impl ForwardMatrix {
    pub fn n_cols(&self) -> usize {
        self.a.ncols()
    }

    /// Data vector of `data` after checking it was sampled on this matrix's grid and nodes.
    pub fn rhs(&self, data: &CauchyDataSet) -> Result<DVector<f64>> {
        data.validate()?;
        if data.grid.samples != self.grid.samples || data.grid.weights != self.grid.weights {
            return Err(Error::Config("data frequency grid differs from the forward matrix grid".into()));
        }
        if data.nodes != self.nodes {
            return Err(Error::Config("data boundary nodes differ from the forward matrix nodes".into()));
        }
        Ok(data_vector(data))
    }

    /// Rows of the leading frequencies, valid when `grid` is a prefix of this grid (nested Gauss grids).
    pub fn prefix(&self, grid: &FrequencyGrid) -> Result<ForwardMatrix> {
        let n = grid.len();
        if n > self.grid.len() || self.grid.samples[..n] != grid.samples[..] || self.grid.weights[..n] != grid.weights[..] {
            return Err(Error::Config(format!("grid up to {} is not a prefix of the assembled grid", grid.k_max)));
        }
        let rows = ROWS_PER_SAMPLE * self.nodes.len() * n;
        Ok(ForwardMatrix { a: self.a.rows(0, rows).into_owned(), n0: self.n0, n1: self.n1, grid: grid.clone(), nodes: self.nodes.clone() })
    }

    /// Singular values in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let ata = self.a.tr_mul(&self.a);
        let mut s: Vec<f64> = SymmetricEigen::new(ata).eigenvalues.iter().map(|l| l.max(0.0).sqrt()).collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum Regularization {
    /// α = alpha · λ_max(AᵀA).
    Fixed { alpha: f64 },
    /// α chosen so the residual matches the expected noise norm; `level` is used when the data carries no noise record.
    Discrepancy { level: f64 },
}

impl Default for Regularization {
    fn default() -> Self {
        Regularization::Discrepancy { level: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Fixed,
    Converged,
    /// Residual target outside the reachable range; the nearest α is used.
    TargetUnreachable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    /// f₀ coefficients followed by f₁ coefficients.
    pub coefficients: Vec<f64>,
    pub n0: usize,
    /// α relative to λ_max(AᵀA).
    pub alpha: f64,
    pub alpha_abs: f64,
    pub residual: f64,
    pub target: Option<f64>,
    pub status: SolveStatus,
}

impl ReconstructionResult {
    pub fn c0(&self) -> &[f64] {
        &self.coefficients[..self.n0]
    }

    pub fn c1(&self) -> &[f64] {
        &self.coefficients[self.n0..]
    }

    pub fn fields(&self, basis: &SourceBasis) -> Result<SourcePair> {
        basis.combine(&self.coefficients)
    }
}

/// Expected ‖noise‖ in the weighted data norm.
pub fn noise_norm(data: &CauchyDataSet, sigma_u: f64, sigma_grad: f64) -> f64 {
    let wsum: f64 = data.nodes.iter().map(|n| n.weight).sum();
    let per_freq: f64 = data
        .grid
        .samples
        .iter()
        .zip(&data.grid.weights)
        .map(|(w, q)| q * (w * w * sigma_u * sigma_u + 2.0 * sigma_grad * sigma_grad))
        .sum();
    (wsum * per_freq).sqrt()
}

/// RMS of |z| over a complex array.
fn rms(values: impl Iterator<Item = Complex64> + Clone) -> f64 {
    let n = values.clone().count();
    if n == 0 {
        return 0.0;
    }
    (values.map(|z| z.norm_sqr()).sum::<f64>() / n as f64).sqrt()
}

/// Adds complex Gaussian noise of standard deviation level × RMS to u and to ∇u.
pub fn add_noise(data: &CauchyDataSet, level: f64, seed: u64) -> Result<CauchyDataSet> {
    if !(level >= 0.0 && level.is_finite()) {
        return Err(Error::Config(format!("noise level must be nonnegative, got {level}")));
    }
    if level == 0.0 {
        return Ok(data.clone());
    }
    let sigma_u = level * rms(data.u.iter().copied());
    let sigma_grad = level * rms(data.grad.iter().flat_map(|g| g.iter().copied()));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let unit = Normal::new(0.0, std::f64::consts::FRAC_1_SQRT_2).expect("valid normal");
    let mut draw = |s: f64| Complex64::new(unit.sample(&mut rng), unit.sample(&mut rng)) * s;
    let mut out = data.clone();
    for z in out.u.iter_mut() {
        *z += draw(sigma_u);
    }
    for g in out.grad.iter_mut() {
        for z in g.iter_mut() {
            *z += draw(sigma_grad);
        }
    }
    out.noise = NoiseInfo { level, seed: Some(seed), sigma_u, sigma_grad };
    Ok(out)
}

/// Precomputed normal equations for repeated ridge solves.
struct NormalEquations {
    ata: DMatrix<f64>,
    atb: DVector<f64>,
    eig: SymmetricEigen<f64, nalgebra::Dyn>,
    lambda_max: f64,
}

impl NormalEquations {
    fn new(a: &DMatrix<f64>, b: &DVector<f64>) -> Self {
        let ata = a.tr_mul(a);
        let atb = a.tr_mul(b);
        let eig = SymmetricEigen::new(ata.clone());
        let lambda_max = eig.eigenvalues.max().max(0.0);
        Self { ata, atb, eig, lambda_max }
    }

    fn spectral(&self, alpha: f64) -> DVector<f64> {
        let g = self.eig.eigenvectors.tr_mul(&self.atb);
        let scaled = DVector::from_iterator(g.len(), g.iter().zip(self.eig.eigenvalues.iter()).map(|(g, l)| g / (l.max(0.0) + alpha)));
        &self.eig.eigenvectors * scaled
    }

    fn cholesky(&self, alpha: f64) -> Result<DVector<f64>> {
        let mut m = self.ata.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += alpha;
        }
        let chol = m.cholesky().ok_or_else(|| Error::Singular(format!("regularized normal matrix is not positive definite at alpha = {alpha:e}")))?;
        Ok(chol.solve(&self.atb))
    }
}

fn residual(a: &DMatrix<f64>, c: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a * c - b).norm()
}

/// Ridge solve min ‖Ac − b‖² + α‖c‖².
pub fn reconstruct(matrix: &ForwardMatrix, data: &CauchyDataSet, regularization: Regularization) -> Result<ReconstructionResult> {
    let b = matrix.rhs(data)?;
    reconstruct_vector(matrix, &b, data, regularization)
}

fn reconstruct_vector(matrix: &ForwardMatrix, b: &DVector<f64>, data: &CauchyDataSet, regularization: Regularization) -> Result<ReconstructionResult> {
    let a = &matrix.a;
    let n = a.ncols();
    let normal = NormalEquations::new(a, b);
    let lmax = if normal.lambda_max > 0.0 { normal.lambda_max } else { 1.0 };
    let finish = |alpha: f64, target: Option<f64>, status: SolveStatus| -> Result<ReconstructionResult> {
        let alpha_abs = alpha * lmax;
        let c = if b.iter().all(|v| *v == 0.0) { DVector::zeros(n) } else { normal.cholesky(alpha_abs)? };
        Ok(ReconstructionResult {
            residual: residual(a, &c, b),
            coefficients: c.iter().copied().collect(),
            n0: matrix.n0,
            alpha,
            alpha_abs,
            target,
            status,
        })
    };
    match regularization {
        Regularization::Fixed { alpha } => {
            if !(alpha > 0.0 && alpha.is_finite()) {
                return Err(Error::Config(format!("regularization alpha must be positive, got {alpha}")));
            }
            finish(alpha, None, SolveStatus::Fixed)
        }
        Regularization::Discrepancy { level } => {
            let (su, sg) = if data.noise.level > 0.0 {
                (data.noise.sigma_u, data.noise.sigma_grad)
            } else {
                (level * rms(data.u.iter().copied()), level * rms(data.grad.iter().flat_map(|g| g.iter().copied())))
            };
            let target = noise_norm(data, su, sg);
            let res_at = |log_alpha: f64| residual(a, &normal.spectral(10f64.powf(log_alpha) * lmax), b);
            let (mut lo, mut hi) = ALPHA_RANGE;
            if !(target > 0.0) || res_at(lo) > target * (1.0 + DISCREPANCY_TOLERANCE) {
                return finish(10f64.powf(lo), Some(target), SolveStatus::TargetUnreachable);
            }
            if res_at(hi) < target * (1.0 - DISCREPANCY_TOLERANCE) {
                return finish(10f64.powf(hi), Some(target), SolveStatus::TargetUnreachable);
            }
            // largest α whose residual stays inside the tolerance band
            let ceiling = target * (1.0 + DISCREPANCY_TOLERANCE);
            if res_at(hi) <= ceiling {
                lo = hi;
            }
            while hi - lo > BISECTION_WIDTH {
                let mid = 0.5 * (lo + hi);
                if res_at(mid) > ceiling {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            let out = finish(10f64.powf(lo), Some(target), SolveStatus::Converged)?;
            let status = if (out.residual - target).abs() <= DISCREPANCY_TOLERANCE * target { SolveStatus::Converged } else { SolveStatus::TargetUnreachable };
            Ok(ReconstructionResult { status, ..out })
        }
    }
}

/// (‖f₀ʳᵉᶜ − f₀‖₍₁₎, ‖f₁ʳᵉᶜ − f₁‖₍₀₎) on `grid`.
pub fn error_metrics(reconstructed: &SourcePair, truth: &SourcePair, grid: &InteriorGrid) -> Result<(f64, f64)> {
    let d0 = reconstructed.f0.plus(&truth.f0.scaled(-1.0));
    let d1 = reconstructed.f1.plus(&truth.f1.scaled(-1.0));
    Ok((sobolev_norms(&d0, grid, 1)?[1], sobolev_norms(&d1, grid, 0)?[0]))
}

/// Interior grid covering the supports of both pairs.
pub fn error_grid(a: &SourcePair, b: &SourcePair) -> Result<InteriorGrid> {
    let disks: Vec<Disk> = a.support().chain(b.support()).collect();
    InteriorGrid::covering(&disks, DEFAULT_RADIAL, DEFAULT_ANGULAR)
}

/// Per-K seed from the master seed (SplitMix64 finalizer).
pub fn derived_seed(master: u64, k: f64) -> u64 {
    let mut z = master ^ k.to_bits().rotate_left(29);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub k_values: Vec<f64>,
    pub noise_level: f64,
    pub seed: u64,
    pub points_per_unit: usize,
    pub regularization: Regularization,
    /// Replace the truth by its projection onto the basis.
    pub inverse_crime: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            k_values: vec![2.0, 4.0, 8.0, 16.0, 32.0],
            noise_level: 1e-2,
            seed: 20240917,
            points_per_unit: crate::forward::DEFAULT_POINTS_PER_UNIT,
            regularization: Regularization::Discrepancy { level: 1e-2 },
            inverse_crime: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityRow {
    #[serde(rename = "K")]
    pub k: f64,
    pub epsilon: f64,
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "err_f0_H1")]
    pub err_f0_h1: f64,
    #[serde(rename = "err_f1_L2")]
    pub err_f1_l2: f64,
    pub rhs_theorem: f64,
    pub alpha: f64,
    /// (err₀² + err₁²) / rhs.
    pub fitted_constant: f64,
    pub residual: f64,
    pub status: SolveStatus,
}

impl StabilityRow {
    pub fn total_error(&self) -> f64 {
        self.err_f0_h1.powi(2) + self.err_f1_l2.powi(2)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    pub rows: Vec<StabilityRow>,
    pub m: f64,
    /// T = 2·diam Ω + 2, echoed for context.
    pub observation_time: f64,
    pub noise_level: f64,
    pub seed: u64,
    pub basis_size: usize,
}

/// ε² + M²/(1 + K^{2/3}E^{1/4}), continued by E = 0 when the noisy data norm is not below 1.
fn report_rhs(k: f64, epsilon: f64, m: f64) -> Result<f64> {
    if epsilon >= 1.0 {
        Ok(epsilon * epsilon + m * m)
    } else {
        stability_rhs(k, epsilon, m)
    }
}

pub fn increasing_stability_experiment(scene: &Scene, basis: &SourceBasis, cfg: &ExperimentConfig) -> Result<StabilityReport> {
    if cfg.k_values.is_empty() {
        return Err(Error::Config("experiment needs at least one K".into()));
    }
    let mut ks = cfg.k_values.clone();
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    basis.validate(&scene.domain)?;
    let truth = if cfg.inverse_crime { basis.combine(&basis.project(&scene.source)?)? } else { scene.source.clone() };
    let m = truth.sobolev_budget()?.m;
    let k_max = *ks.last().expect("nonempty");
    let full_grid = FrequencyGrid::gauss(k_max, cfg.points_per_unit)?;
    let full = assemble(&scene.domain, basis, &full_grid)?;
    let err_grid = {
        let span: Vec<Disk> = basis.elements().map(|(_, d)| d).chain(truth.support()).collect();
        InteriorGrid::covering(&span, DEFAULT_RADIAL, DEFAULT_ANGULAR)?
    };
    let rows = ks
        .par_iter()
        .map(|&k| {
            let grid = FrequencyGrid::gauss(k, cfg.points_per_unit)?;
            let matrix = full.prefix(&grid)?;
            let clean = sweep(&scene.domain, &truth, &grid)?;
            let data = add_noise(&clean, cfg.noise_level, derived_seed(cfg.seed, k))?;
            let (eps2, e) = epsilon_norm(&data)?;
            let result = reconstruct(&matrix, &data, cfg.regularization)?;
            let rec = result.fields(basis)?;
            let (err0, err1) = error_metrics(&rec, &truth, &err_grid)?;
            let epsilon = eps2.sqrt();
            let rhs = report_rhs(k, epsilon, m)?;
            Ok(StabilityRow {
                k,
                epsilon,
                e,
                err_f0_h1: err0,
                err_f1_l2: err1,
                rhs_theorem: rhs,
                alpha: result.alpha,
                fitted_constant: (err0 * err0 + err1 * err1) / rhs,
                residual: result.residual,
                status: result.status,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityReport {
        rows,
        m,
        observation_time: 2.0 * scene.domain.diameter + 2.0,
        noise_level: cfg.noise_level,
        seed: cfg.seed,
        basis_size: basis.len(),
    })
}
