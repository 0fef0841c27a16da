//! Hankel-kernel representation of the scattered field on the boundary.

use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist, BoundaryNode, Bump, Domain, Point, SourcePair};
use crate::quad::composite_gauss;
use crate::specfun::{bessel_j, hankel1_01, HankelOrder};

const I: Complex64 = Complex64::new(0.0, 1.0);
/// Outgoing fundamental solution of Δ + k² is (i/4)H₀⁽¹⁾(k|x|) for a −δ source.
const KERNEL_SCALE: Complex64 = Complex64::new(0.0, 0.25);

pub const DEFAULT_POINTS_PER_UNIT: usize = 8;
/// ε is clamped below at this value before taking −ln ε.
pub const EPSILON_FLOOR: f64 = 1e-300;
const FORM_FACTOR_ORDER: usize = 64;
const FORM_FACTOR_SPAN: f64 = 32.0;

/// Quadrature in ω over (a, b] ⊂ (0, ∞).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    pub k_max: f64,
    pub samples: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FrequencyGrid {
    /// Gauss–Legendre panels of width ≤ 1 on (0, K]; integer K gives nested grids.
    pub fn gauss(k_max: f64, points_per_unit: usize) -> Result<Self> {
        Self::gauss_on(0.0, k_max, points_per_unit)
    }

    pub fn gauss_on(lo: f64, hi: f64, points_per_unit: usize) -> Result<Self> {
        if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
            return Err(Error::Config(format!("frequency interval ({lo}, {hi}] is invalid")));
        }
        if points_per_unit < DEFAULT_POINTS_PER_UNIT {
            return Err(Error::Config(format!(
                "frequency grid needs at least {DEFAULT_POINTS_PER_UNIT} points per unit, got {points_per_unit}"
            )));
        }
        let panels = ((hi - lo) - 1e-12).ceil().max(1.0) as usize;
        let (samples, weights) = composite_gauss(lo, hi, panels, points_per_unit);
        Ok(Self { k_max: hi, samples, weights })
    }

    pub fn from_parts(k_max: f64, samples: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.len() != weights.len() {
            return Err(Error::Config("frequency grid needs matching nonempty samples and weights".into()));
        }
        if !(samples[0] > 0.0) || samples.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Config("frequency samples must be positive and strictly increasing".into()));
        }
        if *samples.last().unwrap() > k_max || weights.iter().any(|w| !(*w > 0.0)) {
            return Err(Error::Config("frequency samples must lie below K with positive weights".into()));
        }
        Ok(Self { k_max, samples, weights })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.samples.iter().zip(&self.weights).map(|(w, q)| q * f(*w)).sum()
    }
}

/// Complex wave number in the sector |arg k| < π/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorPoint {
    k: Complex64,
}

impl SectorPoint {
    pub fn new(k: Complex64) -> Result<Self> {
        if !(k.re > 0.0 && k.im.abs() < k.re) {
            return Err(Error::Domain(format!("k = {k} is outside the sector |arg k| < pi/4")));
        }
        Ok(Self { k })
    }

    pub fn from_polar(modulus: f64, arg: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(modulus, arg))
    }

    pub fn k(&self) -> Complex64 {
        self.k
    }
}

/// Accepts real k > 0 and sector points; everything else is a domain error.
pub fn check_wavenumber(k: Complex64) -> Result<()> {
    if !(k.re > 0.0) || !k.im.is_finite() {
        return Err(Error::Domain(format!("wave number needs Re k > 0, got {k}")));
    }
    if k.im != 0.0 && k.im.abs() >= k.re * (1.0 - 1e-15) {
        return Err(Error::Domain(format!(
            "complex wave number {k} outside the sector |arg k| < {FRAC_PI_4:.6}"
        )));
    }
    Ok(())
}

fn check_outside(x: Point, source: &SourcePair) -> Result<()> {
    if source.in_support(x) {
        return Err(Error::Singular(format!("evaluation point ({}, {}) lies in the source support", x[0], x[1])));
    }
    Ok(())
}

/// u(x, k) = (i/4)∫ H₀(k|x − y|)(f₁ + ik f₀) dy by interior quadrature, solving (Δ + k²)u = −f₁ − ikf₀.
pub fn field(x: Point, k: Complex64, source: &SourcePair) -> Result<Complex64> {
    Ok(field_and_grad(x, k, source)?.0)
}

pub fn grad_field(x: Point, k: Complex64, source: &SourcePair) -> Result<[Complex64; 2]> {
    Ok(field_and_grad(x, k, source)?.1)
}

pub fn field_and_grad(x: Point, k: Complex64, source: &SourcePair) -> Result<(Complex64, [Complex64; 2])> {
    check_wavenumber(k)?;
    check_outside(x, source)?;
    let ik = I * k;
    let mut u = Complex64::new(0.0, 0.0);
    let mut g = [Complex64::new(0.0, 0.0); 2];
    for ((y, w), [f0, f1]) in source.grid.points.iter().zip(&source.grid.weights).zip(&source.values) {
        if *f0 == 0.0 && *f1 == 0.0 {
            continue;
        }
        let r = dist(x, *y);
        let [h0, h1] = hankel1_01(k * r)?;
        let s = (*f1 + ik * *f0) * *w;
        u += h0 * s;
        let radial = -k * h1 * s / r;
        g[0] += radial * (x[0] - y[0]);
        g[1] += radial * (x[1] - y[1]);
    }
    Ok((KERNEL_SCALE * u, [KERNEL_SCALE * g[0], KERNEL_SCALE * g[1]]))
}

/// 2π∫₀^r J₀(kρ) b(ρ) ρ dρ for a radial bump b.
pub fn bump_form_factor(bump: &Bump, k: Complex64) -> Result<Complex64> {
    let panels = ((k.norm() * bump.radius / FORM_FACTOR_SPAN).ceil() as usize).max(1);
    let (nodes, weights) = composite_gauss(0.0, bump.radius, panels, FORM_FACTOR_ORDER);
    let mut acc = Complex64::new(0.0, 0.0);
    for (rho, w) in nodes.into_iter().zip(weights) {
        let q = 1.0 - (rho / bump.radius).powi(2);
        acc += bessel_j(HankelOrder::ZERO, k * rho)? * (w * rho * q.powi(5));
    }
    Ok(acc * (2.0 * PI * bump.amplitude))
}

/// Per-bump strengths at a fixed k: outside its support a radial bump radiates like a point source.
#[derive(Debug, Clone)]
pub struct SeparableField {
    pub k: Complex64,
    centers: Vec<Point>,
    radii: Vec<f64>,
    strengths: Vec<Complex64>,
}

impl SeparableField {
    pub fn new(source: &SourcePair, k: Complex64) -> Result<Self> {
        check_wavenumber(k)?;
        let ik = I * k;
        let mut centers = Vec::new();
        let mut radii = Vec::new();
        let mut strengths = Vec::new();
        let channels = source.f0.bumps.iter().map(|b| (b, ik)).chain(source.f1.bumps.iter().map(|b| (b, Complex64::new(1.0, 0.0))));
        for (b, ch) in channels {
            if b.amplitude == 0.0 {
                continue;
            }
            centers.push(b.center);
            radii.push(b.radius);
            strengths.push(strength(ch, bump_form_factor(b, k)?));
        }
        Ok(Self { k, centers, radii, strengths })
    }

    pub fn eval(&self, x: Point) -> Result<(Complex64, [Complex64; 2])> {
        let mut u = Complex64::new(0.0, 0.0);
        let mut g = [Complex64::new(0.0, 0.0); 2];
        for ((c, r), s) in self.centers.iter().zip(&self.radii).zip(&self.strengths) {
            let d = dist(x, *c);
            if d <= *r {
                return Err(Error::Singular(format!("evaluation point ({}, {}) lies in the source support", x[0], x[1])));
            }
            let h = hankel1_01(self.k * d)?;
            let (du, dg) = radiate(self.k, *s, x, *c, d, h);
            u += du;
            g[0] += dg[0];
            g[1] += dg[1];
        }
        Ok((u, g))
    }
}

/// Point-source strength (i/4)·channel·F for a form factor F; channel is ik for f₀ and 1 for f₁.
pub fn strength(channel: Complex64, form_factor: Complex64) -> Complex64 {
    KERNEL_SCALE * channel * form_factor
}

/// Field and gradient at x of a point source of strength s at c, given d = |x − c| and [H₀, H₁](kd).
pub fn radiate(k: Complex64, s: Complex64, x: Point, c: Point, d: f64, h: [Complex64; 2]) -> (Complex64, [Complex64; 2]) {
    let radial = -k * h[1] * s / d;
    (h[0] * s, [radial * (x[0] - c[0]), radial * (x[1] - c[1])])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Solver {
    /// Interior quadrature of the Hankel kernel.
    Quadrature,
    /// Addition theorem per radial bump.
    #[default]
    Separable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct NoiseInfo {
    pub level: f64,
    pub seed: Option<u64>,
    pub sigma_u: f64,
    pub sigma_grad: f64,
}

/// Boundary traces over a frequency grid, stored frequency-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyDataSet {
    pub grid: FrequencyGrid,
    pub nodes: Vec<BoundaryNode>,
    pub u: Vec<Complex64>,
    pub grad: Vec<[Complex64; 2]>,
    pub noise: NoiseInfo,
    pub scene_hash: String,
}

impl CauchyDataSet {
    pub fn n_freq(&self) -> usize {
        self.grid.len()
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn index(&self, f: usize, j: usize) -> usize {
        f * self.nodes.len() + j
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.grid.len() * self.nodes.len();
        if self.u.len() != n || self.grad.len() != n {
            return Err(Error::Config(format!(
                "dataset arrays have {} / {} entries, expected {n}",
                self.u.len(),
                self.grad.len()
            )));
        }
        let finite = |z: &Complex64| z.re.is_finite() && z.im.is_finite();
        if !self.u.iter().all(finite) || !self.grad.iter().flatten().all(finite) {
            return Err(Error::Accuracy("dataset contains non-finite entries".into()));
        }
        Ok(())
    }

    /// (‖u(·,ω_f)‖², ‖∇u(·,ω_f)‖²) on the boundary.
    pub fn boundary_energy(&self, f: usize) -> (f64, f64) {
        let mut eu = 0.0;
        let mut eg = 0.0;
        for (j, nd) in self.nodes.iter().enumerate() {
            let i = self.index(f, j);
            eu += nd.weight * self.u[i].norm_sqr();
            eg += nd.weight * (self.grad[i][0].norm_sqr() + self.grad[i][1].norm_sqr());
        }
        (eu, eg)
    }
}

fn eval_row(domain: &Domain, source: &SourcePair, omega: f64, solver: Solver) -> Result<Vec<(Complex64, [Complex64; 2])>> {
    let k = Complex64::new(omega, 0.0);
    match solver {
        Solver::Quadrature => domain.points().map(|x| field_and_grad(x, k, source)).collect(),
        Solver::Separable => {
            for x in domain.points() {
                check_outside(x, source)?;
            }
            let sep = SeparableField::new(source, k)?;
            domain.points().map(|x| sep.eval(x)).collect()
        }
    }
}

pub fn sweep(domain: &Domain, source: &SourcePair, grid: &FrequencyGrid) -> Result<CauchyDataSet> {
    sweep_with(domain, source, grid, Solver::default())
}

pub fn sweep_with(domain: &Domain, source: &SourcePair, grid: &FrequencyGrid, solver: Solver) -> Result<CauchyDataSet> {
    if grid.is_empty() {
        return Err(Error::Config("frequency grid is empty".into()));
    }
    let rows: Vec<Vec<(Complex64, [Complex64; 2])>> = grid
        .samples
        .par_iter()
        .map(|&w| eval_row(domain, source, w, solver))
        .collect::<Result<_>>()?;
    let (u, grad) = rows.into_iter().flatten().unzip();
    let data = CauchyDataSet {
        grid: grid.clone(),
        nodes: domain.nodes.clone(),
        u,
        grad,
        noise: NoiseInfo::default(),
        scene_hash: String::new(),
    };
    data.validate()?;
    Ok(data)
}

/// (ε², E) with ε² = Σ_ω w_ω Σ_x ŵ_x (ω²|u|² + |∇u|²) and E = −ln max(ε, 10⁻³⁰⁰).
pub fn epsilon_norm(data: &CauchyDataSet) -> Result<(f64, f64)> {
    if data.is_empty() {
        return Err(Error::Config("dataset is empty".into()));
    }
    data.validate()?;
    let mut eps2 = 0.0;
    for (f, (w, q)) in data.grid.samples.iter().zip(&data.grid.weights).enumerate() {
        let (eu, eg) = data.boundary_energy(f);
        eps2 += q * (w * w * eu + eg);
    }
    let e = -eps2.sqrt().max(EPSILON_FLOOR).ln();
    Ok((eps2, e))
}

/// Pointwise sector bound (1/4)e^{|k₂|d}(k₁δ)^{−1/2}∫(|f₁| + |k||f₀|).
pub fn sector_field_bound(k: Complex64, diameter: f64, delta: f64, source: &SourcePair) -> f64 {
    let mass: f64 = source
        .grid
        .weights
        .iter()
        .zip(&source.values)
        .map(|(w, [f0, f1])| w * (f1.abs() + k.norm() * f0.abs()))
        .sum();
    0.25 * (k.im.abs() * diameter).exp() / (k.re * delta).sqrt() * mass
}
