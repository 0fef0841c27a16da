//! Frequency functionals I₁, I₂ and the explicit bounds built on them.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{check_wavenumber, sweep, FrequencyGrid, SeparableField};
use crate::geometry::{sobolev_norms, Domain, SobolevBudget, SourcePair};
use crate::quad::composite_gauss;

/// Gauss–Legendre order of the segment rule ω = ks.
pub const SEGMENT_ORDER: usize = 64;
/// Longest stretch of |k| one 64-point panel covers.
const SEGMENT_SPAN: f64 = 8.0;
/// Upper frequency of the empirical tail integral.
pub const TAIL_OMEGA_MAX: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionalKind {
    /// 2∫₀ᵏ ω²‖u‖² dω.
    #[serde(rename = "I1")]
    I1,
    /// 2∫₀ᵏ ω²‖∇u‖² dω.
    #[serde(rename = "I2")]
    I2,
    /// 2∫₀ᵏ ‖∇u‖² dω, the gradient part of the data norm ε².
    #[serde(rename = "I2_data")]
    I2DataNorm,
}

impl FunctionalKind {
    pub const ALL: [FunctionalKind; 3] = [FunctionalKind::I1, FunctionalKind::I2, FunctionalKind::I2DataNorm];

    pub fn label(self) -> &'static str {
        match self {
            FunctionalKind::I1 => "I1",
            FunctionalKind::I2 => "I2",
            FunctionalKind::I2DataNorm => "I2_data",
        }
    }
}

/// Boundary pairings Σŵ u·ũ and Σŵ ∇u·∇ũ at ω, with ũ(x, ω) = conj(u(x, conj ω)).
fn boundary_pairings(domain: &Domain, source: &SourcePair, omega: Complex64) -> Result<(Complex64, Complex64)> {
    let direct = SeparableField::new(source, omega)?;
    let mirror = if omega.im == 0.0 { None } else { Some(SeparableField::new(source, omega.conj())?) };
    let mut su = Complex64::new(0.0, 0.0);
    let mut sg = Complex64::new(0.0, 0.0);
    for nd in &domain.nodes {
        let (u, g) = direct.eval(nd.point)?;
        let (v, h) = match &mirror {
            Some(m) => m.eval(nd.point)?,
            None => (u, g),
        };
        su += u * v.conj() * nd.weight;
        sg += (g[0] * h[0].conj() + g[1] * h[1].conj()) * nd.weight;
    }
    Ok((su, sg))
}

/// I_kind(k) along ω = ks, s ∈ (0, 1); analytic in k on the sector.
pub fn boundary_functional(domain: &Domain, source: &SourcePair, k: Complex64, kind: FunctionalKind) -> Result<Complex64> {
    check_wavenumber(k)?;
    if source.is_zero() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let panels = ((k.norm() / SEGMENT_SPAN).ceil() as usize).max(1);
    let (s, w) = composite_gauss(0.0, 1.0, panels, SEGMENT_ORDER);
    let terms: Vec<Complex64> = s
        .par_iter()
        .zip(w.par_iter())
        .map(|(&s, &w)| {
            let omega = k * s;
            let (pu, pg) = boundary_pairings(domain, source, omega)?;
            Ok(match kind {
                FunctionalKind::I1 => omega * omega * pu * w,
                FunctionalKind::I2 => omega * omega * pg * w,
                FunctionalKind::I2DataNorm => pg * w,
            })
        })
        .collect::<Result<_>>()?;
    Ok(terms.iter().sum::<Complex64>() * k * 2.0)
}

/// One functional value against its explicit bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub label: String,
    pub k_re: f64,
    pub k_im: f64,
    pub computed: f64,
    pub bound: f64,
    pub margin: f64,
    pub perimeter: f64,
    pub diameter: f64,
    /// ‖f₀‖, ‖f₁‖ in the Sobolev order the bound uses.
    pub f0_norm: f64,
    pub f1_norm: f64,
    pub k_cap: Option<f64>,
    pub epsilon: Option<f64>,
    pub m: Option<f64>,
}

impl BoundReport {
    fn new(label: &str, k: Complex64, computed: f64, bound: f64, domain: &Domain, norms: (f64, f64)) -> Self {
        Self {
            label: label.to_string(),
            k_re: k.re,
            k_im: k.im,
            computed,
            bound,
            margin: bound - computed,
            perimeter: domain.perimeter,
            diameter: domain.diameter,
            f0_norm: norms.0,
            f1_norm: norms.1,
            k_cap: None,
            epsilon: None,
            m: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Right-hand side of the I₁/I₂ bound for given ‖f₀‖, ‖f₁‖ (order 0 for I₁, order 1 for the gradient kinds).
pub fn lemma31_rhs(k: Complex64, kind: FunctionalKind, perimeter: f64, diameter: f64, f0_norm: f64, f1_norm: f64) -> Result<f64> {
    if !(k.re > 0.0) {
        return Err(Error::Domain(format!("bound needs Re k > 0, got {k}")));
    }
    let m = k.norm();
    let (p1, p0) = match kind {
        FunctionalKind::I1 => (3, 5),
        FunctionalKind::I2 | FunctionalKind::I2DataNorm => (1, 3),
    };
    let inner = m.powi(p1) * f1_norm * f1_norm / 3.0 + m.powi(p0) * f0_norm * f0_norm / 5.0;
    Ok(0.5 * PI * perimeter * diameter * inner * (2.0 * diameter * k.im.abs()).exp() / k.re)
}

pub fn lemma31_bound(domain: &Domain, source: &SourcePair, k: Complex64, kind: FunctionalKind) -> Result<BoundReport> {
    if !(k.re > 0.0) {
        return Err(Error::Domain(format!("bound needs Re k > 0, got {k}")));
    }
    let order = if kind == FunctionalKind::I1 { 0 } else { 1 };
    let n0 = sobolev_norms(&source.f0, &source.grid, order)?[order];
    let n1 = sobolev_norms(&source.f1, &source.grid, order)?[order];
    let computed = boundary_functional(domain, source, k, kind)?.norm();
    let bound = lemma31_rhs(k, kind, domain.perimeter, domain.diameter, n0, n1)?;
    Ok(BoundReport::new(kind.label(), k, computed, bound, domain, (n0, n1)))
}

/// Lower bound for the harmonic measure of [0, K] in the sector minus [0, K].
pub fn harmonic_measure_lb(k: f64, k_cap: f64) -> f64 {
    if k < 2f64.powf(0.25) * k_cap {
        0.5
    } else {
        ((k / k_cap).powi(4) - 1.0).powf(-0.5) / PI
    }
}

/// e^{2(d+1)k} ε^{2μ(k)} M², the continuation bound with C = 1.
pub fn continuation_bound(k: f64, k_cap: f64, epsilon: f64, m: f64, diameter: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("continuation bound needs 0 < eps < 1, got {epsilon}")));
    }
    if !(m >= 1.0) {
        return Err(Error::Domain(format!("M must be at least 1, got {m}")));
    }
    if !(k > k_cap && k_cap > 0.0) {
        return Err(Error::Domain(format!("continuation needs k > K > 0, got k = {k}, K = {k_cap}")));
    }
    let mu = harmonic_measure_lb(k, k_cap);
    Ok((2.0 * (diameter + 1.0) * k).exp() * epsilon.powf(2.0 * mu) * m * m)
}

/// Smallest C with |I(k)| ≤ C·e^{2(d+1)k}ε^{2μ(k)}M² over the sampled k.
pub fn fitted_continuation_constant(
    domain: &Domain,
    source: &SourcePair,
    kind: FunctionalKind,
    k_cap: f64,
    epsilon: f64,
    m: f64,
    ks: &[f64],
) -> Result<f64> {
    ks.iter().try_fold(0.0f64, |acc, &k| {
        let value = boundary_functional(domain, source, Complex64::new(k, 0.0), kind)?.norm();
        Ok(acc.max(value / continuation_bound(k, k_cap, epsilon, m, domain.diameter)?))
    })
}

/// C_tail k⁻¹(‖f₀‖²₍₄₎ + ‖f₁‖²₍₃₎).
pub fn tail_bound(k: f64, budget: &SobolevBudget, c_tail: f64) -> Result<f64> {
    if !(k >= 1.0) {
        return Err(Error::Domain(format!("tail bound needs k >= 1, got {k}")));
    }
    let f0 = budget.f0.get(4).copied().unwrap_or(0.0);
    let f1 = budget.f1.get(3).copied().unwrap_or(0.0);
    Ok(c_tail * (f0 * f0 + f1 * f1) / k)
}

/// ∫_{k<|ω|<Ω} ω²‖u‖² dω from a forward sweep.
pub fn empirical_tail(domain: &Domain, source: &SourcePair, k: f64, omega_max: f64, points_per_unit: usize) -> Result<f64> {
    if !(k > 0.0 && k < omega_max) {
        return Err(Error::Domain(format!("tail needs 0 < k < omega_max, got k = {k}, omega_max = {omega_max}")));
    }
    let grid = FrequencyGrid::gauss_on(k, omega_max, points_per_unit)?;
    let data = sweep(domain, source, &grid)?;
    Ok(2.0
        * (0..grid.len())
            .map(|f| grid.weights[f] * grid.samples[f].powi(2) * data.boundary_energy(f).0)
            .sum::<f64>())
}

/// Smallest C_tail making tail_bound dominate the empirical tail at every sampled k.
pub fn calibrate_tail_constant(domain: &Domain, source: &SourcePair, budget: &SobolevBudget, ks: &[f64], points_per_unit: usize) -> Result<f64> {
    ks.iter().try_fold(0.0f64, |acc, &k| {
        let unit = tail_bound(k, budget, 1.0)?;
        let tail = empirical_tail(domain, source, k, TAIL_OMEGA_MAX, points_per_unit)?;
        Ok(if unit > 0.0 { acc.max(tail / unit) } else { acc })
    })
}

/// Truncation level k = K^{2/3}E^{1/4} when 2^{1/4}K^{1/3} < E^{1/4}, otherwise K.
pub fn choose_truncation(k_cap: f64, e: f64) -> Result<f64> {
    if !(k_cap > 1.0 && e > 0.0) {
        return Err(Error::Domain(format!("truncation needs K > 1 and E > 0, got K = {k_cap}, E = {e}")));
    }
    let e4 = e.powf(0.25);
    if 2f64.powf(0.25) * k_cap.cbrt() < e4 {
        Ok(k_cap.powf(2.0 / 3.0) * e4)
    } else {
        Ok(k_cap)
    }
}

/// ε² + M²/(1 + K^{2/3}E^{1/4}) with E = −ln ε.
pub fn stability_rhs(k_cap: f64, epsilon: f64, m: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("stability estimate needs 0 < eps < 1, got {epsilon}")));
    }
    if !(k_cap > 1.0 && m >= 1.0) {
        return Err(Error::Domain(format!("stability estimate needs K > 1 and M >= 1, got K = {k_cap}, M = {m}")));
    }
    let e = -epsilon.ln();
    Ok(epsilon * epsilon + m * m / (1.0 + k_cap.powf(2.0 / 3.0) * e.powf(0.25)))
}

/// Continued bound on |I₁| at the chosen truncation level (C = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncationBound {
    pub k: f64,
    /// M²e^{−t} with t = (2/π)K^{2/3}E^{1/2}(1 − π(d+1)E^{−1/4}), or 2ε² on the k = K branch.
    pub exponential: f64,
    /// 6M²/t³ from e^{−t} ≤ 6/t³; equals `exponential` on the k = K branch.
    pub algebraic: f64,
}

pub fn truncation_bound(k_cap: f64, e: f64, m: f64, diameter: f64) -> Result<TruncationBound> {
    let k = choose_truncation(k_cap, e)?;
    if k == k_cap {
        let v = 2.0 * (-2.0 * e).exp();
        return Ok(TruncationBound { k, exponential: v, algebraic: v });
    }
    let gap = 1.0 - PI * (diameter + 1.0) * e.powf(-0.25);
    if !(gap > 0.5) {
        return Err(Error::Domain(format!("needs pi(d+1)E^(-1/4) < 1/2, got {}", 1.0 - gap)));
    }
    let t = 2.0 / PI * k_cap.powf(2.0 / 3.0) * e.sqrt() * gap;
    Ok(TruncationBound { k, exponential: m * m * (-t).exp(), algebraic: 6.0 * m * m / t.powi(3) })
}
