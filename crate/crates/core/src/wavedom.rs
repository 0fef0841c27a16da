//! Time-domain solution by the 2D Poisson formula and its temporal Fourier transform.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forward::{sweep, FrequencyGrid, DEFAULT_POINTS_PER_UNIT};
use crate::geometry::{dist, Bump, Domain, Point, SourcePair};
use crate::quad::{simpson_weights, GaussLegendre};

const I: Complex64 = Complex64::new(0.0, 1.0);
const INV_2PI: f64 = 0.5 / PI;
const FAR_FIELD_TERMS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WaveEvalConfig {
    pub t_max: f64,
    pub dt: f64,
    /// Gauss–Legendre order in the substituted radial angle φ.
    pub phi_order: usize,
    /// Gauss–Legendre order per angular window.
    pub theta_order: usize,
}

impl Default for WaveEvalConfig {
    fn default() -> Self {
        Self { t_max: 60.0, dt: 0.02, phi_order: 32, theta_order: 48 }
    }
}

impl WaveEvalConfig {
    pub fn check_orders(&self) -> Result<()> {
        if self.phi_order < 2 || self.theta_order < 2 {
            return Err(Error::Config("cone quadrature orders must be at least 2".into()));
        }
        if !(self.dt > 0.0 && self.t_max > self.dt) {
            return Err(Error::Config(format!("need 0 < dt < t_max, got dt = {} and t_max = {}", self.dt, self.t_max)));
        }
        Ok(())
    }

    /// T_max > d₁ + sup|x| + 1 over the boundary of `domain`.
    pub fn validate(&self, domain: &Domain) -> Result<()> {
        self.check_orders()?;
        let need = 2.0 * domain.origin_radius + 1.0;
        if self.t_max <= need {
            return Err(Error::Config(format!("t_max = {} must exceed {need}", self.t_max)));
        }
        Ok(())
    }

    /// Step used for wave number k: min(dt, 0.1/k).
    pub fn step_for(&self, k: f64) -> f64 {
        self.dt.min(0.1 / k)
    }
}

/// U, ∂ₜU and ∇ₓU at one space-time point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct WaveSample {
    pub u: f64,
    pub u_t: f64,
    pub grad: [f64; 2],
}

#[derive(Debug, Clone, Copy, Default)]
struct ConeTerms {
    g0: f64,
    g1: f64,
    g2: f64,
    gr0: [f64; 2],
    gr1: [f64; 2],
}

impl ConeTerms {
    fn add(&mut self, o: &ConeTerms) {
        self.g0 += o.g0;
        self.g1 += o.g1;
        self.g2 += o.g2;
        for i in 0..2 {
            self.gr0[i] += o.gr0[i];
            self.gr1[i] += o.gr1[i];
        }
    }
}

/// Cone integrals with the substitution |x − y| = t sin φ.
pub struct WaveEvaluator<'a> {
    source: &'a SourcePair,
    phi: GaussLegendre,
    theta: GaussLegendre,
}

impl<'a> WaveEvaluator<'a> {
    pub fn new(source: &'a SourcePair, cfg: &WaveEvalConfig) -> Result<Self> {
        cfg.check_orders()?;
        Ok(Self { source, phi: GaussLegendre::new(cfg.phi_order), theta: GaussLegendre::new(cfg.theta_order) })
    }

    /// Angular windows on which the φ-range is smooth in θ.
    fn windows(d: f64, r: f64, t: f64, theta_c: f64) -> Vec<(f64, f64)> {
        let gamma = if d > 0.0 { (t * t + d * d - r * r) / (2.0 * t * d) } else { f64::NAN };
        let beta = if gamma.abs() < 1.0 { Some(gamma.acos()) } else { None };
        if d >= r {
            let alpha = (r / d).min(1.0).asin();
            match beta {
                Some(b) if b < alpha => vec![
                    (theta_c - alpha, theta_c - b),
                    (theta_c - b, theta_c + b),
                    (theta_c + b, theta_c + alpha),
                ],
                _ => vec![(theta_c - alpha, theta_c + alpha)],
            }
        } else {
            match beta {
                Some(b) => vec![(theta_c - b, theta_c + b), (theta_c + b, theta_c + 2.0 * PI - b)],
                None => vec![(theta_c - PI, theta_c + PI)],
            }
        }
    }

    fn bump_terms(&self, x: Point, t: f64, b: &Bump) -> ConeTerms {
        let mut out = ConeTerms::default();
        let dx = [b.center[0] - x[0], b.center[1] - x[1]];
        let d = dx[0].hypot(dx[1]);
        let r = b.radius;
        if t <= d - r || b.amplitude == 0.0 {
            return out;
        }
        let theta_c = dx[1].atan2(dx[0]);
        for (lo, hi) in Self::windows(d, r, t, theta_c) {
            let mid = 0.5 * (lo + hi);
            let half = 0.5 * (hi - lo);
            for (xi, wx) in self.theta.nodes.iter().zip(&self.theta.weights) {
                // sine map clusters nodes at window ends where the φ-range has square-root behaviour
                let psi = FRAC_PI_2 * xi;
                let th = mid + half * psi.sin();
                let wth = wx * FRAC_PI_2 * half * psi.cos();
                let (sn, cs) = th.sin_cos();
                let p = cs * dx[0] + sn * dx[1];
                let disc = r * r - d * d + p * p;
                if disc <= 0.0 {
                    continue;
                }
                let s = disc.sqrt();
                let ra = (p - s).max(0.0);
                let rb = p + s;
                if rb <= 0.0 || ra >= t {
                    continue;
                }
                let pa = (ra / t).asin();
                let pb = if rb >= t { FRAC_PI_2 } else { (rb / t).asin() };
                let ph = 0.5 * (pb - pa);
                let pm = 0.5 * (pa + pb);
                for (z, wz) in self.phi.nodes.iter().zip(&self.phi.weights) {
                    let sp = (pm + ph * z).sin();
                    let w = wth * wz * ph;
                    let y = [x[0] + t * sp * cs, x[1] + t * sp * sn];
                    let j = b.jet2(y);
                    if j.value == 0.0 && j.grad == [0.0; 2] {
                        continue;
                    }
                    let de = j.grad[0] * cs + j.grad[1] * sn;
                    let he = [j.hess[0][0] * cs + j.hess[0][1] * sn, j.hess[1][0] * cs + j.hess[1][1] * sn];
                    let ee = he[0] * cs + he[1] * sn;
                    let w1 = w * sp;
                    let w2 = w1 * sp;
                    out.g0 += w1 * j.value;
                    out.g1 += w2 * de;
                    out.g2 += w2 * sp * ee;
                    out.gr0[0] += w1 * j.grad[0];
                    out.gr0[1] += w1 * j.grad[1];
                    out.gr1[0] += w2 * he[0];
                    out.gr1[1] += w2 * he[1];
                }
            }
        }
        out
    }

    fn channel_terms(&self, x: Point, t: f64, bumps: &[Bump]) -> ConeTerms {
        let mut acc = ConeTerms::default();
        for b in bumps {
            acc.add(&self.bump_terms(x, t, b));
        }
        acc
    }

    /// ∬_{|x−y|<|t|} f(y)/√(t² − |x − y|²) dy for the f₀ (`channel` 0) or f₁ field.
    pub fn cone_integral(&self, x: Point, t: f64, channel: usize) -> f64 {
        let bumps = if channel == 0 { &self.source.f0.bumps } else { &self.source.f1.bumps };
        let t = t.abs();
        if t == 0.0 {
            return 0.0;
        }
        t * self.channel_terms(x, t, bumps).g0
    }

    pub fn sample(&self, x: Point, t: f64) -> WaveSample {
        if t <= 0.0 {
            if t < 0.0 {
                return WaveSample::default();
            }
            // U(·, 0) = −f₀, ∂ₜU(·, 0) = f₁
            let j0 = self.source.f0.jet2(x);
            return WaveSample { u: -self.source.f0.value(x), u_t: self.source.f1.value(x), grad: [-j0.grad[0], -j0.grad[1]] };
        }
        let a = self.channel_terms(x, t, &self.source.f1.bumps);
        let b = self.channel_terms(x, t, &self.source.f0.bumps);
        let v1 = t * a.g0;
        let v1_t = a.g0 + t * a.g1;
        let v0_t = b.g0 + t * b.g1;
        let v0_tt = 2.0 * b.g1 + t * b.g2;
        WaveSample {
            u: INV_2PI * (v1 - v0_t),
            u_t: INV_2PI * (v1_t - v0_tt),
            grad: [
                INV_2PI * (t * a.gr0[0] - (b.gr0[0] + t * b.gr1[0])),
                INV_2PI * (t * a.gr0[1] - (b.gr0[1] + t * b.gr1[1])),
            ],
        }
    }
}

/// U(x, t) with the default cone quadrature.
pub fn wave_solution(x: Point, t: f64, source: &SourcePair) -> f64 {
    WaveEvaluator::new(source, &WaveEvalConfig::default()).expect("default orders are valid").sample(x, t).u
}

pub fn wave_sample(x: Point, t: f64, source: &SourcePair, cfg: &WaveEvalConfig) -> Result<WaveSample> {
    Ok(WaveEvaluator::new(source, cfg)?.sample(x, t))
}

/// Large-t expansion U = (1/2π)Σ cₙ[M¹ₙ t^{−2n−1} + (2n+1)M⁰ₙ t^{−2n−2}], Mₙ = ∫f|x − y|^{2n}.
#[derive(Debug, Clone)]
pub struct FarField {
    /// Valid for t above this radius.
    pub reach: f64,
    m0: Vec<f64>,
    m1: Vec<f64>,
    c: Vec<f64>,
}

impl FarField {
    pub fn new(x: Point, source: &SourcePair) -> Self {
        let reach = source.support().map(|d| dist(x, d.center) + d.radius).fold(0.0, f64::max);
        let mut m0 = vec![0.0; FAR_FIELD_TERMS];
        let mut m1 = vec![0.0; FAR_FIELD_TERMS];
        for ((y, w), [f0, f1]) in source.grid.points.iter().zip(&source.grid.weights).zip(&source.values) {
            let r2 = (x[0] - y[0]).powi(2) + (x[1] - y[1]).powi(2);
            let mut p = *w;
            for n in 0..FAR_FIELD_TERMS {
                m0[n] += p * f0;
                m1[n] += p * f1;
                p *= r2;
            }
        }
        let mut c = vec![1.0; FAR_FIELD_TERMS];
        for n in 1..FAR_FIELD_TERMS {
            c[n] = c[n - 1] * (2 * n - 1) as f64 / (2 * n) as f64;
        }
        Self { reach, m0, m1, c }
    }

    /// Coefficients dₚ of U = Σ dₚ t^{−p}, index p.
    fn u_coeffs(&self) -> Vec<f64> {
        let mut d = vec![0.0; 2 * FAR_FIELD_TERMS + 2];
        for n in 0..FAR_FIELD_TERMS {
            d[2 * n + 1] += INV_2PI * self.c[n] * self.m1[n];
            d[2 * n + 2] += INV_2PI * self.c[n] * (2 * n + 1) as f64 * self.m0[n];
        }
        d
    }

    /// Coefficients of ∂ₜU.
    fn ut_coeffs(&self) -> Vec<f64> {
        let d = self.u_coeffs();
        let mut e = vec![0.0; d.len() + 1];
        for (p, v) in d.iter().enumerate() {
            e[p + 1] = -(p as f64) * v;
        }
        e
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.u_coeffs().iter().enumerate().skip(1).map(|(p, d)| d * t.powi(-(p as i32))).sum()
    }

    /// ∫_T^∞ U e^{ikt} dt with the remainder bound of the asymptotic series.
    pub fn fourier_tail(&self, k: f64, t0: f64) -> Result<(Complex64, f64)> {
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for (p, d) in self.u_coeffs().iter().enumerate().skip(1) {
            if *d == 0.0 {
                continue;
            }
            let (v, e) = power_fourier_tail(p as f64, k, t0)?;
            total += v * *d;
            err += e * d.abs();
        }
        // first neglected moment term
        let last = FAR_FIELD_TERMS - 1;
        err += INV_2PI * self.c[last] * (self.m1[last].abs() + self.m0[last].abs() * (2 * last + 1) as f64)
            * t0.powi(-(2 * last as i32 + 1))
            / k;
        Ok((total, err))
    }

    /// ∫_T^∞ (∂ₜU)² dt.
    pub fn ut_energy_tail(&self, t0: f64) -> f64 {
        let e = self.ut_coeffs();
        let mut s = 0.0;
        for (p, a) in e.iter().enumerate() {
            for (q, b) in e.iter().enumerate() {
                if *a != 0.0 && *b != 0.0 {
                    let m = (p + q) as f64;
                    s += a * b * t0.powf(1.0 - m) / (m - 1.0);
                }
            }
        }
        s
    }
}

/// ∫_T^∞ t^{−p} e^{ikt} dt by integration by parts, truncated at the smallest term.
pub fn power_fourier_tail(p: f64, k: f64, t0: f64) -> Result<(Complex64, f64)> {
    let ik = I * k;
    let mut term = -(I * k * t0).exp() * t0.powf(-p) / ik;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    for j in 0..200 {
        let m = term.norm();
        if m >= prev {
            return Ok((sum, prev));
        }
        sum += term;
        prev = m;
        if m <= 1e-17 * sum.norm() {
            return Ok((sum, m));
        }
        term *= (p + j as f64) / (t0 * ik);
    }
    if k * t0 < p {
        return Err(Error::Accuracy(format!("k·T = {} too small for the asymptotic tail", k * t0)));
    }
    Ok((sum, prev))
}

/// Uniformly sampled trace U(x, tᵢ), tᵢ = i·T/n.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveTrace {
    pub x: Point,
    pub t_max: f64,
    pub u: Vec<f64>,
    pub u_t: Vec<f64>,
}

impl WaveTrace {
    pub fn sample(x: Point, source: &SourcePair, cfg: &WaveEvalConfig, dt: f64) -> Result<Self> {
        let eval = WaveEvaluator::new(source, cfg)?;
        let mut n = (cfg.t_max / dt).ceil() as usize;
        n += n % 2;
        let h = cfg.t_max / n as f64;
        let (u, u_t) = (0..=n)
            .into_par_iter()
            .map(|i| {
                let s = eval.sample(x, i as f64 * h);
                (s.u, s.u_t)
            })
            .unzip();
        Ok(Self { x, t_max: cfg.t_max, u, u_t })
    }

    pub fn intervals(&self) -> usize {
        self.u.len() - 1
    }

    pub fn step(&self) -> f64 {
        self.t_max / self.intervals() as f64
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        let h = self.step();
        (0..self.u.len()).map(move |i| i as f64 * h)
    }

    /// Simpson sum of U e^{ikt} over samples [from, to] (even count of intervals).
    fn simpson(&self, k: f64, from: usize, to: usize) -> Complex64 {
        let h = self.step();
        let w = simpson_weights(to - from, h);
        (from..=to).zip(&w).map(|(i, w)| (I * k * (i as f64 * h)).exp() * (w * self.u[i])).sum()
    }

    pub fn fourier(&self, k: f64, far: &FarField) -> Result<FourierEstimate> {
        let n = self.intervals();
        let truncated = self.simpson(k, 0, n);
        let (far_tail, series_err) = far.fourier_tail(k, self.t_max)?;
        // check the analytic far field against the samples on [T/2, T]
        let mut half = n / 2;
        half -= half % 2;
        let h = self.step();
        let mut window_err = f64::INFINITY;
        let mut envelope = f64::INFINITY;
        if half as f64 * h > far.reach {
            let numeric = self.simpson(k, half, n);
            let (a, _) = far.fourier_tail(k, half as f64 * h)?;
            let analytic = a - far_tail;
            window_err = (numeric - analytic).norm();
            envelope = (half..=n)
                .map(|i| {
                    let t = i as f64 * h;
                    (self.u[i] - far.eval(t)).abs() * t * t
                })
                .fold(0.0, f64::max)
                / self.t_max;
        }
        let value = truncated + far_tail;
        let tail_bound = 2.0 * window_err + envelope + series_err;
        Ok(FourierEstimate { value, truncated, far_tail, tail_bound })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierEstimate {
    pub value: Complex64,
    /// ∫₀^T U e^{ikt} dt by Simpson.
    pub truncated: Complex64,
    /// Analytic ∫_T^∞ of the far-field expansion.
    pub far_tail: Complex64,
    pub tail_bound: f64,
}

/// u(x, k) = ∫₀^∞ U(x, t)e^{ikt} dt.
pub fn temporal_fourier(x: Point, k: f64, source: &SourcePair, cfg: &WaveEvalConfig) -> Result<FourierEstimate> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("temporal Fourier transform needs k > 0, got {k}")));
    }
    let trace = WaveTrace::sample(x, source, cfg, cfg.step_for(k))?;
    let far = FarField::new(x, source);
    fourier_checked(&trace, k, &far)
}

/// Fourier estimate from an existing trace, rejecting estimates whose tail bound exceeds 10⁻³ of the value.
pub fn fourier_checked(trace: &WaveTrace, k: f64, far: &FarField) -> Result<FourierEstimate> {
    if trace.t_max <= far.reach + 1.0 {
        return Err(Error::Config(format!("t_max = {} must exceed {}", trace.t_max, far.reach + 1.0)));
    }
    if trace.step() * k > 0.5 {
        return Err(Error::Config(format!("time step {} does not resolve k = {k}", trace.step())));
    }
    let est = trace.fourier(k, far)?;
    if est.tail_bound > 1e-3 * est.value.norm() {
        return Err(Error::Accuracy(format!(
            "tail bound {:.3e} exceeds 1e-3 of |u| = {:.3e}; increase t_max",
            est.tail_bound,
            est.value.norm()
        )));
    }
    Ok(est)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParsevalReport {
    /// 2π∫₀^∞‖∂ₜU‖² dt (sampled part plus far-field tail).
    pub time_side: f64,
    pub time_tail: f64,
    /// ∫_{|ω|<Ω} ω²‖u‖² dω.
    pub freq_side: f64,
    /// Same integral over |ω| > Ω, summed by octaves until negligible.
    pub freq_tail: f64,
    pub omega_max: f64,
    pub discrepancy: f64,
}

/// Compares the boundary energy of ∂ₜU with the frequency-side energy of u.
pub fn parseval_check(domain: &Domain, source: &SourcePair, grid: &FrequencyGrid, cfg: &WaveEvalConfig) -> Result<ParsevalReport> {
    cfg.validate(domain)?;
    let freq_side = freq_energy(domain, source, grid)?;
    let mut freq_tail = 0.0;
    let mut lo = grid.k_max;
    for _ in 0..PARSEVAL_TAIL_OCTAVES {
        let panel = FrequencyGrid::gauss_on(lo, 2.0 * lo, DEFAULT_POINTS_PER_UNIT)?;
        let piece = freq_energy(domain, source, &panel)?;
        freq_tail += piece;
        lo *= 2.0;
        if piece <= PARSEVAL_TAIL_TOL * (freq_side + freq_tail) {
            break;
        }
    }
    let eval = WaveEvaluator::new(source, cfg)?;
    let mut n = (cfg.t_max / cfg.dt).ceil() as usize;
    n += n % 2;
    let h = cfg.t_max / n as f64;
    let sw = simpson_weights(n, h);
    let per_node: Vec<(f64, f64)> = domain
        .nodes
        .par_iter()
        .map(|nd| {
            let e: f64 = (0..=n).map(|i| sw[i] * eval.sample(nd.point, i as f64 * h).u_t.powi(2)).sum();
            let tail = FarField::new(nd.point, source).ut_energy_tail(cfg.t_max);
            (nd.weight * e, nd.weight * tail)
        })
        .collect();
    let sampled: f64 = per_node.iter().map(|p| p.0).sum();
    let tail: f64 = per_node.iter().map(|p| p.1).sum();
    let time_side = 2.0 * PI * (sampled + tail);
    let total = freq_side + freq_tail;
    let discrepancy = if time_side == 0.0 && total == 0.0 { 0.0 } else { (time_side - total).abs() / time_side };
    Ok(ParsevalReport { time_side, time_tail: 2.0 * PI * tail, freq_side, freq_tail, omega_max: grid.k_max, discrepancy })
}

const PARSEVAL_TAIL_OCTAVES: usize = 6;
const PARSEVAL_TAIL_TOL: f64 = 1e-12;

/// 2∑ w ω² ‖u(·, ω)‖² over the grid.
fn freq_energy(domain: &Domain, source: &SourcePair, grid: &FrequencyGrid) -> Result<f64> {
    let data = sweep(domain, source, grid)?;
    Ok(2.0
        * (0..grid.len())
            .map(|f| {
                let w = grid.samples[f];
                grid.weights[f] * w * w * data.boundary_energy(f).0
            })
            .sum::<f64>())
}
