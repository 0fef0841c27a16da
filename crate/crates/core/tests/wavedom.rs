use helmstab::forward::*;
use helmstab::geometry::*;
use helmstab::wavedom::*;
use helmstab::Error;
use num_complex::Complex64;

fn centered_f1(r: f64, a: f64) -> SourcePair {
    SourcePair::new(SourceField::zero(), SourceField::new(vec![make_bump([0.0, 0.0], r, a).unwrap()])).unwrap()
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// (1/2π)∬_{ρ<t} A(1 − ρ²/r²)⁵/√(t² − ρ²) at the bump center, via w = √(t² − ρ²) and the midpoint rule.
fn centered_brute_force(r: f64, a: f64, t: f64, n: usize) -> f64 {
    let lo = if t > r { (t * t - r * r).sqrt() } else { 0.0 };
    let h = (t - lo) / n as f64;
    (0..n)
        .map(|i| {
            let w = lo + (i as f64 + 0.5) * h;
            a * (1.0 - (t * t - w * w) / (r * r)).powi(5)
        })
        .sum::<f64>()
        * h
}

/// Same value for t < r by ∫₀^{π/2} sin^{2n+1} = (2n)!!/(2n+1)!!.
fn centered_series(r: f64, a: f64, t: f64) -> f64 {
    let mut ratio = 1.0;
    let mut acc = 0.0;
    for n in 0..=5u64 {
        if n > 0 {
            ratio *= (2 * n) as f64 / (2 * n + 1) as f64;
        }
        acc += binom(5, n) * (-1.0f64 / (r * r)).powi(n as i32) * t.powi(2 * n as i32 + 1) * ratio;
    }
    a * acc
}

#[test]
fn centered_bump_matches_oracles() {
    let (r, a) = (0.3, 1.0);
    let src = centered_f1(r, a);
    let u = wave_solution([0.0, 0.0], 0.1, &src);
    let brute = centered_brute_force(r, a, 0.1, 1_000_000);
    let series = centered_series(r, a, 0.1);
    assert!((brute - series).abs() < 1e-12);
    assert!((u - brute).abs() < 1e-6, "{u} vs {brute}");
    // wavefront past the support edge
    let u = wave_solution([0.0, 0.0], 0.5, &src);
    let brute = centered_brute_force(r, a, 0.5, 1_000_000);
    assert!((u - brute).abs() < 1e-6, "{u} vs {brute}");
}

#[test]
fn finite_propagation_speed() {
    let scene = Scene::reference();
    let eval = WaveEvaluator::new(&scene.source, &WaveEvalConfig::default()).unwrap();
    let disks: Vec<Disk> = scene.source.f0.disks().chain(scene.source.f1.disks()).collect();
    for x in scene.domain.points().step_by(7) {
        let reach = disks.iter().map(|d| dist(x, d.center) - d.radius).fold(f64::INFINITY, f64::min);
        for frac in [0.1, 0.5, 0.9, 0.999] {
            let s = eval.sample(x, frac * reach);
            assert_eq!(s.u, 0.0);
            assert_eq!(s.u_t, 0.0);
            assert_eq!(s.grad, [0.0, 0.0]);
        }
        assert_ne!(eval.sample(x, reach + 0.05).u, 0.0);
    }
    // t < |x| − d₁
    let far = [3.0, 1.0];
    let d1 = scene.domain.origin_radius;
    assert_eq!(wave_solution(far, (far[0] * far[0] + far[1] * far[1]).sqrt() - d1 - 0.01, &scene.source), 0.0);
    assert_eq!(eval.sample(far, -1.0), WaveSample::default());
}

#[test]
fn initial_values() {
    let scene = Scene::reference();
    let f0_only = SourcePair::new(scene.source.f0.clone(), SourceField::zero()).unwrap();
    let eval = WaveEvaluator::new(&f0_only, &WaveEvalConfig::default()).unwrap();
    for x in [[0.3, 0.1], [0.4, 0.2], [0.2, -0.05]] {
        let f = scene.source.f0.value(x);
        let u = eval.sample(x, 1e-3).u;
        assert!((u + f).abs() < 1e-3 * f.abs(), "{u} vs {}", -f);
        assert_eq!(eval.sample(x, 0.0).u, -f);
    }
}

#[test]
fn f1_cone_term_is_even_in_time() {
    let scene = Scene::reference();
    let eval = WaveEvaluator::new(&scene.source, &WaveEvalConfig::default()).unwrap();
    for x in scene.domain.points().step_by(16) {
        for t in [0.7, 1.3, 2.9] {
            let a = eval.cone_integral(x, t, 1);
            assert_eq!(a, eval.cone_integral(x, -t, 1));
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let scene = Scene::reference();
    let eval = WaveEvaluator::new(&scene.source, &WaveEvalConfig::default()).unwrap();
    let h = 1e-5;
    for (x, t) in [([1.0, 0.0], 1.2), ([0.0, -1.0], 1.5), ([-0.6, 0.8], 2.4), ([0.2, 0.1], 0.3)] {
        let s = eval.sample(x, t);
        let ut = (eval.sample(x, t + h).u - eval.sample(x, t - h).u) / (2.0 * h);
        let gx = (eval.sample([x[0] + h, x[1]], t).u - eval.sample([x[0] - h, x[1]], t).u) / (2.0 * h);
        let gy = (eval.sample([x[0], x[1] + h], t).u - eval.sample([x[0], x[1] - h], t).u) / (2.0 * h);
        let scale = s.u_t.abs().max(s.grad[0].abs()).max(s.grad[1].abs());
        assert!((ut - s.u_t).abs() < 1e-5 * scale, "x={x:?} t={t}: {ut} vs {}", s.u_t);
        assert!((gx - s.grad[0]).abs() < 1e-5 * scale);
        assert!((gy - s.grad[1]).abs() < 1e-5 * scale);
    }
}

#[test]
fn fourier_link_matches_forward_field() {
    let scene = Scene::reference();
    let cfg = WaveEvalConfig::default();
    for (j, k) in [(0, 5.0), (45, 1.0), (90, 2.0)] {
        let x = scene.domain.nodes[j].point;
        let est = temporal_fourier(x, k, &scene.source, &cfg).unwrap();
        let u = field(x, Complex64::new(k, 0.0), &scene.source).unwrap();
        let rel = (est.value - u).norm() / u.norm();
        assert!(rel < 1e-3, "node {j} k={k}: {rel:e}");
        assert!(est.tail_bound < 1e-3 * u.norm());
    }
}

#[test]
fn doubling_horizon_stays_within_tail_bound() {
    let scene = Scene::reference();
    let x = scene.domain.nodes[10].point;
    let cfg = WaveEvalConfig::default();
    let long = WaveEvalConfig { t_max: 2.0 * cfg.t_max, ..cfg };
    let a = temporal_fourier(x, 5.0, &scene.source, &cfg).unwrap();
    let b = temporal_fourier(x, 5.0, &scene.source, &long).unwrap();
    assert!((a.value - b.value).norm() <= a.tail_bound, "{} vs {}", (a.value - b.value).norm(), a.tail_bound);
}

#[test]
fn zero_source_is_silent() {
    let scene = Scene::reference();
    let zero = SourcePair::zero();
    let x = scene.domain.nodes[0].point;
    let cfg = WaveEvalConfig::default();
    assert_eq!(wave_solution(x, 2.0, &zero), 0.0);
    let est = temporal_fourier(x, 5.0, &zero, &cfg).unwrap();
    assert_eq!(est.value, Complex64::new(0.0, 0.0));
    let d = make_disk(1.0, 16).unwrap();
    let grid = FrequencyGrid::gauss(4.0, 8).unwrap();
    let r = parseval_check(&d, &zero, &grid, &cfg).unwrap();
    assert_eq!((r.time_side, r.freq_side, r.discrepancy), (0.0, 0.0, 0.0));
}

#[test]
fn bad_horizons_are_rejected() {
    let scene = Scene::reference();
    let x = scene.domain.nodes[0].point;
    let short = WaveEvalConfig { t_max: 1.5, ..Default::default() };
    assert!(matches!(temporal_fourier(x, 5.0, &scene.source, &short), Err(Error::Config(_))));
    assert!(matches!(short.validate(&scene.domain), Err(Error::Config(_))));
    assert!(temporal_fourier(x, -1.0, &scene.source, &WaveEvalConfig::default()).is_err());
    let far = FarField::new(x, &scene.source);
    let cfg = WaveEvalConfig { t_max: far.reach + 1.2, ..Default::default() };
    assert!(matches!(temporal_fourier(x, 0.5, &scene.source, &cfg), Err(Error::Accuracy(_))));
    let coarse = WaveEvalConfig { dt: 0.2, ..Default::default() };
    let trace = WaveTrace::sample(x, &scene.source, &coarse, coarse.dt).unwrap();
    assert!(matches!(fourier_checked(&trace, 5.0, &far), Err(Error::Config(_))));
    assert!(WaveEvaluator::new(&scene.source, &WaveEvalConfig { phi_order: 0, ..Default::default() }).is_err());
}

/// max over t of (‖U‖₍₁₎ + ‖∂ₜU‖₍₀₎)/((1 + t)(‖f₀‖₍₁₎ + ‖f₁‖₍₀₎)) on an n × n midpoint grid of [−L, L]².
fn energy_constant(source: &SourcePair, n: usize) -> f64 {
    let eval = WaveEvaluator::new(source, &WaveEvalConfig::default()).unwrap();
    let half = 2.5;
    let h = 2.0 * half / n as f64;
    let pts: Vec<Point> = (0..n * n)
        .map(|i| [-half + ((i % n) as f64 + 0.5) * h, -half + ((i / n) as f64 + 0.5) * h])
        .collect();
    let n0 = sobolev_norms(&source.f0, &source.grid, 1).unwrap()[1];
    let n1 = sobolev_norms(&source.f1, &source.grid, 0).unwrap()[0];
    [0.5, 1.0, 1.5]
        .iter()
        .map(|&t| {
            let (mut h1, mut l2) = (0.0, 0.0);
            for &x in &pts {
                let s = eval.sample(x, t);
                h1 += (s.u * s.u + s.grad[0] * s.grad[0] + s.grad[1] * s.grad[1]) * h * h;
                l2 += s.u_t * s.u_t * h * h;
            }
            (h1.sqrt() + l2.sqrt()) / ((1.0 + t) * (n0 + n1))
        })
        .fold(0.0, f64::max)
}

#[test]
fn energy_growth_constant_is_stable() {
    let src = reference_source();
    let coarse = energy_constant(&src, 40);
    let fine = energy_constant(&src, 80);
    assert!(coarse.is_finite() && coarse > 0.0);
    assert!((coarse - fine).abs() < 0.02 * fine, "{coarse} vs {fine}");
}
