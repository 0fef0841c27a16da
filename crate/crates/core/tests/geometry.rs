use helmstab::geometry::*;
use helmstab::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn brute_force_square_integral(center: Point, half: f64, n: usize, f: impl Fn(Point) -> f64) -> f64 {
    let h = 2.0 * half / n as f64;
    let mut s = 0.0;
    for i in 0..n {
        let x = center[0] - half + (i as f64 + 0.5) * h;
        for j in 0..n {
            let y = center[1] - half + (j as f64 + 0.5) * h;
            s += f([x, y]);
        }
    }
    s * h * h
}

#[test]
#[allow(clippy::approx_constant)]
fn disk_examples() {
    let d = make_disk(1.0, 128).unwrap();
    assert!((d.perimeter - 6.2831853).abs() < 1e-7);
    let s: f64 = d.nodes.iter().map(|n| n.weight).sum();
    assert!((s - 2.0 * PI).abs() < 1e-8 * 2.0 * PI);
    assert_eq!(d.diameter, 2.0);
    assert_eq!(d.origin_radius, 1.0);

    let d2 = make_disk(2.0, 64).unwrap();
    for n in &d2.nodes {
        let r = n.point[0].hypot(n.point[1]);
        assert!((n.normal[0] - n.point[0] / r).abs() < 1e-12);
        assert!((n.normal[1] - n.point[1] / r).abs() < 1e-12);
        assert!((n.normal[0].hypot(n.normal[1]) - 1.0).abs() < 1e-12);
    }
    for a in &d2.nodes {
        for b in &d2.nodes {
            assert!(dist(a.point, b.point) <= d2.diameter + 1e-12);
        }
    }
}

#[test]
fn disk_rejects_bad_input() {
    assert!(matches!(make_disk(0.0, 64), Err(Error::Config(_))));
    assert!(matches!(make_disk(-1.0, 64), Err(Error::Config(_))));
    assert!(matches!(make_disk(1.0, 8), Err(Error::Config(_))));
}

#[test]
fn polygon_examples() {
    let sq = make_polygon(&[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]], 32).unwrap();
    // each corner trades 2ρ of edge for a quarter arc
    let rho = 1e-2;
    let corner = (2.0 - PI / 2.0) * rho;
    assert!(corner < 1e-2);
    assert!((sq.perimeter - (4.0 - 4.0 * corner)).abs() < 1e-12);
    assert!((sq.diameter - 2f64.sqrt()).abs() < 1e-2);
    let s: f64 = sq.nodes.iter().map(|n| n.weight).sum();
    assert!((s - sq.perimeter).abs() < 1e-8 * sq.perimeter);

    let tri = make_polygon(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]], 16).unwrap();
    let cut = |beta: f64| rho * (2.0 * (beta / 2.0).tan() - beta);
    let expected = 2.0 + 2f64.sqrt() - 2.0 * cut(3.0 * PI / 4.0) - cut(PI / 2.0);
    assert!((tri.perimeter - expected).abs() < 1e-12);
    assert!((tri.perimeter - (2.0 + 2f64.sqrt())).abs() < 6e-2);
    assert!(tri.contains([0.2, 0.2]));
    assert!(!tri.contains([0.6, 0.6]));
}

#[test]
fn polygon_rejects_bad_input() {
    let bowtie = [[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]];
    assert!(matches!(make_polygon(&bowtie, 8), Err(Error::Config(_))));
    let clockwise = [[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]];
    assert!(matches!(make_polygon(&clockwise, 8), Err(Error::Config(_))));
    assert!(matches!(make_polygon(&[[0.0, 0.0], [1.0, 0.0]], 8), Err(Error::Config(_))));
}

#[test]
fn bump_examples() {
    let b = make_bump([0.2, -0.1], 0.3, 1.5).unwrap();
    assert_eq!(b.value([0.2, -0.1]), 1.5);
    assert_eq!(b.value([0.5, -0.1]), 0.0);
    assert_eq!(b.value([0.6, 0.3]), 0.0);
    assert_eq!(b.partial([0.2, -0.1], 1, 0), 0.0);
    assert!(make_bump([0.0, 0.0], 0.0, 1.0).is_err());
}

#[test]
fn bump_partials_vanish_on_support_ring() {
    let b = make_bump([0.1, 0.2], 0.3, 1.0).unwrap();
    for k in 0..64 {
        let th = 2.0 * PI * k as f64 / 64.0;
        let r = 0.3 * (1.0 - 1e-12);
        let p = [0.1 + r * th.cos(), 0.2 + r * th.sin()];
        let all = SourceField::new(vec![b]).partials(p, 4);
        for v in all {
            assert!(v.abs() < 1e-5, "partial {v} at ring angle {th}");
        }
        let outside = [0.1 + 0.3 * (1.0 + 1e-9) * th.cos(), 0.2 + 0.3 * (1.0 + 1e-9) * th.sin()];
        assert!(SourceField::new(vec![b]).partials(outside, 4).iter().all(|v| *v == 0.0));
    }
}

#[test]
fn derivative_matches_finite_difference() {
    let f = SourceField::new(vec![
        make_bump([0.0, 0.0], 0.5, 1.0).unwrap(),
        make_bump([0.2, 0.1], 0.3, -2.0).unwrap(),
    ]);
    let p = [0.13, 0.07];
    let h = 1e-5;
    for (a, b) in multi_indices(3) {
        let fd = (f.partial([p[0] + h, p[1]], a, b) - f.partial([p[0] - h, p[1]], a, b)) / (2.0 * h);
        let exact = f.partial(p, a + 1, b);
        assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "({a},{b}): {fd} vs {exact}");
        let fd = (f.partial([p[0], p[1] + h], a, b) - f.partial([p[0], p[1] - h], a, b)) / (2.0 * h);
        let exact = f.partial(p, a, b + 1);
        assert!((fd - exact).abs() < 1e-5 * exact.abs().max(1.0), "({a},{b}): {fd} vs {exact}");
    }
}

#[test]
fn zero_field_norms_vanish() {
    let grid = InteriorGrid::covering(&[Disk { center: [0.0, 0.0], radius: 0.5 }], 48, 64).unwrap();
    let n = sobolev_norms(&SourceField::zero(), &grid, 4).unwrap();
    assert_eq!(n, vec![0.0; 5]);
}

#[test]
fn single_bump_norms_match_brute_force() {
    let (c, r, a) = ([0.1, -0.2], 0.3, 1.3);
    let b = make_bump(c, r, a).unwrap();
    let f = SourceField::new(vec![b]);
    let grid = InteriorGrid::covering(&[b.disk()], DEFAULT_RADIAL, DEFAULT_ANGULAR).unwrap();
    let n = sobolev_norms(&f, &grid, 4).unwrap();

    let oracle0 = brute_force_square_integral(c, r, 1000, |p| b.value(p).powi(2));
    assert!((n[0] * n[0] - oracle0).abs() < 1e-6 * oracle0);
    assert!((oracle0 - PI * r * r * a * a / 11.0).abs() < 1e-8 * oracle0);

    let grad2 = brute_force_square_integral(c, r, 1000, |p| {
        let j = b.jet2(p);
        j.grad[0].powi(2) + j.grad[1].powi(2)
    });
    assert!((n[1] * n[1] - n[0] * n[0] - grad2).abs() < 1e-6 * grad2);
    assert!((grad2 - 10.0 * PI / 9.0 * a * a).abs() < 1e-8 * grad2);
}

#[test]
fn overlapping_bumps_match_brute_force() {
    let f = SourceField::new(vec![
        make_bump([0.0, 0.0], 0.3, 1.0).unwrap(),
        make_bump([0.2, 0.1], 0.25, -0.7).unwrap(),
        make_bump([0.0, 0.0], 0.3, 0.5).unwrap(),
    ]);
    let disks: Vec<Disk> = f.disks().collect();
    let grid = InteriorGrid::covering(&disks, DEFAULT_RADIAL, DEFAULT_ANGULAR).unwrap();
    let n = sobolev_norms(&f, &grid, 2).unwrap();
    let oracle = brute_force_square_integral([0.1, 0.05], 0.5, 1000, |p| f.value(p).powi(2));
    assert!((n[0] * n[0] - oracle).abs() < 1e-6 * oracle, "{} vs {oracle}", n[0] * n[0]);
    let oracle2 = brute_force_square_integral([0.1, 0.05], 0.5, 1000, |p| {
        let j = f.jet2(p);
        j.value.powi(2) + j.grad[0].powi(2) + j.grad[1].powi(2)
            + j.hess[0][0].powi(2) + j.hess[0][1].powi(2) + j.hess[1][1].powi(2)
    });
    assert!((n[2] * n[2] - oracle2).abs() < 1e-6 * oracle2, "{} vs {oracle2}", n[2] * n[2]);
}

#[test]
fn unsupported_order_and_uncovered_field() {
    let b = make_bump([0.0, 0.0], 0.3, 1.0).unwrap();
    let grid = InteriorGrid::covering(&[b.disk()], 8, 8).unwrap();
    let f = SourceField::new(vec![b]);
    assert!(matches!(sobolev_norms(&f, &grid, 5), Err(Error::Unsupported(_))));
    let far = SourceField::new(vec![make_bump([0.5, 0.0], 0.3, 1.0).unwrap()]);
    assert!(matches!(sobolev_norms(&far, &grid, 1), Err(Error::Config(_))));
}

#[test]
fn separation_examples() {
    let d = make_disk(1.0, 128).unwrap();
    let one = |c: Point, r: f64| {
        SourcePair::new(SourceField::zero(), SourceField::new(vec![make_bump(c, r, 1.0).unwrap()])).unwrap()
    };
    assert!((separation(&d, &one([0.0, 0.0], 0.3)).unwrap() - 0.7).abs() < 1e-12);
    assert!((separation(&d, &one([0.5, 0.0], 0.2)).unwrap() - 0.3).abs() < 1e-12);
    assert!(matches!(separation(&d, &one([0.0, 0.0], 1.0)), Err(Error::Geometry(_))));
    assert!(matches!(separation(&d, &one([0.0, 0.0], 1.2)), Err(Error::Geometry(_))));
    assert!(matches!(separation(&d, &one([3.0, 0.0], 0.2)), Err(Error::Geometry(_))));
    assert!(Scene::new(d, one([0.9, 0.0], 0.2)).is_err());
}

#[test]
fn reference_scene_budget() {
    let scene = Scene::reference();
    assert!(scene.delta > 0.0);
    let budget = scene.source.sobolev_budget().unwrap();
    assert!(budget.m >= 1.0);
    assert!(budget.f0[4].powi(2) + budget.f1[3].powi(2) <= budget.m.powi(2) * (1.0 + 1e-12));
}

fn bump_strategy() -> impl Strategy<Value = Bump> {
    (-0.4f64..0.4, -0.4f64..0.4, 0.1f64..0.4, -2.0f64..2.0)
        .prop_map(|(x, y, r, a)| make_bump([x, y], r, a).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn norms_monotone_in_order(bumps in prop::collection::vec(bump_strategy(), 1..4)) {
        let f = SourceField::new(bumps);
        let disks: Vec<Disk> = f.disks().collect();
        let grid = InteriorGrid::covering(&disks, 24, 32).unwrap();
        let n = sobolev_norms(&f, &grid, 4).unwrap();
        for s in 0..4 {
            prop_assert!(n[s] <= n[s + 1]);
        }
    }

    #[test]
    fn norms_are_homogeneous(bumps in prop::collection::vec(bump_strategy(), 1..4), scale in -3.0f64..3.0) {
        let f = SourceField::new(bumps);
        let disks: Vec<Disk> = f.disks().collect();
        let grid = InteriorGrid::covering(&disks, 24, 32).unwrap();
        let n = sobolev_norms(&f, &grid, 4).unwrap();
        let m = sobolev_norms(&f.scaled(scale), &grid, 4).unwrap();
        for s in 0..=4 {
            prop_assert!((m[s] - scale.abs() * n[s]).abs() <= 1e-12 * n[s].max(1e-300) * 4.0);
        }
    }

    #[test]
    fn partition_weights_integrate_area(bumps in prop::collection::vec(bump_strategy(), 1..4)) {
        let disks: Vec<Disk> = bumps.iter().map(|b| b.disk()).collect();
        let grid = InteriorGrid::covering(&disks, 48, 64).unwrap();
        prop_assert!(grid.weights.iter().all(|w| *w >= 0.0));
        // ∫ of a single bump is exact regardless of overlaps
        let b = bumps[0];
        let v = grid.integrate(|p| b.value(p));
        let exact = PI * b.radius * b.radius * b.amplitude / 6.0;
        prop_assert!((v - exact).abs() <= 1e-6 * exact.abs().max(1e-12));
    }
}
