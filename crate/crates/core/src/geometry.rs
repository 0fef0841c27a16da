//! Domains with discretized boundaries, polynomial bump sources and interior quadrature.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::GaussLegendre;

pub type Point = [f64; 2];

/// Default interior grid: radial Gauss–Legendre order per disk.
pub const DEFAULT_RADIAL: usize = 48;
/// Default interior grid: uniform angular samples per disk.
pub const DEFAULT_ANGULAR: usize = 64;
/// Highest derivative order carried by source fields.
pub const MAX_SOBOLEV_ORDER: usize = 4;

#[inline]
pub fn dist(a: Point, b: Point) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryNode {
    pub point: Point,
    pub normal: Point,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainShape {
    Disk { radius: f64 },
    Polygon { vertices: Vec<Point>, fillet: f64 },
}

/// Discretized boundary of Ω.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub shape: DomainShape,
    pub nodes: Vec<BoundaryNode>,
    pub perimeter: f64,
    pub diameter: f64,
    /// sup over Ω of |y|.
    pub origin_radius: f64,
}

impl Domain {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.nodes.iter().map(|n| n.point)
    }

    /// Point-in-domain test against the discretized boundary.
    pub fn contains(&self, p: Point) -> bool {
        match &self.shape {
            DomainShape::Disk { radius } => p[0].hypot(p[1]) < *radius,
            DomainShape::Polygon { .. } => {
                let n = self.nodes.len();
                let mut inside = false;
                for i in 0..n {
                    let a = self.nodes[i].point;
                    let b = self.nodes[(i + 1) % n].point;
                    if (a[1] > p[1]) != (b[1] > p[1]) {
                        let x = a[0] + (p[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                        if p[0] < x {
                            inside = !inside;
                        }
                    }
                }
                inside
            }
        }
    }

    /// Same shape, different boundary resolution.
    pub fn resampled(&self, nodes: usize) -> Result<Domain> {
        match &self.shape {
            DomainShape::Disk { radius } => make_disk(*radius, nodes),
            DomainShape::Polygon { vertices, .. } => {
                make_polygon(vertices, nodes.div_ceil(vertices.len()))
            }
        }
    }
}

pub fn make_disk(radius: f64, node_count: usize) -> Result<Domain> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Config(format!("disk radius must be positive, got {radius}")));
    }
    if node_count < 16 {
        return Err(Error::Config(format!("disk needs at least 16 boundary nodes, got {node_count}")));
    }
    let w = 2.0 * PI * radius / node_count as f64;
    let nodes = (0..node_count)
        .map(|j| {
            let th = 2.0 * PI * j as f64 / node_count as f64;
            let (s, c) = th.sin_cos();
            BoundaryNode { point: [radius * c, radius * s], normal: [c, s], weight: w }
        })
        .collect();
    Ok(Domain {
        shape: DomainShape::Disk { radius },
        nodes,
        perimeter: 2.0 * PI * radius,
        diameter: 2.0 * radius,
        origin_radius: radius,
    })
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn segments_touch(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = cross(sub(p2, p1), sub(q1, p1));
    let d2 = cross(sub(p2, p1), sub(q2, p1));
    let d3 = cross(sub(q2, q1), sub(p1, q1));
    let d4 = cross(sub(q2, q1), sub(p2, q1));
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Point, b: Point, p: Point, d: f64| {
        d == 0.0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    on(p1, p2, q1, d1) || on(p1, p2, q2, d2) || on(q1, q2, p1, d3) || on(q1, q2, p2, d4)
}

enum Piece {
    Line { a: Point, b: Point },
    Arc { center: Point, radius: f64, start: f64, sweep: f64 },
}

impl Piece {
    fn length(&self) -> f64 {
        match self {
            Piece::Line { a, b } => dist(*a, *b),
            Piece::Arc { radius, sweep, .. } => radius * sweep.abs(),
        }
    }

    /// Point and outward normal at fraction `s` of the piece (CCW orientation).
    fn at(&self, s: f64) -> (Point, Point) {
        match self {
            Piece::Line { a, b } => {
                let l = dist(*a, *b);
                let t = [(b[0] - a[0]) / l, (b[1] - a[1]) / l];
                ([a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])], [t[1], -t[0]])
            }
            Piece::Arc { center, radius, start, sweep } => {
                let th = start + s * sweep;
                let (sn, cs) = th.sin_cos();
                let sign = sweep.signum();
                ([center[0] + radius * cs, center[1] + radius * sn], [sign * cs, sign * sn])
            }
        }
    }
}

/// Counterclockwise simple polygon with corners rounded by arcs of radius 10⁻² × shortest edge.
pub fn make_polygon(vertices: &[Point], nodes_per_edge: usize) -> Result<Domain> {
    let n = vertices.len();
    if n < 3 {
        return Err(Error::Config(format!("polygon needs at least 3 vertices, got {n}")));
    }
    if nodes_per_edge < 2 {
        return Err(Error::Config("polygon needs at least 2 nodes per edge".into()));
    }
    if vertices.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Config("polygon vertices must be finite".into()));
    }
    let edges: Vec<(Point, Point)> = (0..n).map(|i| (vertices[i], vertices[(i + 1) % n])).collect();
    let min_edge = edges.iter().map(|(a, b)| dist(*a, *b)).fold(f64::INFINITY, f64::min);
    if min_edge <= 0.0 {
        return Err(Error::Config("polygon has repeated vertices".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if adjacent {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                // adjacent edges may only share their common vertex
                if cross(sub(b, a), sub(d, c)) == 0.0 && (sub(b, a)[0] * sub(d, c)[0] + sub(b, a)[1] * sub(d, c)[1]) < 0.0 {
                    return Err(Error::Config(format!("polygon folds back on itself at vertex {}", (i + 1) % n)));
                }
                continue;
            }
            if segments_touch(edges[i].0, edges[i].1, edges[j].0, edges[j].1) {
                return Err(Error::Config(format!("polygon is self-intersecting (edges {i} and {j})")));
            }
        }
    }
    let area2: f64 = edges.iter().map(|(a, b)| cross(*a, *b)).sum();
    if area2 <= 0.0 {
        return Err(Error::Config("polygon vertices must be in counterclockwise order".into()));
    }

    let rho = 1e-2 * min_edge;
    let dir = |a: Point, b: Point| {
        let l = dist(a, b);
        [(b[0] - a[0]) / l, (b[1] - a[1]) / l]
    };
    // tangent points around each vertex
    let mut cut_in = vec![[0.0; 2]; n];
    let mut cut_out = vec![[0.0; 2]; n];
    let mut arcs = Vec::with_capacity(n);
    for i in 0..n {
        let prev = vertices[(i + n - 1) % n];
        let v = vertices[i];
        let next = vertices[(i + 1) % n];
        let din = dir(prev, v);
        let dout = dir(v, next);
        let turn = cross(din, dout).atan2(din[0] * dout[0] + din[1] * dout[1]);
        let l = rho * (0.5 * turn.abs()).tan();
        cut_in[i] = [v[0] - l * din[0], v[1] - l * din[1]];
        cut_out[i] = [v[0] + l * dout[0], v[1] + l * dout[1]];
        if turn.abs() < 1e-14 {
            arcs.push(None);
            continue;
        }
        // left normal for a left turn, right normal otherwise
        let side = turn.signum();
        let nrm = [-din[1] * side, din[0] * side];
        let center = [cut_in[i][0] + rho * nrm[0], cut_in[i][1] + rho * nrm[1]];
        let start = (cut_in[i][1] - center[1]).atan2(cut_in[i][0] - center[0]);
        arcs.push(Some(Piece::Arc { center, radius: rho, start, sweep: turn }));
    }
    let mut pieces = Vec::with_capacity(2 * n);
    for i in 0..n {
        if let Some(a) = arcs[i].take() {
            pieces.push((a, 4usize));
        }
        pieces.push((Piece::Line { a: cut_out[i], b: cut_in[(i + 1) % n] }, nodes_per_edge));
    }

    // nodes at piece starts and interior fractions; weights from arc length
    let mut pts = Vec::new();
    let mut params = Vec::new();
    let mut s_acc = 0.0;
    for (piece, m) in &pieces {
        let len = piece.length();
        for j in 0..*m {
            let s = j as f64 / *m as f64;
            let (p, nrm) = piece.at(s);
            pts.push((p, nrm));
            params.push(s_acc + s * len);
        }
        s_acc += len;
    }
    let perimeter = s_acc;
    let total = pts.len();
    let nodes: Vec<BoundaryNode> = (0..total)
        .map(|j| {
            let before = if j == 0 { perimeter - params[total - 1] } else { params[j] - params[j - 1] };
            let after = if j + 1 == total { perimeter - params[j] } else { params[j + 1] - params[j] };
            BoundaryNode { point: pts[j].0, normal: pts[j].1, weight: 0.5 * (before + after) }
        })
        .collect();
    let mut diameter: f64 = 0.0;
    for (i, a) in nodes.iter().enumerate() {
        for b in &nodes[i + 1..] {
            diameter = diameter.max(dist(a.point, b.point));
        }
    }
    let origin_radius = nodes.iter().map(|nd| nd.point[0].hypot(nd.point[1])).fold(0.0, f64::max);
    Ok(Domain {
        shape: DomainShape::Polygon { vertices: vertices.to_vec(), fillet: rho },
        nodes,
        perimeter,
        diameter,
        origin_radius,
    })
}

/// Dense bivariate polynomial in local coordinates, stored as (i, j, c) for c·xⁱyʲ.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    terms: Vec<(usize, usize, f64)>,
}

impl Poly2 {
    pub fn new(mut terms: Vec<(usize, usize, f64)>) -> Self {
        terms.retain(|t| t.2 != 0.0);
        Self { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|t| t.0 + t.1).max().unwrap_or(0)
    }

    pub fn partial(&self, a: usize, b: usize) -> Poly2 {
        let falling = |n: usize, k: usize| (0..k).map(|m| (n - m) as f64).product::<f64>();
        Poly2::new(
            self.terms
                .iter()
                .filter(|t| t.0 >= a && t.1 >= b)
                .map(|&(i, j, c)| (i - a, j - b, c * falling(i, a) * falling(j, b)))
                .collect(),
        )
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut px = [1.0; 11];
        let mut py = [1.0; 11];
        for k in 1..11 {
            px[k] = px[k - 1] * x;
            py[k] = py[k - 1] * y;
        }
        self.eval_powers(&px, &py)
    }

    fn eval_powers(&self, px: &[f64; 11], py: &[f64; 11]) -> f64 {
        self.terms.iter().map(|&(i, j, c)| c * px[i] * py[j]).sum()
    }
}

/// Multi-indices (a, b) with a + b ≤ 4, grouped by order.
pub fn multi_indices(max_order: usize) -> Vec<(usize, usize)> {
    (0..=max_order).flat_map(|s| (0..=s).map(move |b| (s - b, b))).collect()
}

fn profile_partials() -> &'static [Poly2] {
    static TABLE: OnceLock<Vec<Poly2>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // (1 − x² − y²)⁵ = Σ 5!/(a! b! c!) (−x²)^b (−y²)^c
        let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
        let mut terms = Vec::new();
        for b in 0..=5usize {
            for c in 0..=5 - b {
                let a = 5 - b - c;
                let sign = if (b + c) % 2 == 0 { 1.0 } else { -1.0 };
                terms.push((2 * b, 2 * c, sign * fact(5) / (fact(a) * fact(b) * fact(c))));
            }
        }
        let p = Poly2::new(terms);
        multi_indices(MAX_SOBOLEV_ORDER).into_iter().map(|(a, b)| p.partial(a, b)).collect()
    })
}

/// b(x) = A(1 − |x − c|²/r²)⁵ inside the disk, 0 outside.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub center: Point,
    pub radius: f64,
    pub amplitude: f64,
}

pub fn make_bump(center: Point, radius: f64, amplitude: f64) -> Result<Bump> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Config(format!("bump radius must be positive, got {radius}")));
    }
    if !center.iter().all(|c| c.is_finite()) || !amplitude.is_finite() {
        return Err(Error::Config("bump center and amplitude must be finite".into()));
    }
    Ok(Bump { center, radius, amplitude })
}

/// Value, gradient and Hessian at a point.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Jet2 {
    pub value: f64,
    pub grad: [f64; 2],
    pub hess: [[f64; 2]; 2],
}

impl Bump {
    pub fn disk(&self) -> Disk {
        Disk { center: self.center, radius: self.radius }
    }

    pub fn scaled(&self, a: f64) -> Bump {
        Bump { amplitude: a * self.amplitude, ..*self }
    }

    #[inline]
    fn local(&self, p: Point) -> (f64, f64, f64) {
        let sx = (p[0] - self.center[0]) / self.radius;
        let sy = (p[1] - self.center[1]) / self.radius;
        (sx, sy, 1.0 - sx * sx - sy * sy)
    }

    pub fn value(&self, p: Point) -> f64 {
        let (_, _, q) = self.local(p);
        if q <= 0.0 {
            return 0.0;
        }
        let q2 = q * q;
        self.amplitude * q2 * q2 * q
    }

    pub fn jet2(&self, p: Point) -> Jet2 {
        let (sx, sy, q) = self.local(p);
        if q <= 0.0 {
            return Jet2::default();
        }
        let a = self.amplitude;
        let r = self.radius;
        let q3 = q * q * q;
        let q4 = q3 * q;
        let g = -10.0 * a * q4 / r;
        let h0 = -10.0 * a * q4 / (r * r);
        let h1 = 80.0 * a * q3 / (r * r);
        Jet2 {
            value: a * q4 * q,
            grad: [g * sx, g * sy],
            hess: [[h0 + h1 * sx * sx, h1 * sx * sy], [h1 * sx * sy, h0 + h1 * sy * sy]],
        }
    }

    /// ∂ₓᵃ∂ᵧᵇ b at `p`, for a + b ≤ 4.
    pub fn partial(&self, p: Point, a: usize, b: usize) -> f64 {
        assert!(a + b <= MAX_SOBOLEV_ORDER, "bump partials are tabulated up to order 4");
        let (sx, sy, q) = self.local(p);
        if q <= 0.0 {
            return 0.0;
        }
        let s = a + b;
        let idx = s * (s + 1) / 2 + b;
        self.amplitude * self.radius.powi(-(s as i32)) * profile_partials()[idx].eval(sx, sy)
    }

    /// All partials up to `max_order`, in `multi_indices` order, accumulated into `out`.
    pub fn add_partials(&self, p: Point, max_order: usize, out: &mut [f64]) {
        let (sx, sy, q) = self.local(p);
        if q <= 0.0 {
            return;
        }
        let mut px = [1.0; 11];
        let mut py = [1.0; 11];
        for k in 1..11 {
            px[k] = px[k - 1] * sx;
            py[k] = py[k - 1] * sy;
        }
        let table = profile_partials();
        let mut idx = 0;
        for s in 0..=max_order {
            let scale = self.amplitude * self.radius.powi(-(s as i32));
            for _ in 0..=s {
                out[idx] += scale * table[idx].eval_powers(&px, &py);
                idx += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point,
    pub radius: f64,
}

impl Disk {
    pub fn contains(&self, p: Point) -> bool {
        dist(p, self.center) < self.radius
    }

    pub fn within(&self, other: &Disk) -> bool {
        dist(self.center, other.center) + self.radius <= other.radius * (1.0 + 1e-12)
    }
}

/// Finite sum of bumps.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SourceField {
    pub bumps: Vec<Bump>,
}

impl SourceField {
    pub fn new(bumps: Vec<Bump>) -> Self {
        Self { bumps }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn is_zero(&self) -> bool {
        self.bumps.iter().all(|b| b.amplitude == 0.0)
    }

    pub fn scaled(&self, a: f64) -> SourceField {
        Self::new(self.bumps.iter().map(|b| b.scaled(a)).collect())
    }

    /// Sum of two fields; bumps with the same center and radius are merged.
    pub fn plus(&self, other: &SourceField) -> SourceField {
        let mut bumps: Vec<Bump> = self.bumps.clone();
        for b in &other.bumps {
            match bumps.iter_mut().find(|c| c.center == b.center && c.radius == b.radius) {
                Some(c) => c.amplitude += b.amplitude,
                None => bumps.push(*b),
            }
        }
        Self::new(bumps)
    }

    pub fn value(&self, p: Point) -> f64 {
        self.bumps.iter().map(|b| b.value(p)).sum()
    }

    pub fn jet2(&self, p: Point) -> Jet2 {
        let mut out = Jet2::default();
        for b in &self.bumps {
            let j = b.jet2(p);
            out.value += j.value;
            for i in 0..2 {
                out.grad[i] += j.grad[i];
                for k in 0..2 {
                    out.hess[i][k] += j.hess[i][k];
                }
            }
        }
        out
    }

    pub fn partial(&self, p: Point, a: usize, b: usize) -> f64 {
        self.bumps.iter().map(|bp| bp.partial(p, a, b)).sum()
    }

    pub fn partials(&self, p: Point, max_order: usize) -> Vec<f64> {
        let mut out = vec![0.0; (max_order + 1) * (max_order + 2) / 2];
        for b in &self.bumps {
            b.add_partials(p, max_order, &mut out);
        }
        out
    }

    pub fn disks(&self) -> impl Iterator<Item = Disk> + '_ {
        self.bumps.iter().map(|b| b.disk())
    }
}

/// Union of per-disk polar grids weighted by a smooth partition of unity.
///
/// A disk overlapping a smaller one is sampled proportionally finer.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorGrid {
    pub disks: Vec<Disk>,
    pub points: Vec<Point>,
    pub weights: Vec<f64>,
    pub radial: usize,
    pub angular: usize,
}

impl InteriorGrid {
    pub fn covering(disks: &[Disk], radial: usize, angular: usize) -> Result<Self> {
        if radial == 0 || angular == 0 {
            return Err(Error::Config("interior grid orders must be positive".into()));
        }
        let mut uniq: Vec<Disk> = Vec::new();
        for d in disks {
            if !(d.radius > 0.0) {
                return Err(Error::Config("support disks must have positive radius".into()));
            }
            if !uniq.contains(d) {
                uniq.push(*d);
            }
        }
        let mut points = Vec::with_capacity(uniq.len() * radial * angular);
        let mut weights = Vec::with_capacity(points.capacity());
        let phi = |d: &Disk, p: Point| {
            let s = 1.0 - ((p[0] - d.center[0]).powi(2) + (p[1] - d.center[1]).powi(2)) / (d.radius * d.radius);
            if s > 0.0 { s.powi(5) } else { 0.0 }
        };
        for (i, d) in uniq.iter().enumerate() {
            // resolve the smallest overlapping disk at the base density
            let scale = uniq
                .iter()
                .filter(|e| dist(e.center, d.center) < e.radius + d.radius)
                .map(|e| d.radius / e.radius)
                .fold(1.0f64, f64::max)
                .min(8.0);
            let n_r = (radial as f64 * scale).ceil() as usize;
            let n_th = (angular as f64 * scale).ceil() as usize;
            let gl = GaussLegendre::new(n_r);
            let dth = 2.0 * PI / n_th as f64;
            for (rho, wr) in gl.on_interval(0.0, d.radius) {
                for j in 0..n_th {
                    let th = (j as f64 + 0.5) * dth;
                    let p = [d.center[0] + rho * th.cos(), d.center[1] + rho * th.sin()];
                    let own = phi(d, p);
                    let total: f64 = own
                        + uniq
                            .iter()
                            .enumerate()
                            .filter(|(k, _)| *k != i)
                            .map(|(_, e)| phi(e, p))
                            .sum::<f64>();
                    points.push(p);
                    weights.push(wr * rho * dth * own / total);
                }
            }
        }
        Ok(Self { disks: uniq, points, weights, radial, angular })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Whether every disk of `field` lies inside one of the grid disks.
    pub fn covers(&self, field: &SourceField) -> bool {
        field.disks().all(|d| self.disks.iter().any(|g| d.within(g)))
    }

    pub fn integrate<F: Fn(Point) -> f64>(&self, f: F) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(*p)).sum()
    }
}

/// ‖f‖_(s) for s = 0..=max_order.
pub fn sobolev_norms(field: &SourceField, grid: &InteriorGrid, max_order: usize) -> Result<Vec<f64>> {
    if max_order > MAX_SOBOLEV_ORDER {
        return Err(Error::Unsupported(format!("Sobolev order {max_order} exceeds 4")));
    }
    if !grid.covers(field) {
        return Err(Error::Config("interior grid does not cover the field support".into()));
    }
    let m = (max_order + 1) * (max_order + 2) / 2;
    let mut sq = vec![0.0; m];
    for (p, w) in grid.points.iter().zip(&grid.weights) {
        let d = field.partials(*p, max_order);
        for (acc, v) in sq.iter_mut().zip(&d) {
            *acc += w * v * v;
        }
    }
    let mut out = Vec::with_capacity(max_order + 1);
    let mut run = 0.0;
    let mut idx = 0;
    for s in 0..=max_order {
        for _ in 0..=s {
            run += sq[idx];
            idx += 1;
        }
        out.push(run.sqrt());
    }
    Ok(out)
}

/// The unknown pair with its interior quadrature and tabulated values.
#[derive(Debug, Clone, PartialEq)]
pub struct SourcePair {
    pub f0: SourceField,
    pub f1: SourceField,
    pub grid: InteriorGrid,
    /// (f₀, f₁) at each grid point.
    pub values: Vec<[f64; 2]>,
}

impl SourcePair {
    pub fn new(f0: SourceField, f1: SourceField) -> Result<Self> {
        Self::with_density(f0, f1, DEFAULT_RADIAL, DEFAULT_ANGULAR)
    }

    pub fn with_density(f0: SourceField, f1: SourceField, radial: usize, angular: usize) -> Result<Self> {
        let disks: Vec<Disk> = f0.disks().chain(f1.disks()).collect();
        let grid = InteriorGrid::covering(&disks, radial, angular)?;
        Ok(Self::on_grid(f0, f1, grid))
    }

    pub fn on_grid(f0: SourceField, f1: SourceField, grid: InteriorGrid) -> Self {
        let values = grid.points.iter().map(|p| [f0.value(*p), f1.value(*p)]).collect();
        Self { f0, f1, grid, values }
    }

    pub fn zero() -> Self {
        Self::on_grid(SourceField::zero(), SourceField::zero(), InteriorGrid::covering(&[], 1, 1).unwrap())
    }

    pub fn scaled(&self, a: f64) -> Self {
        Self::on_grid(self.f0.scaled(a), self.f1.scaled(a), self.grid.clone())
    }

    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::with_density(self.f0.clone(), self.f1.clone(), self.grid.radial * factor, self.grid.angular * factor)
    }

    pub fn is_zero(&self) -> bool {
        self.f0.is_zero() && self.f1.is_zero()
    }

    pub fn support(&self) -> impl Iterator<Item = Disk> + '_ {
        self.f0.disks().chain(self.f1.disks())
    }

    /// Whether `p` lies in the closed support of either field.
    pub fn in_support(&self, p: Point) -> bool {
        self.support().any(|d| dist(p, d.center) <= d.radius)
    }

    pub fn sobolev_budget(&self) -> Result<SobolevBudget> {
        let n0 = sobolev_norms(&self.f0, &self.grid, 4)?;
        let n1 = sobolev_norms(&self.f1, &self.grid, 3)?;
        Ok(SobolevBudget::new(n0, n1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolevBudget {
    pub m: f64,
    /// ‖f₀‖_(s), s = 0..=4.
    pub f0: Vec<f64>,
    /// ‖f₁‖_(s), s = 0..=3.
    pub f1: Vec<f64>,
}

impl SobolevBudget {
    pub fn new(f0: Vec<f64>, f1: Vec<f64>) -> Self {
        let top = f0.last().copied().unwrap_or(0.0).powi(2) + f1.last().copied().unwrap_or(0.0).powi(2);
        Self { m: top.sqrt().max(1.0), f0, f1 }
    }
}

/// δ = min over boundary nodes and support disks of |x − c| − r.
pub fn separation(domain: &Domain, source: &SourcePair) -> Result<f64> {
    let mut delta = f64::INFINITY;
    for d in source.support() {
        if !domain.contains(d.center) {
            return Err(Error::Geometry(format!(
                "support disk centred at ({}, {}) lies outside the domain",
                d.center[0], d.center[1]
            )));
        }
        for x in domain.points() {
            delta = delta.min(dist(x, d.center) - d.radius);
        }
    }
    if delta <= 0.0 {
        return Err(Error::Geometry(format!("source support reaches the boundary (delta = {delta})")));
    }
    Ok(delta)
}

/// A domain together with a source pair whose support is strictly inside it.
#[derive(Debug, Clone)]
pub struct Scene {
    pub domain: Domain,
    pub source: SourcePair,
    pub delta: f64,
}

impl Scene {
    pub fn new(domain: Domain, source: SourcePair) -> Result<Self> {
        let delta = if source.support().next().is_some() { separation(&domain, &source)? } else { f64::INFINITY };
        Ok(Self { domain, source, delta })
    }

    /// Unit disk with 128 nodes and a three-bump pair.
    pub fn reference() -> Self {
        let domain = make_disk(1.0, 128).expect("valid disk");
        Self::new(domain, reference_source()).expect("reference scene is valid")
    }
}

pub fn reference_source() -> SourcePair {
    let f0 = SourceField::new(vec![Bump { center: [0.1, 0.05], radius: 0.75, amplitude: 1.0 }]);
    let f1 = SourceField::new(vec![
        Bump { center: [-0.2, -0.1], radius: 0.6, amplitude: 1.0 },
        Bump { center: [0.25, 0.3], radius: 0.45, amplitude: -0.6 },
    ]);
    SourcePair::new(f0, f1).expect("reference source is valid")
}
