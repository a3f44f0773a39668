//! Independent reference implementations shared by the integration suites.
#![allow(dead_code)]

use cd2_core::geometry::PointSet;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    cd2_core::geometry::seeded_rng(seed)
}

pub fn random_cloud(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> PointSet<f64> {
    PointSet::from_flat(dim, (0..dim * n).map(|_| rng.gen_range(-1.0..1.0)).collect()).unwrap()
}

/// Small-integer coordinates so that exact distance ties occur.
pub fn grid_cloud(rng: &mut ChaCha8Rng, dim: usize, n: usize) -> PointSet<f64> {
    PointSet::from_flat(dim, (0..dim * n).map(|_| rng.gen_range(0..4) as f64).collect()).unwrap()
}

pub fn sq(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for k in 0..a.len() {
        let d = a[k] - b[k];
        s += d * d;
    }
    s
}

/// Exhaustive nearest neighbour, first index wins ties.
pub fn brute_nearest(q: &[f64], set: &PointSet<f64>) -> (usize, f64) {
    let mut best = (usize::MAX, f64::INFINITY);
    for j in 0..set.len() {
        let d = sq(q, set.point(j));
        if d < best.1 {
            best = (j, d);
        }
    }
    best
}

/// Chamfer distance by double loop: (total, part1, part2).
pub fn brute_chamfer(s1: &PointSet<f64>, s2: &PointSet<f64>) -> (f64, f64, f64) {
    let part = |a: &PointSet<f64>, b: &PointSet<f64>| {
        (0..a.len()).map(|i| brute_nearest(a.point(i), b).1).sum::<f64>() / a.len() as f64
    };
    let (p1, p2) = (part(s1, s2), part(s2, s1));
    (p1 + p2, p1, p2)
}

/// Minimum mean matching cost over all permutations (Heap's algorithm).
pub fn brute_emd(s1: &PointSet<f64>, s2: &PointSet<f64>) -> f64 {
    let n = s1.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let cost = |p: &[usize]| (0..n).map(|i| sq(s1.point(i), s2.point(p[i])).sqrt()).sum::<f64>();
    let mut best = cost(&perm);
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            best = best.min(cost(&perm));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    best / n as f64
}

pub type Tri = [[f64; 3]; 3];

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Signed volume determinant of (b−a, c−a, d−a).
pub fn det3(a: &[f64; 3], b: &[f64; 3], c: &[f64; 3], d: &[f64; 3]) -> f64 {
    dot(&sub(d, a), &cross(&sub(b, a), &sub(c, a)))
}

/// Triangle intersection by edge-plane crossing: an edge of one triangle
/// that changes side of the other triangle's plane crosses it at one point;
/// the pair intersects iff such a point lies inside the other triangle,
/// judged by barycentric coordinates. Returns `None` when any determinant
/// or barycentric coordinate is within `eps` of zero, including the
/// coplanar and degenerate cases.
pub fn oracle_tri_tri(a: &Tri, b: &Tri, eps: f64) -> Option<bool> {
    for t in [a, b] {
        let n = cross(&sub(&t[1], &t[0]), &sub(&t[2], &t[0]));
        if dot(&n, &n).sqrt() < eps {
            return None;
        }
    }
    let mut hit = false;
    for (p, q) in [(a, b), (b, a)] {
        let side: Vec<f64> = p.iter().map(|v| det3(&q[0], &q[1], &q[2], v)).collect();
        if side.iter().any(|s| s.abs() < eps) {
            return None;
        }
        for e in 0..3 {
            let (i, j) = (e, (e + 1) % 3);
            if (side[i] > 0.0) == (side[j] > 0.0) {
                continue;
            }
            let t = side[i] / (side[i] - side[j]);
            let x = [
                p[i][0] + t * (p[j][0] - p[i][0]),
                p[i][1] + t * (p[j][1] - p[i][1]),
                p[i][2] + t * (p[j][2] - p[i][2]),
            ];
            let n = cross(&sub(&q[1], &q[0]), &sub(&q[2], &q[0]));
            let area = dot(&n, &n);
            let bary: Vec<f64> = (0..3)
                .map(|k| dot(&n, &cross(&sub(&q[(k + 1) % 3], &x), &sub(&q[(k + 2) % 3], &x))) / area)
                .collect();
            if bary.iter().any(|w| w.abs() < eps) {
                return None;
            }
            if bary.iter().all(|&w| w > 0.0) {
                hit = true;
            }
        }
    }
    Some(hit)
}

pub fn random_tri(rng: &mut ChaCha8Rng) -> Tri {
    let mut t = [[0.0; 3]; 3];
    for v in t.iter_mut() {
        for c in v.iter_mut() {
            *c = rng.gen_range(0.0..1.0);
        }
    }
    t
}

/// Fixed-structure loss: the residual chamfer with every nearest-neighbour
/// assignment frozen, as a function of the vertex coordinates.
pub fn frozen_loss(
    s1: &PointSet<f64>,
    verts: &[f64],
    dim: usize,
    residual_points: &[usize],
    residual_vertices: &[usize],
    index1: &[usize],
    index2: &[usize],
) -> f64 {
    let v = |i: usize| &verts[i * dim..(i + 1) * dim];
    let part1 = residual_points
        .iter()
        .zip(index1)
        .map(|(&j, &r)| sq(s1.point(j), v(residual_vertices[r])))
        .sum::<f64>()
        / residual_points.len() as f64;
    let part2 = residual_vertices
        .iter()
        .zip(index2)
        .map(|(&i, &r)| sq(v(i), s1.point(residual_points[r])))
        .sum::<f64>()
        / residual_vertices.len() as f64;
    part1 + part2
}

/// Rejects instances where some query's two nearest candidates are within
/// `gap` (squared distance) of each other.
pub fn tie_free(a: &PointSet<f64>, b: &PointSet<f64>, gap: f64) -> bool {
    (0..a.len()).all(|i| {
        let mut d: Vec<f64> = (0..b.len()).map(|j| sq(a.point(i), b.point(j))).collect();
        d.sort_by(|x, y| x.partial_cmp(y).unwrap());
        d.len() < 2 || d[1] - d[0] >= gap
    })
}
