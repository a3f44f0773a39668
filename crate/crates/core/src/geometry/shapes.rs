//! Template and target generators: icosphere, box, and the 2D chair scene.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Mesh, PointSet};
use crate::scalar::Scalar;

pub const MAX_ICOSPHERE_SUBDIVISIONS: u32 = 6;

/// Unit-radius icosphere obtained by repeated 4-to-1 subdivision of an
/// icosahedron. Level `k` has `10·4^k + 2` vertices and `20·4^k` faces.
pub fn make_icosphere<T: Scalar>(subdivisions: u32) -> Result<Mesh<T>> {
    if subdivisions > MAX_ICOSPHERE_SUBDIVISIONS {
        return Err(Error::InvalidParameter(format!(
            "icosphere subdivisions must be in 0..={MAX_ICOSPHERE_SUBDIVISIONS}, got {subdivisions}"
        )));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<[f64; 3]> = vec![
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    verts.iter_mut().for_each(normalize);
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = midpoint(&mut verts, &mut midpoints, a, b);
            let bc = midpoint(&mut verts, &mut midpoints, b, c);
            let ca = midpoint(&mut verts, &mut midpoints, c, a);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }

    let coords = verts.iter().flat_map(|v| v.iter().map(|&c| T::of(c))).collect();
    Mesh::new(
        PointSet::from_flat(3, coords)?,
        faces.into_iter().map(|f| f.to_vec()).collect(),
    )
}

fn normalize(v: &mut [f64; 3]) {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.iter_mut().for_each(|c| *c /= n);
}

fn midpoint(
    verts: &mut Vec<[f64; 3]>,
    cache: &mut HashMap<(usize, usize), usize>,
    a: usize,
    b: usize,
) -> usize {
    let key = (a.min(b), a.max(b));
    *cache.entry(key).or_insert_with(|| {
        let (p, q) = (verts[a], verts[b]);
        let mut m = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0, (p[2] + q[2]) / 2.0];
        normalize(&mut m);
        verts.push(m);
        verts.len() - 1
    })
}

/// Closed axis-aligned box centred at the origin, two outward-facing
/// triangles per side.
pub fn make_box<T: Scalar>(half_extents: [f64; 3]) -> Result<Mesh<T>> {
    let [hx, hy, hz] = half_extents;
    if !(hx > 0.0 && hy > 0.0 && hz > 0.0) {
        return Err(Error::InvalidParameter("box half extents must be positive".into()));
    }
    let mut coords = Vec::with_capacity(24);
    for i in 0..8 {
        let x = if i & 1 == 0 { -hx } else { hx };
        let y = if i & 2 == 0 { -hy } else { hy };
        let z = if i & 4 == 0 { -hz } else { hz };
        coords.extend_from_slice(&[T::of(x), T::of(y), T::of(z)]);
    }
    let quads = [
        [0, 2, 3, 1], // -z
        [4, 5, 7, 6], // +z
        [0, 1, 5, 4], // -y
        [2, 6, 7, 3], // +y
        [0, 4, 6, 2], // -x
        [1, 3, 7, 5], // +x
    ];
    let faces = quads
        .iter()
        .flat_map(|q| [vec![q[0], q[1], q[2]], vec![q[0], q[2], q[3]]])
        .collect();
    Mesh::new(PointSet::from_flat(3, coords)?, faces)
}

pub const CHAIR_POINTS: usize = 81;
pub const CHAIR_TEMPLATE_VERTICES: usize = 80;
pub const CHAIR_TEMPLATE_RADIUS: f64 = 0.8;

/// The 2D chair scene: an 81-point ground-truth profile and an 80-vertex
/// closed-loop circle template.
///
/// The profile is a side view. The back rises along `x = -0.45` from the
/// seat (`y = 0.35`) to `y = 0.95`, the seat spans `x ∈ [-0.45, 0.45]`,
/// and both legs drop to `y = -0.5`. The template is a circle of radius 0.8
/// centred at the profile's centroid.
pub fn make_chair_2d<T: Scalar>() -> Result<(PointSet<T>, Mesh<T>)> {
    let (x0, x1, seat, top, floor) = (-0.45, 0.45, 0.35, 0.95, -0.5);
    let mut pts: Vec<[f64; 2]> = Vec::with_capacity(CHAIR_POINTS);
    // back: 16 samples above the seat corner
    for k in 1..=16 {
        pts.push([x0, seat + (top - seat) * k as f64 / 16.0]);
    }
    // seat: 23 samples including both corners
    for k in 0..=22 {
        pts.push([x0 + (x1 - x0) * k as f64 / 22.0, seat]);
    }
    // front and rear legs: 21 samples each below the corners
    for x in [x1, x0] {
        for k in 1..=21 {
            pts.push([x, seat + (floor - seat) * k as f64 / 21.0]);
        }
    }
    debug_assert_eq!(pts.len(), CHAIR_POINTS);
    let target = PointSet::from_flat(2, pts.iter().flatten().map(|&c| T::of(c)).collect())?;
    let template = make_circle_loop(CHAIR_TEMPLATE_VERTICES, &target.centroid(), T::of(CHAIR_TEMPLATE_RADIUS), T::zero())?;
    Ok((target, template))
}

/// Closed polyline of `n` vertices on a circle, starting at angle `phase`.
pub fn make_circle_loop<T: Scalar>(n: usize, center: &[T], radius: T, phase: T) -> Result<Mesh<T>> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("a closed loop needs at least 3 vertices, got {n}")));
    }
    let mut coords = Vec::with_capacity(2 * n);
    let tau = T::of(std::f64::consts::TAU);
    for i in 0..n {
        let a = phase + tau * T::of(i as f64) / T::of(n as f64);
        coords.push(center[0] + radius * a.cos());
        coords.push(center[1] + radius * a.sin());
    }
    let faces = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
    Mesh::new(PointSet::from_flat(2, coords)?, faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_face_counts(m: &Mesh<f64>) -> HashMap<(usize, usize), usize> {
        let mut counts = HashMap::new();
        for f in m.faces() {
            for i in 0..3 {
                let (a, b) = (f[i], f[(i + 1) % 3]);
                *counts.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        counts
    }

    #[test]
    fn icosphere_counts_and_topology() {
        for k in 0..=4u32 {
            let m: Mesh<f64> = make_icosphere(k).unwrap();
            let v = m.vertices().len();
            let f = m.faces().len();
            assert_eq!(v, 10 * 4usize.pow(k) + 2);
            assert_eq!(f, 20 * 4usize.pow(k));
            let edges = edge_face_counts(&m);
            assert!(edges.values().all(|&c| c == 2), "watertight at level {k}");
            assert_eq!(v as i64 - edges.len() as i64 + f as i64, 2);
            for p in m.vertices().iter() {
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                assert!((r - 1.0).abs() < 1e-9);
            }
        }
        let m: Mesh<f64> = make_icosphere(4).unwrap();
        assert_eq!((m.vertices().len(), m.faces().len()), (2562, 5120));
        assert!(make_icosphere::<f64>(7).is_err());
    }

    #[test]
    fn icosphere_faces_wind_outward() {
        let m: Mesh<f64> = make_icosphere(1).unwrap();
        for f in 0..m.faces().len() {
            let [a, b, c] = m.triangle(f);
            let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
            let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
            let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
            assert!(n[0] * a[0] + n[1] * a[1] + n[2] * a[2] > 0.0);
        }
    }

    #[test]
    fn box_is_closed() {
        let m: Mesh<f64> = make_box([1.0, 0.5, 0.25]).unwrap();
        assert_eq!((m.vertices().len(), m.faces().len()), (8, 12));
        assert!(edge_face_counts(&m).values().all(|&c| c == 2));
    }

    #[test]
    fn chair_scene_contract() {
        let (target, template) = make_chair_2d::<f64>().unwrap();
        assert_eq!(target.len(), 81);
        assert_eq!(template.vertices().len(), 80);
        assert!(target.iter().all(|p| p.iter().all(|c| c.is_finite() && c.abs() <= 1.0)));
        let mut degree = vec![0usize; 80];
        for f in template.faces() {
            degree[f[0]] += 1;
            degree[f[1]] += 1;
        }
        assert!(degree.iter().all(|&d| d == 2));
        // a single cycle: walking the faces from vertex 0 visits every vertex
        let mut seen = [false; 80];
        let mut v = 0;
        for f in template.faces() {
            assert_eq!(f[0], v);
            seen[v] = true;
            v = f[1];
        }
        assert_eq!(v, 0);
        assert!(seen.iter().all(|&s| s));
        // points are distinct
        for i in 0..81 {
            for j in i + 1..81 {
                assert_ne!(target.point(i), target.point(j));
            }
        }
    }
}
