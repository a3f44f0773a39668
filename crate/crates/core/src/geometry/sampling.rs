use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Mesh, PointSet};
use crate::scalar::Scalar;

/// Deterministic generator used everywhere a seed is accepted.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn triangle_area<T: Scalar>(tri: &[[T; 3]; 3]) -> T {
    let [a, b, c] = tri;
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
    (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt() / T::of(2.0)
}

/// Draws `n` points uniformly by area from the surface of a triangle mesh.
///
/// Faces are picked with probability proportional to area, then a point is
/// placed with uniform barycentric coordinates.
pub fn sample_surface<T: Scalar>(mesh: &Mesh<T>, n: usize, seed: u64) -> Result<PointSet<T>> {
    if mesh.dim() != 3 {
        return Err(Error::InvalidDimension(mesh.dim()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let mut cumulative = Vec::with_capacity(mesh.faces().len());
    let mut total = 0.0f64;
    for f in 0..mesh.faces().len() {
        total += triangle_area(&mesh.triangle(f)).to_f64_lossy();
        cumulative.push(total);
    }
    if !(total > 0.0) {
        return Err(Error::DegenerateMesh("total surface area is zero".into()));
    }
    let mut rng = seeded_rng(seed);
    let mut coords = Vec::with_capacity(3 * n);
    for _ in 0..n {
        let r = rng.gen::<f64>() * total;
        let f = cumulative.partition_point(|&c| c <= r).min(cumulative.len() - 1);
        let (r1, r2): (f64, f64) = (rng.gen(), rng.gen());
        let s = r1.sqrt();
        let (wa, wb, wc) = (1.0 - s, s * (1.0 - r2), s * r2);
        let [a, b, c] = mesh.triangle(f);
        for d in 0..3 {
            coords.push(a[d] * T::of(wa) + b[d] * T::of(wb) + c[d] * T::of(wc));
        }
    }
    PointSet::from_flat(3, coords)
}

/// `n` points drawn uniformly from the unit sphere surface.
pub fn sample_unit_sphere<T: Scalar>(n: usize, seed: u64) -> Result<PointSet<T>> {
    let mut rng = seeded_rng(seed);
    let mut coords = Vec::with_capacity(3 * n);
    for _ in 0..n {
        let z: f64 = rng.gen_range(-1.0..=1.0);
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let r = (1.0 - z * z).max(0.0).sqrt();
        coords.extend_from_slice(&[T::of(r * phi.cos()), T::of(r * phi.sin()), T::of(z)]);
    }
    PointSet::from_flat(3, coords)
}

/// Sorted uniform sample of `k` distinct indices from `0..n`.
pub fn sample_indices(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Vec<usize> {
    let mut idx = rand::seq::index::sample(rng, n, k).into_vec();
    idx.sort_unstable();
    idx
}
