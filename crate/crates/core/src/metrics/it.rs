use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Mesh;
use crate::metrics::intersect::{segments_cross_2d, tri_tri_intersect};
use crate::scalar::Scalar;

/// Faces that intersect some other face they share no vertex with.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ItReport {
    pub f_it: usize,
    pub v_it: usize,
    pub it_faces: Vec<usize>,
}

impl ItReport {
    fn from_flags<T: Scalar>(mesh: &Mesh<T>, flagged: &[bool]) -> Self {
        let it_faces: Vec<usize> = flagged.iter().enumerate().filter(|(_, &f)| f).map(|(i, _)| i).collect();
        let mut verts: Vec<usize> = it_faces.iter().flat_map(|&f| mesh.faces()[f].iter().copied()).collect();
        verts.sort_unstable();
        verts.dedup();
        Self { f_it: it_faces.len(), v_it: verts.len(), it_faces }
    }
}

fn shares_vertex(a: &[usize], b: &[usize]) -> bool {
    a.iter().any(|v| b.contains(v))
}

fn validate<T: Scalar>(mesh: &Mesh<T>) -> Result<()> {
    let n = mesh.vertices().len();
    for (fi, f) in mesh.faces().iter().enumerate() {
        if let Some(&bad) = f.iter().find(|&&v| v >= n) {
            return Err(Error::InvalidFace { face: fi, reason: format!("vertex index {bad} out of range") });
        }
    }
    Ok(())
}

fn faces_intersect<T: Scalar>(mesh: &Mesh<T>, i: usize, j: usize) -> bool {
    let (fa, fb) = (&mesh.faces()[i], &mesh.faces()[j]);
    if shares_vertex(fa, fb) {
        return false;
    }
    if mesh.dim() == 3 {
        tri_tri_intersect(&mesh.triangle(i), &mesh.triangle(j))
    } else {
        let v = mesh.vertices();
        let p = |k: usize| [v.point(k)[0], v.point(k)[1]];
        segments_cross_2d(&p(fa[0]), &p(fa[1]), &p(fb[0]), &p(fb[1]))
    }
}

/// Self-intersection counts for a mesh.
///
/// Candidate face pairs come from a sort-and-sweep over axis-aligned face
/// bounds; only pairs whose bounds overlap and that share no vertex reach
/// the exact predicate. 3D meshes use the triangle test, 2D meshes the
/// proper segment crossing test.
pub fn it_metrics<T: Scalar>(mesh: &Mesh<T>) -> Result<ItReport> {
    validate(mesh)?;
    let dim = mesh.dim();
    let nf = mesh.faces().len();
    let v = mesh.vertices();
    let mut lo = vec![T::zero(); nf * dim];
    let mut hi = vec![T::zero(); nf * dim];
    for (f, face) in mesh.faces().iter().enumerate() {
        for d in 0..dim {
            let coords = face.iter().map(|&k| v.point(k)[d]);
            lo[f * dim + d] = coords.clone().fold(T::infinity(), T::min);
            hi[f * dim + d] = coords.fold(T::neg_infinity(), T::max);
        }
    }
    let mut order: Vec<usize> = (0..nf).collect();
    order.sort_by(|&a, &b| lo[a * dim].partial_cmp(&lo[b * dim]).expect("finite").then(a.cmp(&b)));

    let mut flagged = vec![false; nf];
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if lo[j * dim] > hi[i * dim] {
                break;
            }
            if flagged[i] && flagged[j] {
                continue;
            }
            let overlap = (1..dim).all(|d| lo[j * dim + d] <= hi[i * dim + d] && lo[i * dim + d] <= hi[j * dim + d]);
            if overlap && faces_intersect(mesh, i, j) {
                flagged[i] = true;
                flagged[j] = true;
            }
        }
    }
    Ok(ItReport::from_flags(mesh, &flagged))
}

/// Reference implementation testing every face pair without pruning.
pub fn it_metrics_all_pairs<T: Scalar>(mesh: &Mesh<T>) -> Result<ItReport> {
    validate(mesh)?;
    let nf = mesh.faces().len();
    let mut flagged = vec![false; nf];
    for i in 0..nf {
        for j in i + 1..nf {
            if faces_intersect(mesh, i, j) {
                flagged[i] = true;
                flagged[j] = true;
            }
        }
    }
    Ok(ItReport::from_flags(mesh, &flagged))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{make_box, make_icosphere, PointSet};

    fn tetra(offset: [f64; 3], scale: f64) -> (Vec<[f64; 3]>, Vec<Vec<usize>>) {
        let base = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let v = base
            .iter()
            .map(|p| [p[0] * scale + offset[0], p[1] * scale + offset[1], p[2] * scale + offset[2]])
            .collect();
        (v, vec![vec![0, 2, 1], vec![0, 1, 3], vec![1, 2, 3], vec![0, 3, 2]])
    }

    fn two_tetrahedra(offset: [f64; 3]) -> Mesh<f64> {
        let (mut v, mut f) = tetra([0.0; 3], 1.0);
        let (v2, f2) = tetra(offset, 1.0);
        v.extend(v2);
        f.extend(f2.into_iter().map(|face| face.into_iter().map(|k| k + 4).collect()));
        Mesh::new(PointSet::from_points(3, &v).unwrap(), f).unwrap()
    }

    #[test]
    fn convex_meshes_are_clean() {
        for k in 0..=3 {
            let m: Mesh<f64> = make_icosphere(k).unwrap();
            let r = it_metrics(&m).unwrap();
            assert_eq!((r.f_it, r.v_it), (0, 0));
        }
        let b: Mesh<f64> = make_box([1.0, 2.0, 0.5]).unwrap();
        assert_eq!(it_metrics(&b).unwrap().f_it, 0);
    }

    #[test]
    fn interpenetrating_tetrahedra() {
        let m = two_tetrahedra([0.2, 0.2, 0.2]);
        let pruned = it_metrics(&m).unwrap();
        let brute = it_metrics_all_pairs(&m).unwrap();
        assert_eq!(pruned, brute);
        assert!(pruned.f_it > 0);
        // separated copies do not intersect
        let apart = two_tetrahedra([3.0, 0.0, 0.0]);
        assert_eq!(it_metrics(&apart).unwrap().f_it, 0);
    }

    #[test]
    fn crossing_2d_loop() {
        // figure-eight: edges (0,1) and (2,3) cross
        let v = PointSet::from_points(2, &[[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]]).unwrap();
        let m = Mesh::new(v, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap();
        let r = it_metrics(&m).unwrap();
        assert_eq!(r.it_faces, vec![0, 2]);
        assert_eq!((r.f_it, r.v_it), (2, 4));
        assert_eq!(r, it_metrics_all_pairs(&m).unwrap());
        // convex square loop has no crossing
        let v = PointSet::from_points(2, &[[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap();
        let m = Mesh::new(v, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]]).unwrap();
        assert_eq!(it_metrics(&m).unwrap().f_it, 0);
    }
}
