use crate::error::{Error, Result};
use crate::geometry::PointSet;
use crate::scalar::Scalar;

/// Vertices plus connectivity. Faces are triangles in 3D and edge segments
/// in 2D; each face is stored as a short list of vertex indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh<T> {
    vertices: PointSet<T>,
    faces: Vec<Vec<usize>>,
}

impl<T: Scalar> Mesh<T> {
    pub fn new(vertices: PointSet<T>, faces: Vec<Vec<usize>>) -> Result<Self> {
        let arity = Self::face_arity(vertices.dim());
        let n = vertices.len();
        for (fi, face) in faces.iter().enumerate() {
            if face.len() != arity {
                return Err(Error::InvalidFace {
                    face: fi,
                    reason: format!("expected {arity} indices for a {}D mesh, got {}", vertices.dim(), face.len()),
                });
            }
            for &v in face {
                if v >= n {
                    return Err(Error::InvalidFace {
                        face: fi,
                        reason: format!("vertex index {v} out of range ({n} vertices)"),
                    });
                }
            }
            for a in 0..face.len() {
                for b in a + 1..face.len() {
                    if face[a] == face[b] {
                        return Err(Error::InvalidFace {
                            face: fi,
                            reason: format!("repeats vertex {}", face[a]),
                        });
                    }
                }
            }
        }
        Ok(Self { vertices, faces })
    }

    /// Number of indices per face for a given dimension.
    pub fn face_arity(dim: usize) -> usize {
        if dim == 3 {
            3
        } else {
            2
        }
    }

    pub fn vertices(&self) -> &PointSet<T> {
        &self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn dim(&self) -> usize {
        self.vertices.dim()
    }

    /// Replaces vertex positions while keeping connectivity.
    pub fn with_vertices(&self, vertices: PointSet<T>) -> Result<Self> {
        if vertices.len() != self.vertices.len() {
            return Err(Error::SizeMismatch { left: self.vertices.len(), right: vertices.len() });
        }
        self.vertices.require_same_dim(&vertices)?;
        Ok(Self { vertices, faces: self.faces.clone() })
    }

    pub fn vertices_mut(&mut self) -> &mut PointSet<T> {
        &mut self.vertices
    }

    /// Corner positions of a triangle face (3D meshes only).
    pub fn triangle(&self, f: usize) -> [[T; 3]; 3] {
        let face = &self.faces[f];
        let corner = |k: usize| {
            let p = self.vertices.point(face[k]);
            [p[0], p[1], p[2]]
        };
        [corner(0), corner(1), corner(2)]
    }

    /// Unique undirected edges, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for face in &self.faces {
            let k = face.len();
            let count = if k == 2 { 1 } else { k };
            for i in 0..count {
                let (a, b) = (face[i], face[(i + 1) % k]);
                edges.push((a.min(b), a.max(b)));
            }
        }
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn cast<U: Scalar>(&self) -> Mesh<U> {
        Mesh { vertices: self.vertices.cast(), faces: self.faces.clone() }
    }
}
