//! Exact nearest-neighbour index over a [`PointSet`].
//!
//! A median-split kd-tree with small leaf buckets. Queries return the same
//! neighbour as an exhaustive scan, including the tie rule: among equally
//! distant candidates the lowest point index wins. Distances are computed
//! with [`dist2`] in coordinate order, so reported values are bit-identical
//! to the brute-force scan.

use crate::error::Result;
use crate::geometry::PointSet;
use crate::scalar::{dist2, Scalar};

const LEAF_SIZE: usize = 8;

#[derive(Debug, Clone)]
enum Node<T> {
    Leaf { start: usize, end: usize },
    Split { axis: usize, value: T, left: usize, right: usize },
}

/// Nearest neighbour result: point index and squared distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor<T> {
    pub index: usize,
    pub dist2: T,
}

/// Read-only spatial index; safe to share across threads.
#[derive(Debug, Clone)]
pub struct NnIndex<T> {
    points: PointSet<T>,
    order: Vec<usize>,
    nodes: Vec<Node<T>>,
}

impl<T: Scalar> NnIndex<T> {
    /// Builds the index. Fails with "empty point set" on empty input.
    pub fn build(points: &PointSet<T>) -> Result<Self> {
        points.require_non_empty()?;
        let mut index = Self {
            points: points.clone(),
            order: (0..points.len()).collect(),
            nodes: Vec::new(),
        };
        index.build_node(0, points.len());
        Ok(index)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &PointSet<T> {
        &self.points
    }

    fn build_node(&mut self, start: usize, end: usize) -> usize {
        let id = self.nodes.len();
        if end - start <= LEAF_SIZE {
            self.nodes.push(Node::Leaf { start, end });
            return id;
        }
        let axis = self.widest_axis(start, end);
        let mid = start + (end - start) / 2;
        let points = &self.points;
        self.order[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points.point(a)[axis]
                .partial_cmp(&points.point(b)[axis])
                .expect("coordinates are finite")
        });
        let value = self.points.point(self.order[mid])[axis];
        self.nodes.push(Node::Leaf { start, end });
        let left = self.build_node(start, mid);
        let right = self.build_node(mid, end);
        self.nodes[id] = Node::Split { axis, value, left, right };
        id
    }

    fn widest_axis(&self, start: usize, end: usize) -> usize {
        let dim = self.points.dim();
        let mut lo = vec![T::infinity(); dim];
        let mut hi = vec![T::neg_infinity(); dim];
        for &i in &self.order[start..end] {
            let p = self.points.point(i);
            for d in 0..dim {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        (0..dim)
            .max_by(|&a, &b| {
                (hi[a] - lo[a])
                    .partial_cmp(&(hi[b] - lo[b]))
                    .expect("finite extents")
                    .then(b.cmp(&a))
            })
            .unwrap_or(0)
    }

    /// Exact nearest neighbour of `query`.
    pub fn nearest(&self, query: &[T]) -> Neighbor<T> {
        self.nearest_excluding(query, None)
            .expect("index holds at least one point")
    }

    /// Nearest neighbour ignoring the point at `skip`. Returns `None` only
    /// when the index holds nothing but the skipped point.
    pub fn nearest_excluding(&self, query: &[T], skip: Option<usize>) -> Option<Neighbor<T>> {
        debug_assert_eq!(query.len(), self.points.dim());
        let mut best: Option<Neighbor<T>> = None;
        self.search(0, query, skip, &mut best);
        best
    }

    fn search(&self, node: usize, query: &[T], skip: Option<usize>, best: &mut Option<Neighbor<T>>) {
        match self.nodes[node] {
            Node::Leaf { start, end } => {
                for &i in &self.order[start..end] {
                    if Some(i) == skip {
                        continue;
                    }
                    let d = dist2(query, self.points.point(i));
                    let better = match best {
                        None => true,
                        Some(b) => d < b.dist2 || (d == b.dist2 && i < b.index),
                    };
                    if better {
                        *best = Some(Neighbor { index: i, dist2: d });
                    }
                }
            }
            Node::Split { axis, value, left, right } => {
                let diff = query[axis] - value;
                let (near, far) = if diff <= T::zero() { (left, right) } else { (right, left) };
                self.search(near, query, skip, best);
                // Equal bounds are still visited so lower-index ties are found.
                let visit_far = match best {
                    None => true,
                    Some(b) => diff * diff <= b.dist2,
                };
                if visit_far {
                    self.search(far, query, skip, best);
                }
            }
        }
    }
}
