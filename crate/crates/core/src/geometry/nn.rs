use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{NnIndex, PointSet};
use crate::scalar::Scalar;

/// Bidirectional nearest-neighbour tables between a ground-truth set S1 and
/// a vertex set S2. Distances are squared.
///
/// `index1[j]` is the vertex nearest to point `j` and `index2[i]` the point
/// nearest to vertex `i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NnTables<T> {
    pub dist1: Vec<T>,
    pub index1: Vec<usize>,
    pub dist2: Vec<T>,
    pub index2: Vec<usize>,
}

impl<T: Scalar> NnTables<T> {
    pub fn len1(&self) -> usize {
        self.dist1.len()
    }

    pub fn len2(&self) -> usize {
        self.dist2.len()
    }
}

/// Nearest-neighbour tables in both directions between `s1` and `s2`.
pub fn nn_tables<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>) -> Result<NnTables<T>> {
    s1.require_same_dim(s2)?;
    let index_s2 = NnIndex::build(s2)?;
    let index_s1 = NnIndex::build(s1)?;
    let (dist1, index1) = query_all(&index_s2, s1);
    let (dist2, index2) = query_all(&index_s1, s2);
    Ok(NnTables { dist1, index1, dist2, index2 })
}

fn query_all<T: Scalar>(index: &NnIndex<T>, queries: &PointSet<T>) -> (Vec<T>, Vec<usize>) {
    queries
        .iter()
        .map(|q| {
            let nb = index.nearest(q);
            (nb.dist2, nb.index)
        })
        .unzip()
}

/// For every point, its nearest other point in the same set (self excluded).
pub fn self_nearest<T: Scalar>(s: &PointSet<T>) -> Result<Vec<(usize, T)>> {
    if s.len() < 2 {
        return Err(Error::TooFewPoints { needed: 2, found: s.len() });
    }
    let index = NnIndex::build(s)?;
    Ok(s.iter()
        .enumerate()
        .map(|(i, p)| {
            let nb = index.nearest_excluding(p, Some(i)).expect("at least two points");
            (nb.index, nb.dist2)
        })
        .collect())
}

/// Mean Euclidean (unsquared) distance from each point to its nearest other
/// point in the same set.
pub fn mean_nn_distance<T: Scalar>(s: &PointSet<T>) -> Result<T> {
    let nearest = self_nearest(s)?;
    let total: T = nearest.iter().map(|&(_, d2)| d2.sqrt()).sum();
    Ok(total / T::of(nearest.len() as f64))
}
