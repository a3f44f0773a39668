use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::NnTables;
use crate::scalar::Scalar;

/// Inverted nearest-neighbour maps.
///
/// `p_of_v[i]` lists the ground-truth points whose nearest vertex is `i`;
/// `v_of_p[j]` lists the vertices whose nearest point is `j`. Both are in
/// ascending index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MappingStats {
    pub p_of_v: Vec<Vec<usize>>,
    pub v_of_p: Vec<Vec<usize>>,
}

impl MappingStats {
    pub fn point_counts(&self) -> Vec<usize> {
        self.p_of_v.iter().map(Vec::len).collect()
    }

    pub fn vertex_counts(&self) -> Vec<usize> {
        self.v_of_p.iter().map(Vec::len).collect()
    }
}

/// Inverts `index1` (point → vertex) and `index2` (vertex → point).
pub fn mapping_stats<T: Scalar>(tables: &NnTables<T>, n1: usize, n2: usize) -> Result<MappingStats> {
    if tables.index1.len() != n1 {
        return Err(Error::SizeMismatch { left: tables.index1.len(), right: n1 });
    }
    if tables.index2.len() != n2 {
        return Err(Error::SizeMismatch { left: tables.index2.len(), right: n2 });
    }
    let mut p_of_v = vec![Vec::new(); n2];
    for (j, &v) in tables.index1.iter().enumerate() {
        p_of_v
            .get_mut(v)
            .ok_or(Error::IndexOutOfRange { what: "vertex", index: v, len: n2 })?
            .push(j);
    }
    let mut v_of_p = vec![Vec::new(); n1];
    for (i, &p) in tables.index2.iter().enumerate() {
        v_of_p
            .get_mut(p)
            .ok_or(Error::IndexOutOfRange { what: "point", index: p, len: n1 })?
            .push(i);
    }
    Ok(MappingStats { p_of_v, v_of_p })
}

/// Bin labels of the per-vertex point-count histogram.
pub const DPVI_BINS: [&str; 9] = ["0", "1", "2", "3-10", "11-20", "21-30", "31-40", "41-50", "51-max"];

/// Histogram bin for a per-vertex point count.
pub fn dpvi_bin(count: usize) -> usize {
    match count {
        0..=2 => count,
        3..=10 => 3,
        11..=50 => 4 + (count - 11) / 10,
        _ => 8,
    }
}

/// Distribution of points per vertex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DpviHistogram {
    pub bins: Vec<String>,
    pub counts: Vec<usize>,
    pub raw: Vec<usize>,
}

impl DpviHistogram {
    pub fn fraction(&self, bin: usize) -> f64 {
        let total: usize = self.counts.iter().sum();
        self.counts[bin] as f64 / total.max(1) as f64
    }
}

pub fn dpvi_histogram(stats: &MappingStats) -> DpviHistogram {
    let raw = stats.point_counts();
    let mut counts = vec![0usize; DPVI_BINS.len()];
    for &c in &raw {
        counts[dpvi_bin(c)] += 1;
    }
    DpviHistogram { bins: DPVI_BINS.iter().map(|s| s.to_string()).collect(), counts, raw }
}
