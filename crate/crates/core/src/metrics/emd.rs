//! Exact earth mover's distance between equal-size point sets.
//!
//! The optimal one-to-one assignment is found with the shortest augmenting
//! path form of the Hungarian algorithm (O(n³)), with costs evaluated on the
//! fly so no n×n matrix is stored.

use crate::error::{Error, Result};
use crate::geometry::{sample_indices, seeded_rng, PointSet};
use crate::scalar::{dist2, Scalar};

/// Largest set size accepted by the exact solver unless overridden.
pub const DEFAULT_EMD_CAP: usize = 4096;

/// Minimum-cost perfect assignment for an `n × n` cost function.
///
/// Returns `assignment[row] = column`.
pub fn min_cost_assignment<T: Scalar>(n: usize, cost: impl Fn(usize, usize) -> T) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    // 1-based potentials with a virtual column 0.
    let inf = T::infinity();
    let mut u = vec![T::zero(); n + 1];
    let mut v = vec![T::zero(); n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![inf; n + 1];
    let mut used = vec![false; n + 1];
    for row in 1..=n {
        matched_row[0] = row;
        let mut col0 = 0usize;
        minv.iter_mut().for_each(|m| *m = inf);
        used.iter_mut().for_each(|u| *u = false);
        loop {
            used[col0] = true;
            let r = matched_row[col0];
            let mut delta = inf;
            let mut col1 = 0usize;
            for col in 1..=n {
                if used[col] {
                    continue;
                }
                let reduced = cost(r - 1, col - 1) - u[r] - v[col];
                if reduced < minv[col] {
                    minv[col] = reduced;
                    way[col] = col0;
                }
                if minv[col] < delta {
                    delta = minv[col];
                    col1 = col;
                }
            }
            for col in 0..=n {
                if used[col] {
                    u[matched_row[col]] += delta;
                    v[col] -= delta;
                } else {
                    minv[col] -= delta;
                }
            }
            col0 = col1;
            if matched_row[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            matched_row[col0] = matched_row[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for col in 1..=n {
        assignment[matched_row[col] - 1] = col - 1;
    }
    assignment
}

/// Exact EMD with the default size cap.
pub fn emd_exact<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>) -> Result<T> {
    emd_exact_capped(s1, s2, DEFAULT_EMD_CAP)
}

/// Mean Euclidean cost of the optimal bijection between `s1` and `s2`.
pub fn emd_exact_capped<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>, cap: usize) -> Result<T> {
    s1.require_same_dim(s2)?;
    s1.require_non_empty()?;
    if s1.len() != s2.len() {
        return Err(Error::SizeMismatch { left: s1.len(), right: s2.len() });
    }
    let n = s1.len();
    if n > cap {
        return Err(Error::EmdCapExceeded { n, cap });
    }
    let cost = |i: usize, j: usize| dist2(s1.point(i), s2.point(j)).sqrt();
    let assignment = min_cost_assignment(n, cost);
    let total: T = assignment.iter().enumerate().map(|(i, &j)| cost(i, j)).sum();
    Ok(total / T::of(n as f64))
}

/// Subsamples both sets to `n` points with a fixed seed and returns the
/// exact EMD of the subsamples.
pub fn emd_subsampled<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>, n: usize, seed: u64) -> Result<T> {
    emd_subsampled_capped(s1, s2, n, seed, DEFAULT_EMD_CAP)
}

pub fn emd_subsampled_capped<T: Scalar>(
    s1: &PointSet<T>,
    s2: &PointSet<T>,
    n: usize,
    seed: u64,
    cap: usize,
) -> Result<T> {
    let (a, b) = subsample_pair(s1, s2, n, seed)?;
    emd_exact_capped(&a, &b, cap)
}

/// The subsampled pair used by [`emd_subsampled`]. Sets already of size `n`
/// are used whole.
pub fn subsample_pair<T: Scalar>(
    s1: &PointSet<T>,
    s2: &PointSet<T>,
    n: usize,
    seed: u64,
) -> Result<(PointSet<T>, PointSet<T>)> {
    if n == 0 {
        return Err(Error::InvalidParameter("EMD subsample size must be at least 1".into()));
    }
    if n > s1.len().min(s2.len()) {
        return Err(Error::InvalidParameter(format!(
            "EMD subsample size {n} exceeds the smaller set ({})",
            s1.len().min(s2.len())
        )));
    }
    let mut rng = seeded_rng(seed);
    let mut pick = |s: &PointSet<T>| {
        if s.len() == n {
            s.clone()
        } else {
            s.select(&sample_indices(&mut rng, s.len(), n))
        }
    };
    let a = pick(s1);
    let b = pick(s2);
    Ok((a, b))
}
