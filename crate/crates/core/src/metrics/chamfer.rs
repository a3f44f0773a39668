use crate::error::Result;
use crate::geometry::{nn_tables, NnTables, PointSet};
use crate::scalar::Scalar;

/// Chamfer distance with its two directional summands.
///
/// `part1` averages squared distances from ground-truth points to their
/// nearest vertex, `part2` from vertices to their nearest point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChamferResult<T> {
    pub total: T,
    pub part1: T,
    pub part2: T,
    pub tables: NnTables<T>,
}

pub(crate) fn mean<T: Scalar>(values: &[T]) -> T {
    let sum: T = values.iter().copied().sum();
    sum / T::of(values.len() as f64)
}

/// Chamfer distance between ground truth `s1` and vertex set `s2`.
pub fn chamfer<T: Scalar>(s1: &PointSet<T>, s2: &PointSet<T>) -> Result<ChamferResult<T>> {
    let tables = nn_tables(s1, s2)?;
    Ok(chamfer_from_tables(tables))
}

pub(crate) fn chamfer_from_tables<T: Scalar>(tables: NnTables<T>) -> ChamferResult<T> {
    let part1 = mean(&tables.dist1);
    let part2 = mean(&tables.dist2);
    ChamferResult { total: part1 + part2, part1, part2, tables }
}
