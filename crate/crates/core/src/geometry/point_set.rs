use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// An ordered collection of 2D or 3D points stored as a flat coordinate buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<T> {
    coords: Vec<T>,
    dim: usize,
}

impl<T: Scalar> PointSet<T> {
    /// Builds a point set from a flat buffer `[x0, y0, (z0), x1, ...]`.
    pub fn from_flat(dim: usize, coords: Vec<T>) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidDimension(dim));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::RaggedCoordinates { len: coords.len(), dim });
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index: pos / dim });
        }
        Ok(Self { coords, dim })
    }

    pub fn from_points<P: AsRef<[T]>>(dim: usize, points: &[P]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Self::from_flat(dim, coords)
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::from_flat(dim, Vec::new())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn point_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[T]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[T] {
        &self.coords
    }

    pub(crate) fn as_flat_mut(&mut self) -> &mut [T] {
        &mut self.coords
    }

    pub fn push(&mut self, p: &[T]) -> Result<()> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: p.len() });
        }
        if !p.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite { index: self.len() });
        }
        self.coords.extend_from_slice(p);
        Ok(())
    }

    /// New set holding the points at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        for &i in indices {
            coords.extend_from_slice(self.point(i));
        }
        Self { coords, dim: self.dim }
    }

    pub fn all_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn centroid(&self) -> Vec<T> {
        let mut c = vec![T::zero(); self.dim];
        for p in self.iter() {
            for (acc, x) in c.iter_mut().zip(p) {
                *acc += *x;
            }
        }
        let n = T::of(self.len().max(1) as f64);
        c.iter_mut().for_each(|x| *x /= n);
        c
    }

    /// Axis-aligned bounds as `(min, max)`; `None` when empty.
    pub fn bounds(&self) -> Option<(Vec<T>, Vec<T>)> {
        let mut it = self.iter();
        let first = it.next()?;
        let mut lo = first.to_vec();
        let mut hi = first.to_vec();
        for p in it {
            for d in 0..self.dim {
                lo[d] = lo[d].min(p[d]);
                hi[d] = hi[d].max(p[d]);
            }
        }
        Some((lo, hi))
    }

    /// Applies `f` to every point in place.
    pub fn map_in_place(&mut self, mut f: impl FnMut(&mut [T])) {
        for p in self.coords.chunks_exact_mut(self.dim) {
            f(p);
        }
    }

    pub fn translated(&self, offset: &[T]) -> Self {
        let mut out = self.clone();
        out.map_in_place(|p| p.iter_mut().zip(offset).for_each(|(x, o)| *x += *o));
        out
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> PointSet<U> {
        PointSet {
            coords: self.coords.iter().map(|c| U::of(c.to_f64_lossy())).collect(),
            dim: self.dim,
        }
    }

    pub(crate) fn require_non_empty(&self) -> Result<()> {
        if self.is_empty() {
            Err(Error::EmptyPointSet)
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            Err(Error::DimensionMismatch { expected: self.dim, found: other.dim })
        } else {
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(PointSet::<f64>::from_flat(4, vec![]), Err(Error::InvalidDimension(4))));
        assert!(matches!(
            PointSet::from_flat(3, vec![0.0, 1.0]),
            Err(Error::RaggedCoordinates { .. })
        ));
        assert!(matches!(
            PointSet::from_flat(2, vec![0.0, 1.0, f64::NAN, 0.0]),
            Err(Error::NonFinite { index: 1 })
        ));
        assert!(PointSet::from_points(3, &[[0.0, 1.0]]).is_err());
    }

    #[test]
    fn accessors() {
        let s = PointSet::from_points(2, &[[0.0, 1.0], [2.0, 3.0], [4.0, -1.0]]).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.point(1), &[2.0, 3.0]);
        assert_eq!(s.centroid(), vec![2.0, 1.0]);
        let (lo, hi) = s.bounds().unwrap();
        assert_eq!((lo, hi), (vec![0.0, -1.0], vec![4.0, 3.0]));
        assert_eq!(s.select(&[2, 0]).as_flat(), &[4.0, -1.0, 0.0, 1.0]);
        let f: PointSet<f32> = s.cast();
        assert_eq!(f.point(2), &[4.0f32, -1.0]);
    }
}
