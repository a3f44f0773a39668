use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating point coordinate type: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from a configuration value.
    #[inline]
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every float type")
    }

    /// Lossy conversion to `f64` for reporting.
    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance applied to orientation determinants, before scaling by the
    /// geometry's characteristic length.
    #[inline]
    fn orientation_eps() -> Self {
        let floor = Self::of(1e-12);
        let machine = Self::epsilon() * Self::of(16.0);
        floor.max(machine)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Squared Euclidean distance between two coordinate slices of equal length.
#[inline]
pub fn dist2<T: Scalar>(a: &[T], b: &[T]) -> T {
    let mut acc = T::zero();
    for (x, y) in a.iter().zip(b) {
        let d = *x - *y;
        acc += d * d;
    }
    acc
}

/// Number of elements selected by a fraction of `n`, rounded up.
///
/// Products that land within 1e-9 of an integer snap to it, so `0.3 * 10`
/// selects exactly 3 even though the floating point product is slightly above.
pub fn ceil_fraction(fraction: f64, n: usize) -> usize {
    let x = fraction * n as f64;
    let r = x.round();
    let k = if (x - r).abs() < 1e-9 { r } else { x.ceil() };
    k.max(0.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_fraction_snaps_near_integers() {
        assert_eq!(ceil_fraction(0.3, 10), 3);
        assert_eq!(ceil_fraction(0.31, 10), 4);
        assert_eq!(ceil_fraction(0.0, 10), 0);
        assert_eq!(ceil_fraction(0.08, 80), 7);
        assert_eq!(ceil_fraction(0.01, 81), 1);
    }

    #[test]
    fn dist2_matches_manual() {
        assert_eq!(dist2(&[0.0, 0.0, 0.0], &[1.0, 2.0, 2.0]), 9.0);
        assert_eq!(dist2(&[1.0f32, 1.0], &[1.0, 1.0]), 0.0);
    }
}
