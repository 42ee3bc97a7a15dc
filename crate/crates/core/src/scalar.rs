//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating point scalar the planning and simulation code is generic over.
///
/// Implemented for `f32` and `f64`. Everything that touches files or the
/// command line works in `f64`; the aliases at the crate root name the
/// concrete instantiations.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
}

/// Converts an `f64` constant into the working scalar.
#[inline]
pub fn lit<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 constant representable in scalar type")
}

#[inline]
pub fn from_usize<T: Real>(v: usize) -> T {
    T::from_usize(v).expect("usize representable in scalar type")
}

#[inline]
pub fn to_f64<T: Real>(v: T) -> f64 {
    v.to_f64().expect("scalar convertible to f64")
}

/// Wraps an angle in degrees to `[-180, 180)`.
pub fn wrap_deg<T: Real>(angle: T) -> T {
    let full = lit::<T>(360.0);
    let half = lit::<T>(180.0);
    let wrapped = angle - full * ((angle + half) / full).floor();
    // floor() rounding can land exactly on +180 for inputs just below it
    if wrapped >= half {
        wrapped - full
    } else {
        wrapped
    }
}

/// Absolute angular difference wrapped to `[0, 180]` degrees.
pub fn angle_diff_abs_deg<T: Real>(a: T, b: T) -> T {
    wrap_deg(a - b).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wrap_covers_both_signs() {
        assert_eq!(wrap_deg(190.0_f64), -170.0);
        assert_eq!(wrap_deg(-190.0_f64), 170.0);
        assert_eq!(wrap_deg(180.0_f64), -180.0);
        assert_eq!(wrap_deg(-180.0_f64), -180.0);
        assert_eq!(wrap_deg(720.0_f32), 0.0);
    }

    #[test]
    fn angle_diff_is_shortest_way_round() {
        assert_eq!(angle_diff_abs_deg(170.0_f64, -170.0), 20.0);
        assert_eq!(angle_diff_abs_deg(0.0_f64, 180.0), 180.0);
    }
}
