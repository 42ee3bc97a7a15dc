//! Continuous elevation and vehicle attitude from the block grid.

use super::{DemGrid, TerrainError};
use crate::geom::Vec2;
use crate::scalar::{lit, to_f64, Real};

/// Rover pose resting on the terrain surface.
///
/// `pitch_deg` is positive nose-up when driving uphill along the heading;
/// `roll_deg` is positive when the terrain rises to the right of the heading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseOnTerrain<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub heading_deg: T,
    pub pitch_deg: T,
    pub roll_deg: T,
    /// Steepest inclination of the local surface, independent of heading.
    pub inclination_deg: T,
}

/// Interpolation stencil along one axis: lower index, upper index, fraction.
/// The fraction leaves `[0, 1]` in the outer half-blocks, which extends the
/// edge patch linearly instead of flattening it.
fn axis_stencil<T: Real>(coord: T, n: usize) -> (usize, usize, T) {
    if n == 1 {
        return (0, 0, T::zero());
    }
    let max_lower = (n - 2) as f64;
    let lower = to_f64(coord.floor()).clamp(0.0, max_lower);
    let i0 = lower as usize;
    (i0, i0 + 1, coord - lit::<T>(lower))
}

/// Elevation and attitude at `(x, y)` for a rover facing `heading_deg`.
///
/// Elevation is bilinear over the four surrounding block centers and the
/// surface gradient comes from the same patch. Attitude treats the rover as
/// a rigid body lying on the tangent plane with yaw `heading_deg`.
pub fn surface_query<T: Real>(
    dem: &DemGrid<T>,
    x: T,
    y: T,
    heading_deg: T,
) -> Result<PoseOnTerrain<T>, TerrainError> {
    if !dem.bounds().contains(Vec2::new(x, y)) {
        return Err(TerrainError::OutOfBounds {
            x: x.to_f64().unwrap_or(f64::NAN),
            y: y.to_f64().unwrap_or(f64::NAN),
        });
    }
    let half = lit::<T>(0.5);
    let cs = dem.cell_size();
    let u = (x - dem.origin().x) / cs - half;
    let v = (y - dem.origin().y) / cs - half;
    let (c0, c1, tx) = axis_stencil(u, dem.width());
    let (r0, r1, ty) = axis_stencil(v, dem.height());
    let z00 = dem.elevation(c0, r0);
    let z10 = dem.elevation(c1, r0);
    let z01 = dem.elevation(c0, r1);
    let z11 = dem.elevation(c1, r1);
    let one = T::one();

    let z = (one - ty) * ((one - tx) * z00 + tx * z10) + ty * ((one - tx) * z01 + tx * z11);
    let gx = if c0 == c1 {
        T::zero()
    } else {
        ((one - ty) * (z10 - z00) + ty * (z11 - z01)) / cs
    };
    let gy = if r0 == r1 {
        T::zero()
    } else {
        ((one - tx) * (z01 - z00) + tx * (z11 - z10)) / cs
    };

    let forward = Vec2::from_heading_deg(heading_deg);
    let right = Vec2::new(forward.y, -forward.x);
    let grad = Vec2::new(gx, gy);
    let slope_fwd = grad.dot(forward);
    let slope_right = grad.dot(right);
    let grad_sq = gx * gx + gy * gy;

    let pitch_deg = slope_fwd.atan().to_degrees();
    // sine of roll = vertical component of the body's right axis
    let sin_roll = slope_right / ((one + grad_sq) * (one + slope_fwd * slope_fwd)).sqrt();
    let roll_deg = sin_roll.max(-one).min(one).asin().to_degrees();

    Ok(PoseOnTerrain {
        x,
        y,
        z,
        heading_deg,
        pitch_deg,
        roll_deg,
        inclination_deg: grad_sq.sqrt().atan().to_degrees(),
    })
}
