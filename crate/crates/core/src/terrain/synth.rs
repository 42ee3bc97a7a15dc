//! Seeded synthetic terrain built from octaves of smoothed value noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{DemGrid, TerrainError};
use crate::geom::Vec2;
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Shape of the synthetic relief.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Roughness<T> {
    /// Peak amplitude of the coarsest octave, m.
    pub amplitude_m: T,
    /// Lattice spacing of the coarsest octave, m.
    pub wavelength_m: T,
    pub octaves: usize,
    /// Amplitude ratio between successive octaves.
    pub persistence: T,
    /// Wavelength ratio between successive octaves.
    pub lacunarity: T,
}

impl<T: Real> Default for Roughness<T> {
    fn default() -> Self {
        Self {
            amplitude_m: lit(1.5),
            wavelength_m: lit(24.0),
            octaves: 4,
            persistence: lit(0.45),
            lacunarity: lit(2.0),
        }
    }
}

/// Quintic fade; C2 continuous so slopes are smooth across lattice lines.
fn fade<T: Real>(t: T) -> T {
    t * t * t * (t * (t * lit(6.0) - lit(15.0)) + lit(10.0))
}

struct Lattice<T> {
    nx: usize,
    values: Vec<T>,
}

impl<T: Real> Lattice<T> {
    fn at(&self, i: usize, j: usize) -> T {
        self.values[j * self.nx + i]
    }

    /// Smoothly interpolated value at lattice coordinates `(u, v)` (both >= 0).
    fn sample(&self, u: T, v: T) -> T {
        let (fu, fv) = (u.floor(), v.floor());
        let (i, j) = (to_f64(fu) as usize, to_f64(fv) as usize);
        let (sx, sy) = (fade(u - fu), fade(v - fv));
        let a = self.at(i, j) + sx * (self.at(i + 1, j) - self.at(i, j));
        let b = self.at(i, j + 1) + sx * (self.at(i + 1, j + 1) - self.at(i, j + 1));
        a + sy * (b - a)
    }
}

/// Deterministic synthetic elevation grid with origin `(0, 0)`.
pub fn synth_terrain<T: Real>(
    seed: u64,
    width: usize,
    height: usize,
    cell_size: T,
    roughness: &Roughness<T>,
) -> Result<DemGrid<T>, TerrainError> {
    if width == 0 || height == 0 {
        return Err(TerrainError::ZeroDimension { width, height });
    }
    if !(cell_size > T::zero() && cell_size.is_finite()) {
        return Err(TerrainError::BadCellSize);
    }
    let extent_x = from_usize::<T>(width) * cell_size;
    let extent_y = from_usize::<T>(height) * cell_size;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut octaves = Vec::with_capacity(roughness.octaves);
    let mut wavelength = roughness.wavelength_m;
    let mut amplitude = roughness.amplitude_m;
    for _ in 0..roughness.octaves {
        let nx = to_f64((extent_x / wavelength).ceil()) as usize + 2;
        let ny = to_f64((extent_y / wavelength).ceil()) as usize + 2;
        let values = (0..nx * ny)
            .map(|_| lit::<T>(rng.random_range(-1.0..=1.0)))
            .collect();
        octaves.push((wavelength, amplitude, Lattice { nx, values }));
        wavelength = wavelength / roughness.lacunarity;
        amplitude = amplitude * roughness.persistence;
    }

    DemGrid::from_fn(Vec2::zero(), cell_size, width, height, |x, y| {
        octaves
            .iter()
            .map(|(wl, amp, lattice)| *amp * lattice.sample(x / *wl, y / *wl))
            .fold(T::zero(), |acc, v| acc + v)
    })
}
