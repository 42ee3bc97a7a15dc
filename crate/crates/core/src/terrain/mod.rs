//! Elevation grids, worst-case slope analysis and traversability classes.
//!
//! A [`DemGrid`] stores one elevation per square block. Block `(col, row)`
//! covers `[x0 + col*cs, x0 + (col+1)*cs] x [y0 + row*cs, y0 + (row+1)*cs]`,
//! so row 0 is the southern (minimum y) edge of the map.

mod dem_io;
mod surface;
mod synth;

pub use dem_io::{load_dem, parse_dem, write_dem};
pub use surface::{surface_query, PoseOnTerrain};
pub use synth::{synth_terrain, Roughness};

use thiserror::Error;

use crate::geom::{Rect, Vec2};
use crate::scalar::{from_usize, lit, Real};

#[derive(Debug, Error)]
pub enum TerrainError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("grid dimensions must be positive (got {width}x{height})")]
    ZeroDimension { width: usize, height: usize },
    #[error("cell size must be positive and finite")]
    BadCellSize,
    #[error("expected {expected} elevation values, got {got}")]
    ElevationCount { expected: usize, got: usize },
    #[error("non-finite elevation at block ({col}, {row})")]
    NonFinite { col: usize, row: usize },
    #[error("invalid thresholds: need 0 < high_risk ({high_risk}) < impassable ({impassable}) <= 90")]
    InvalidThresholds { high_risk: f64, impassable: f64 },
    #[error("traversability map is empty")]
    EmptyMap,
    #[error("point ({x}, {y}) lies outside the grid")]
    OutOfBounds { x: f64, y: f64 },
}

/// Uniform elevation raster.
#[derive(Debug, Clone, PartialEq)]
pub struct DemGrid<T> {
    origin: Vec2<T>,
    cell_size: T,
    width: usize,
    height: usize,
    elevation: Vec<T>,
}

impl<T: Real> DemGrid<T> {
    pub fn new(
        origin: Vec2<T>,
        cell_size: T,
        width: usize,
        height: usize,
        elevation: Vec<T>,
    ) -> Result<Self, TerrainError> {
        if width == 0 || height == 0 {
            return Err(TerrainError::ZeroDimension { width, height });
        }
        if !(cell_size > T::zero() && cell_size.is_finite()) {
            return Err(TerrainError::BadCellSize);
        }
        if elevation.len() != width * height {
            return Err(TerrainError::ElevationCount {
                expected: width * height,
                got: elevation.len(),
            });
        }
        if let Some(i) = elevation.iter().position(|z| !z.is_finite()) {
            return Err(TerrainError::NonFinite {
                col: i % width,
                row: i / width,
            });
        }
        Ok(Self {
            origin,
            cell_size,
            width,
            height,
            elevation,
        })
    }

    pub fn flat(cell_size: T, width: usize, height: usize) -> Result<Self, TerrainError> {
        Self::new(
            Vec2::zero(),
            cell_size,
            width,
            height,
            vec![T::zero(); width * height],
        )
    }

    /// Builds a grid by sampling `f(x, y)` at every block center.
    pub fn from_fn(
        origin: Vec2<T>,
        cell_size: T,
        width: usize,
        height: usize,
        f: impl Fn(T, T) -> T,
    ) -> Result<Self, TerrainError> {
        let half = lit::<T>(0.5);
        let mut elevation = Vec::with_capacity(width * height);
        for row in 0..height {
            let y = origin.y + (from_usize::<T>(row) + half) * cell_size;
            for col in 0..width {
                let x = origin.x + (from_usize::<T>(col) + half) * cell_size;
                elevation.push(f(x, y));
            }
        }
        Self::new(origin, cell_size, width, height, elevation)
    }

    pub fn origin(&self) -> Vec2<T> {
        self.origin
    }

    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn elevations(&self) -> &[T] {
        &self.elevation
    }

    pub fn elevation(&self, col: usize, row: usize) -> T {
        self.elevation[row * self.width + col]
    }

    /// World extent `(width * cell_size, height * cell_size)`.
    pub fn extent(&self) -> (T, T) {
        (
            from_usize::<T>(self.width) * self.cell_size,
            from_usize::<T>(self.height) * self.cell_size,
        )
    }

    pub fn bounds(&self) -> Rect<T> {
        let (w, h) = self.extent();
        Rect::from_origin_size(self.origin, w, h)
    }

    pub fn cell_center(&self, col: usize, row: usize) -> Vec2<T> {
        let half = lit::<T>(0.5);
        Vec2::new(
            self.origin.x + (from_usize::<T>(col) + half) * self.cell_size,
            self.origin.y + (from_usize::<T>(row) + half) * self.cell_size,
        )
    }

    /// Block containing a world point; points on the outer edge map to the last block.
    pub fn cell_of(&self, p: Vec2<T>) -> Option<(usize, usize)> {
        if !self.bounds().contains(p) {
            return None;
        }
        let col = ((p.x - self.origin.x) / self.cell_size).floor().to_usize()?;
        let row = ((p.y - self.origin.y) / self.cell_size).floor().to_usize()?;
        Some((col.min(self.width - 1), row.min(self.height - 1)))
    }

    /// Returns a new grid with `f` applied to every elevation.
    pub fn map_elevation(&self, f: impl Fn(T) -> T) -> Result<Self, TerrainError> {
        Self::new(
            self.origin,
            self.cell_size,
            self.width,
            self.height,
            self.elevation.iter().map(|&z| f(z)).collect(),
        )
    }
}

/// Slope limits in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraversabilityThresholds<T> {
    pub high_risk_deg: T,
    pub impassable_deg: T,
}

impl<T: Real> Default for TraversabilityThresholds<T> {
    fn default() -> Self {
        Self {
            high_risk_deg: lit(10.0),
            impassable_deg: lit(15.0),
        }
    }
}

impl<T: Real> TraversabilityThresholds<T> {
    pub fn new(high_risk_deg: T, impassable_deg: T) -> Result<Self, TerrainError> {
        let t = Self {
            high_risk_deg,
            impassable_deg,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), TerrainError> {
        let ok = self.high_risk_deg > T::zero()
            && self.high_risk_deg < self.impassable_deg
            && self.impassable_deg <= lit(90.0);
        if ok {
            Ok(())
        } else {
            Err(TerrainError::InvalidThresholds {
                high_risk: self.high_risk_deg.to_f64().unwrap_or(f64::NAN),
                impassable: self.impassable_deg.to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    pub fn class_of(&self, slope_deg: T) -> TerrainClass {
        if slope_deg >= self.impassable_deg {
            TerrainClass::Impassable
        } else if slope_deg >= self.high_risk_deg {
            TerrainClass::HighRisk
        } else {
            TerrainClass::Traversable
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TerrainClass {
    Traversable,
    HighRisk,
    Impassable,
}

/// Per-block worst-case slope, sharing the geometry of its source grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeGrid<T> {
    origin: Vec2<T>,
    cell_size: T,
    width: usize,
    height: usize,
    degrees: Vec<T>,
}

impl<T: Real> SlopeGrid<T> {
    pub fn degrees(&self) -> &[T] {
        &self.degrees
    }

    pub fn at(&self, col: usize, row: usize) -> T {
        self.degrees[row * self.width + col]
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }
}

/// Worst slope (degrees) from each block to any of its existing 8 neighbours.
///
/// Edge neighbours are `cell_size` apart and diagonal neighbours
/// `cell_size * sqrt(2)`; border blocks only look at neighbours that exist.
pub fn slope_map<T: Real>(dem: &DemGrid<T>) -> SlopeGrid<T> {
    let (w, h) = (dem.width, dem.height);
    let edge = dem.cell_size;
    let diagonal = dem.cell_size * T::SQRT_2();
    let mut degrees = vec![T::zero(); w * h];
    for row in 0..h {
        for col in 0..w {
            let z = dem.elevation(col, row);
            let mut worst = T::zero();
            for dr in -1i64..=1 {
                for dc in -1i64..=1 {
                    if dr == 0 && dc == 0 {
                        continue;
                    }
                    let (nr, nc) = (row as i64 + dr, col as i64 + dc);
                    if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                        continue;
                    }
                    let dz = (dem.elevation(nc as usize, nr as usize) - z).abs();
                    let d = if dr != 0 && dc != 0 { diagonal } else { edge };
                    let slope = (dz / d).atan().to_degrees();
                    if slope > worst {
                        worst = slope;
                    }
                }
            }
            degrees[row * w + col] = worst;
        }
    }
    SlopeGrid {
        origin: dem.origin,
        cell_size: dem.cell_size,
        width: w,
        height: h,
        degrees,
    }
}

/// Per-block traversability label.
#[derive(Debug, Clone, PartialEq)]
pub struct TraversabilityMap<T> {
    origin: Vec2<T>,
    cell_size: T,
    width: usize,
    height: usize,
    classes: Vec<TerrainClass>,
    worst_slope_deg: Vec<T>,
    thresholds: TraversabilityThresholds<T>,
}

impl<T: Real> TraversabilityMap<T> {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn origin(&self) -> Vec2<T> {
        self.origin
    }

    pub fn thresholds(&self) -> TraversabilityThresholds<T> {
        self.thresholds
    }

    pub fn classes(&self) -> &[TerrainClass] {
        &self.classes
    }

    pub fn worst_slope_deg(&self) -> &[T] {
        &self.worst_slope_deg
    }

    pub fn class(&self, col: usize, row: usize) -> TerrainClass {
        self.classes[row * self.width + col]
    }

    pub fn bounds(&self) -> Rect<T> {
        Rect::from_origin_size(
            self.origin,
            from_usize::<T>(self.width) * self.cell_size,
            from_usize::<T>(self.height) * self.cell_size,
        )
    }

    pub fn cell_of(&self, p: Vec2<T>) -> Option<(usize, usize)> {
        if !self.bounds().contains(p) {
            return None;
        }
        let col = ((p.x - self.origin.x) / self.cell_size).floor().to_usize()?;
        let row = ((p.y - self.origin.y) / self.cell_size).floor().to_usize()?;
        Some((col.min(self.width - 1), row.min(self.height - 1)))
    }

    /// Class of the block under a world point, `None` outside the map.
    pub fn class_at(&self, p: Vec2<T>) -> Option<TerrainClass> {
        self.cell_of(p).map(|(c, r)| self.class(c, r))
    }
}

pub fn classify<T: Real>(
    slopes: &SlopeGrid<T>,
    thresholds: TraversabilityThresholds<T>,
) -> Result<TraversabilityMap<T>, TerrainError> {
    thresholds.validate()?;
    Ok(TraversabilityMap {
        origin: slopes.origin,
        cell_size: slopes.cell_size,
        width: slopes.width,
        height: slopes.height,
        classes: slopes.degrees.iter().map(|&s| thresholds.class_of(s)).collect(),
        worst_slope_deg: slopes.degrees.clone(),
        thresholds,
    })
}

/// Percentage of blocks in each class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassFractions<T> {
    pub traversable: T,
    pub high_risk: T,
    pub impassable: T,
}

pub fn terrain_stats<T: Real>(map: &TraversabilityMap<T>) -> Result<ClassFractions<T>, TerrainError> {
    if map.classes.is_empty() {
        return Err(TerrainError::EmptyMap);
    }
    let (mut t, mut h, mut i) = (0usize, 0usize, 0usize);
    for c in &map.classes {
        match c {
            TerrainClass::Traversable => t += 1,
            TerrainClass::HighRisk => h += 1,
            TerrainClass::Impassable => i += 1,
        }
    }
    let n = from_usize::<T>(map.classes.len());
    let pct = |k: usize| lit::<T>(100.0) * from_usize::<T>(k) / n;
    Ok(ClassFractions {
        traversable: pct(t),
        high_risk: pct(h),
        impassable: pct(i),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(width: usize, height: usize, z: Vec<f64>) -> DemGrid<f64> {
        DemGrid::new(Vec2::zero(), 0.25, width, height, z).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(matches!(
            DemGrid::<f64>::new(Vec2::zero(), 0.25, 0, 3, vec![]),
            Err(TerrainError::ZeroDimension { .. })
        ));
        assert!(matches!(
            DemGrid::<f64>::new(Vec2::zero(), 0.0, 1, 1, vec![0.0]),
            Err(TerrainError::BadCellSize)
        ));
        assert!(matches!(
            DemGrid::<f64>::new(Vec2::zero(), 0.25, 2, 2, vec![0.0; 3]),
            Err(TerrainError::ElevationCount { expected: 4, got: 3 })
        ));
        assert!(matches!(
            DemGrid::<f64>::new(Vec2::zero(), 0.25, 2, 1, vec![0.0, f64::NAN]),
            Err(TerrainError::NonFinite { col: 1, row: 0 })
        ));
    }

    #[test]
    fn paper_scale_extent() {
        let dem = DemGrid::<f64>::flat(0.25, 600, 600).unwrap();
        assert_eq!(dem.extent(), (150.0, 150.0));
    }

    #[test]
    fn flat_grid_has_zero_slope() {
        let slopes = slope_map(&DemGrid::<f64>::flat(0.25, 5, 4).unwrap());
        assert!(slopes.degrees().iter().all(|&s| s == 0.0));
    }

    #[test]
    fn edge_step_slopes() {
        let s = slope_map(&grid(2, 1, vec![0.0, 0.25]));
        assert!((s.at(0, 0) - 45.0).abs() < 1e-12);
        assert!((s.at(1, 0) - 45.0).abs() < 1e-12);

        let s = slope_map(&grid(2, 1, vec![0.0, 0.05]));
        assert!((s.at(0, 0) - 0.2f64.atan().to_degrees()).abs() < 1e-12);
        assert!((s.at(0, 0) - 11.31).abs() < 5e-3);
    }

    #[test]
    fn diagonal_neighbours_use_root_two_distance() {
        // only the diagonal neighbour differs
        let s = slope_map(&grid(2, 2, vec![0.0, 0.0, 0.0, 0.25]));
        let expected = (0.25 / (0.25 * 2f64.sqrt())).atan().to_degrees();
        assert!((s.at(0, 0) - expected).abs() < 1e-12);
        assert!((s.at(1, 1) - 45.0).abs() < 1e-12);
    }

    #[test]
    fn classify_boundaries_inclusive() {
        let th = TraversabilityThresholds::<f64>::default();
        assert_eq!(th.class_of(0.0), TerrainClass::Traversable);
        assert_eq!(th.class_of(9.999_999), TerrainClass::Traversable);
        assert_eq!(th.class_of(10.0), TerrainClass::HighRisk);
        assert_eq!(th.class_of(11.31), TerrainClass::HighRisk);
        assert_eq!(th.class_of(15.0), TerrainClass::Impassable);
        assert_eq!(th.class_of(45.0), TerrainClass::Impassable);
    }

    #[test]
    fn invalid_thresholds_rejected() {
        assert!(TraversabilityThresholds::new(15.0_f64, 10.0).is_err());
        assert!(TraversabilityThresholds::new(0.0_f64, 10.0).is_err());
        assert!(TraversabilityThresholds::new(10.0_f64, 91.0).is_err());
        let slopes = slope_map(&DemGrid::<f64>::flat(1.0, 2, 2).unwrap());
        let bad = TraversabilityThresholds {
            high_risk_deg: 20.0,
            impassable_deg: 15.0,
        };
        assert!(classify(&slopes, bad).is_err());
    }

    #[test]
    fn stats_count_blocks() {
        let slopes = slope_map(&DemGrid::<f64>::flat(0.25, 10, 10).unwrap());
        let map = classify(&slopes, Default::default()).unwrap();
        let f = terrain_stats(&map).unwrap();
        assert_eq!((f.traversable, f.high_risk, f.impassable), (100.0, 0.0, 0.0));

        let map = TraversabilityMap {
            origin: Vec2::zero(),
            cell_size: 1.0,
            width: 2,
            height: 2,
            classes: vec![
                TerrainClass::Traversable,
                TerrainClass::Traversable,
                TerrainClass::Traversable,
                TerrainClass::Impassable,
            ],
            worst_slope_deg: vec![0.0, 0.0, 0.0, 20.0],
            thresholds: Default::default(),
        };
        let f = terrain_stats(&map).unwrap();
        assert_eq!((f.traversable, f.high_risk, f.impassable), (75.0, 0.0, 25.0));
    }

    #[test]
    fn empty_map_has_no_stats() {
        let map = TraversabilityMap::<f64> {
            origin: Vec2::zero(),
            cell_size: 1.0,
            width: 0,
            height: 0,
            classes: vec![],
            worst_slope_deg: vec![],
            thresholds: Default::default(),
        };
        assert!(matches!(terrain_stats(&map), Err(TerrainError::EmptyMap)));
    }

    #[test]
    fn works_in_single_precision() {
        let dem = DemGrid::<f32>::new(Vec2::zero(), 0.25, 2, 1, vec![0.0, 0.25]).unwrap();
        let s = slope_map(&dem);
        assert!((s.at(0, 0) - 45.0).abs() < 1e-4);
    }

    #[test]
    fn cell_lookup_clamps_outer_edge() {
        let dem = DemGrid::<f64>::flat(0.5, 4, 2).unwrap();
        assert_eq!(dem.cell_of(Vec2::new(2.0, 1.0)), Some((3, 1)));
        assert_eq!(dem.cell_of(Vec2::new(0.6, 0.1)), Some((1, 0)));
        assert_eq!(dem.cell_of(Vec2::new(2.01, 0.0)), None);
    }
}
