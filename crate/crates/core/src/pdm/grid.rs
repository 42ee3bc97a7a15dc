//! Cell-rasterised probability grid and the grid operators used by the
//! search planner.

use super::{Pdm, PdmError};
use crate::geom::{Rect, Vec2};
use crate::scalar::{from_usize, lit, to_f64, Real};

/// Column/row address of a grid cell; row 0 is the minimum-y row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub col: usize,
    pub row: usize,
}

impl Cell {
    pub fn new(col: usize, row: usize) -> Self {
        Self { col, row }
    }

    /// True when the two cells touch, diagonals included.
    pub fn is_neighbor(self, other: Cell) -> bool {
        self != other && self.col.abs_diff(other.col) <= 1 && self.row.abs_diff(other.row) <= 1
    }
}

/// Per-cell probability mass over an `N x M` tiling of the mission area.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchGrid<T> {
    origin: Vec2<T>,
    cell_size: T,
    cols: usize,
    rows: usize,
    values: Vec<T>,
}

impl<T: Real> SearchGrid<T> {
    /// Builds a grid from explicit values (row-major, row 0 first).
    pub fn from_values(
        origin: Vec2<T>,
        cell_size: T,
        cols: usize,
        rows: usize,
        values: Vec<T>,
    ) -> Result<Self, PdmError> {
        if !(cell_size > T::zero() && cell_size.is_finite()) {
            return Err(PdmError::BadCellSize);
        }
        if values.len() != cols * rows || cols == 0 || rows == 0 {
            return Err(PdmError::Format(format!(
                "{} values for a {cols}x{rows} grid",
                values.len()
            )));
        }
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(PdmError::Format("grid values must be finite and >= 0".into()));
        }
        Ok(Self {
            origin,
            cell_size,
            cols,
            rows,
            values,
        })
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cell_size(&self) -> T {
        self.cell_size
    }

    pub fn origin(&self) -> Vec2<T> {
        self.origin
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn index(&self, cell: Cell) -> usize {
        cell.row * self.cols + cell.col
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.col < self.cols && cell.row < self.rows
    }

    pub fn check(&self, cell: Cell) -> Result<(), PdmError> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(PdmError::CellOutOfRange {
                col: cell.col,
                row: cell.row,
                cols: self.cols,
                rows: self.rows,
            })
        }
    }

    pub fn get(&self, cell: Cell) -> T {
        self.values[self.index(cell)]
    }

    pub fn set(&mut self, cell: Cell, value: T) {
        let i = self.index(cell);
        self.values[i] = value;
    }

    pub fn total(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc + v)
    }

    pub fn max_value(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, &v| acc.max(v))
    }

    pub fn center(&self, cell: Cell) -> Vec2<T> {
        let half = lit::<T>(0.5);
        Vec2::new(
            self.origin.x + (from_usize::<T>(cell.col) + half) * self.cell_size,
            self.origin.y + (from_usize::<T>(cell.row) + half) * self.cell_size,
        )
    }

    /// Cell containing a world point, if any.
    pub fn cell_at(&self, p: Vec2<T>) -> Option<Cell> {
        let u = (p.x - self.origin.x) / self.cell_size;
        let v = (p.y - self.origin.y) / self.cell_size;
        if !(u >= T::zero() && v >= T::zero()) {
            return None;
        }
        let (col, row) = (to_f64(u.floor()) as usize, to_f64(v.floor()) as usize);
        let cell = Cell::new(col, row);
        self.contains(cell).then_some(cell)
    }

    /// In-bounds 8-neighbours in ascending row-major order.
    pub fn neighbors(&self, cell: Cell) -> impl Iterator<Item = Cell> + '_ {
        let (cols, rows) = (self.cols as i64, self.rows as i64);
        (-1i64..=1).flat_map(move |dr| {
            (-1i64..=1).filter_map(move |dc| {
                let (r, c) = (cell.row as i64 + dr, cell.col as i64 + dc);
                let inside = (dr, dc) != (0, 0) && r >= 0 && c >= 0 && r < rows && c < cols;
                inside.then(|| Cell::new(c as usize, r as usize))
            })
        })
    }
}

/// Samples the mixture density at every cell center and multiplies by the
/// cell area. The grid covers `bounds` with `ceil(extent / cell_size)` cells
/// per axis, anchored at `bounds.min`.
pub fn rasterize<T: Real>(
    pdm: &Pdm<T>,
    bounds: Rect<T>,
    cell_size: T,
) -> Result<SearchGrid<T>, PdmError> {
    if !(cell_size > T::zero() && cell_size.is_finite()) {
        return Err(PdmError::BadCellSize);
    }
    if !bounds.is_proper() {
        return Err(PdmError::EmptyBounds);
    }
    let count = |extent: T| to_f64((extent / cell_size - lit(1e-9)).ceil()).max(1.0) as usize;
    let (cols, rows) = (count(bounds.width()), count(bounds.height()));
    let area = cell_size * cell_size;
    let mut grid = SearchGrid {
        origin: bounds.min,
        cell_size,
        cols,
        rows,
        values: vec![T::zero(); cols * rows],
    };
    for row in 0..rows {
        for col in 0..cols {
            let cell = Cell::new(col, row);
            let v = pdm.eval(grid.center(cell)) * area;
            grid.set(cell, v);
        }
    }
    Ok(grid)
}

/// The normalised 3x3 box blur kernel, every tap `1/9`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BoxBlurKernel;

impl BoxBlurKernel {
    pub fn weight<T: Real>(&self) -> T {
        T::one() / lit(9.0)
    }

    pub fn matrix<T: Real>(&self) -> [[T; 3]; 3] {
        [[self.weight(); 3]; 3]
    }
}

/// Box-blurred value at `cell`, with zero padding outside the grid.
/// Taps are accumulated in row-major order.
pub fn conv_value<T: Real>(grid: &SearchGrid<T>, cell: Cell) -> Result<T, PdmError> {
    grid.check(cell)?;
    let kernel = BoxBlurKernel.matrix::<T>();
    let mut acc = T::zero();
    for (ki, dr) in (-1i64..=1).enumerate() {
        for (kj, dc) in (-1i64..=1).enumerate() {
            let (r, c) = (cell.row as i64 + dr, cell.col as i64 + dc);
            if r < 0 || c < 0 || r >= grid.rows as i64 || c >= grid.cols as i64 {
                continue;
            }
            acc = acc + kernel[ki][kj] * grid.get(Cell::new(c as usize, r as usize));
        }
    }
    Ok(acc)
}

/// One global-warming pass: every cell above `decrement` loses it, the rest drop to zero.
pub fn warm<T: Real>(grid: &SearchGrid<T>, decrement: T) -> Result<SearchGrid<T>, PdmError> {
    if !(decrement >= T::zero()) {
        return Err(PdmError::NegativeDecrement);
    }
    let mut out = grid.clone();
    for v in &mut out.values {
        *v = if *v > decrement {
            *v - decrement
        } else {
            T::zero()
        };
    }
    Ok(out)
}

/// Uniform decrement schedule: `steps` passes of `p_max / steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarmingSchedule<T> {
    steps: usize,
    decrement: T,
    p_max: T,
}

impl<T: Real> WarmingSchedule<T> {
    pub fn new(p_max: T, steps: usize) -> Result<Self, PdmError> {
        if steps == 0 {
            return Err(PdmError::ZeroSteps);
        }
        if !(p_max >= T::zero()) {
            return Err(PdmError::NegativeDecrement);
        }
        Ok(Self {
            steps,
            decrement: p_max / from_usize(steps),
            p_max,
        })
    }

    pub fn for_grid(grid: &SearchGrid<T>, steps: usize) -> Result<Self, PdmError> {
        Self::new(grid.max_value(), steps)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn decrement(&self) -> T {
        self.decrement
    }

    pub fn p_max(&self) -> T {
        self.p_max
    }

    /// The original grid followed by each cumulative warming stage.
    pub fn stages(&self, grid: &SearchGrid<T>) -> Result<Vec<SearchGrid<T>>, PdmError> {
        let mut out = Vec::with_capacity(self.steps + 1);
        out.push(grid.clone());
        for k in 0..self.steps {
            let next = warm(&out[k], self.decrement)?;
            out.push(next);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pdm::Gaussian2;

    fn uniform(cols: usize, rows: usize, v: f64) -> SearchGrid<f64> {
        SearchGrid::from_values(Vec2::zero(), 1.0, cols, rows, vec![v; cols * rows]).unwrap()
    }

    #[test]
    fn kernel_is_normalised() {
        let m = BoxBlurKernel.matrix::<f64>();
        let sum: f64 = m.iter().flatten().sum();
        assert!((sum - 1.0).abs() < 1e-15);
        assert!(m.iter().flatten().all(|&w| w == m[0][0]));
    }

    #[test]
    fn conv_interior_and_corner() {
        let g = uniform(5, 5, 0.9);
        assert!((conv_value(&g, Cell::new(2, 2)).unwrap() - 0.9).abs() < 1e-15);
        assert!((conv_value(&g, Cell::new(0, 0)).unwrap() - 0.4).abs() < 1e-15);
        assert!(conv_value(&g, Cell::new(5, 0)).is_err());
    }

    #[test]
    fn conv_of_single_spike() {
        let mut g = uniform(5, 5, 0.0);
        g.set(Cell::new(2, 2), 9.0);
        for row in 0..5usize {
            for col in 0..5usize {
                let expected = if col.abs_diff(2) <= 1 && row.abs_diff(2) <= 1 {
                    1.0
                } else {
                    0.0
                };
                let v: f64 = conv_value(&g, Cell::new(col, row)).unwrap();
                assert!((v - expected).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn warm_branches() {
        let g = SearchGrid::from_values(Vec2::zero(), 1.0, 3, 1, vec![0.5f64, 0.1, 0.2]).unwrap();
        let w = warm(&g, 0.2).unwrap();
        assert!((w.values()[0] - 0.3).abs() < 1e-15);
        assert_eq!(w.values()[1], 0.0);
        assert_eq!(w.values()[2], 0.0);
        assert_eq!(warm(&g, 0.0).unwrap(), g);
        assert!(matches!(warm(&g, -0.1), Err(PdmError::NegativeDecrement)));
    }

    #[test]
    fn schedule_decrement() {
        let s = WarmingSchedule::new(1.0_f64, 4).unwrap();
        assert_eq!(s.decrement(), 0.25);
        assert!(WarmingSchedule::new(1.0_f64, 0).is_err());
    }

    #[test]
    fn schedule_drives_peak_to_zero() {
        let g = SearchGrid::from_values(Vec2::zero(), 1.0, 2, 2, vec![0.7, 0.3, 0.01, 0.0]).unwrap();
        let stages = WarmingSchedule::for_grid(&g, 3).unwrap().stages(&g).unwrap();
        assert_eq!(stages.len(), 4);
        assert!(stages.last().unwrap().max_value() <= 1e-15);
    }

    #[test]
    fn rasterize_paper_grid_dimensions() {
        let pdm = Pdm::new(vec![Gaussian2::new(Vec2::new(75.0, 75.0), [[100.0, 0.0], [0.0, 100.0]]).unwrap()])
            .unwrap();
        let g = rasterize(&pdm, Rect::new(Vec2::zero(), Vec2::new(150.0, 150.0)), 5.0).unwrap();
        assert_eq!((g.cols(), g.rows()), (30, 30));
        assert!(rasterize(&pdm, Rect::new(Vec2::zero(), Vec2::new(150.0, 150.0)), 0.0).is_err());
    }

    #[test]
    fn far_away_mass_rasterises_to_zero() {
        let pdm = Pdm::new(vec![Gaussian2::new(Vec2::new(5000.0, 5000.0), [[4.0, 0.0], [0.0, 4.0]]).unwrap()])
            .unwrap();
        let g = rasterize(&pdm, Rect::new(Vec2::zero(), Vec2::new(150.0, 150.0)), 5.0).unwrap();
        assert!(g.total() < 1e-300);
    }

    #[test]
    fn neighbors_in_row_major_order() {
        let g = uniform(3, 3, 0.0);
        let n: Vec<_> = g.neighbors(Cell::new(1, 1)).map(|c| g.index(c)).collect();
        assert_eq!(n, vec![0, 1, 2, 3, 5, 6, 7, 8]);
        let corner: Vec<_> = g.neighbors(Cell::new(0, 0)).collect();
        assert_eq!(corner, vec![Cell::new(1, 0), Cell::new(0, 1), Cell::new(1, 1)]);
    }

    #[test]
    fn cell_lookup() {
        let g = uniform(4, 3, 0.0);
        assert_eq!(g.cell_at(Vec2::new(3.5, 2.5)), Some(Cell::new(3, 2)));
        assert_eq!(g.cell_at(Vec2::new(4.5, 0.0)), None);
        assert_eq!(g.cell_at(Vec2::new(-0.5, 0.0)), None);
        assert_eq!(g.center(Cell::new(1, 2)), Vec2::new(1.5, 2.5));
    }
}
