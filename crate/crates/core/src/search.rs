//! Greedy probability-accumulating target generation.
//!
//! Local hill climbing walks the search grid one 8-neighbour at a time,
//! always moving to the most probable neighbour and zeroing the cell it
//! leaves. Equal neighbours are separated by their box-blurred value, then
//! by row-major index. Global warming repeats the climb on progressively
//! flattened copies of the grid, and the candidate that collects the most
//! probability on the original grid wins.

use std::collections::BTreeSet;
use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

use crate::geom::Vec2;
use crate::pdm::{conv_value, Cell, PdmError, SearchGrid, WarmingSchedule};
use crate::scalar::{to_f64, Real};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("cell ({}, {}) has no in-bounds neighbour", .0.col, .0.row)]
    NoNeighbor(Cell),
    #[error("budget must be at least one step")]
    ZeroBudget,
    #[error(transparent)]
    Grid(#[from] PdmError),
}

/// Ordered walk over grid cells; `cells[0]` is the start.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellPath {
    cells: Vec<Cell>,
    budget: usize,
}

impl CellPath {
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn start(&self) -> Cell {
        self.cells[0]
    }

    pub fn budget(&self) -> usize {
        self.budget
    }
}

/// Winning walk expressed as world-coordinate targets (start excluded).
#[derive(Debug, Clone, PartialEq)]
pub struct TargetList<T> {
    pub start: Cell,
    pub start_point: Vec2<T>,
    pub cells: Vec<Cell>,
    pub waypoints: Vec<Vec2<T>>,
    pub score: T,
    /// Which warming stage produced the winner (0 = unwarmed grid).
    pub stage: usize,
}

impl<T: Real> TargetList<T> {
    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    /// `# score=<v>` header, then `index,x_m,y_m` rows.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# score={}", to_f64(self.score))?;
        writeln!(out, "index,x_m,y_m")?;
        for (i, p) in self.waypoints.iter().enumerate() {
            writeln!(out, "{},{},{}", i, to_f64(p.x), to_f64(p.y))?;
        }
        Ok(())
    }
}

/// Moves one cell and zeroes the departed cell in `working`.
pub fn lhc_step<T: Real>(working: &mut SearchGrid<T>, current: Cell) -> Result<Cell, SearchError> {
    working.check(current)?;
    let mut best: Option<(Cell, T, Option<T>)> = None;
    for n in working.neighbors(current) {
        let v = working.get(n);
        best = match best {
            None => Some((n, v, None)),
            Some((b, bv, bconv)) => {
                if v > bv {
                    Some((n, v, None))
                } else if v < bv {
                    Some((b, bv, bconv))
                } else {
                    // tie on value: compare blurred values, lazily computed
                    let bc = match bconv {
                        Some(c) => c,
                        None => conv_value(working, b)?,
                    };
                    let nc = conv_value(working, n)?;
                    if nc > bc {
                        Some((n, v, Some(nc)))
                    } else {
                        Some((b, bv, Some(bc)))
                    }
                }
            }
        };
    }
    let (next, _, _) = best.ok_or(SearchError::NoNeighbor(current))?;
    working.set(current, T::zero());
    Ok(next)
}

pub fn lhc_path<T: Real>(
    grid: &SearchGrid<T>,
    start: Cell,
    budget: usize,
) -> Result<CellPath, SearchError> {
    if budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    grid.check(start)?;
    let mut working = grid.clone();
    let mut cells = Vec::with_capacity(budget + 1);
    cells.push(start);
    let mut current = start;
    for _ in 0..budget {
        current = lhc_step(&mut working, current)?;
        cells.push(current);
    }
    Ok(CellPath { cells, budget })
}

/// Sum of `grid` over the distinct cells of `cells`, accumulated in
/// ascending row-major order.
pub fn accumulated_probability<T: Real>(
    cells: &[Cell],
    grid: &SearchGrid<T>,
) -> Result<T, SearchError> {
    let mut seen = BTreeSet::new();
    for &c in cells {
        grid.check(c)?;
        seen.insert(grid.index(c));
    }
    Ok(seen
        .into_iter()
        .fold(T::zero(), |acc, i| acc + grid.values()[i]))
}

/// Every candidate walk with its score on the original grid, one per
/// warming stage (`steps + 1` in total).
pub fn gw_candidates<T: Real>(
    grid: &SearchGrid<T>,
    start: Cell,
    budget: usize,
    steps: usize,
) -> Result<Vec<(CellPath, T)>, SearchError> {
    if budget == 0 {
        return Err(SearchError::ZeroBudget);
    }
    grid.check(start)?;
    let stages = WarmingSchedule::for_grid(grid, steps)?.stages(grid)?;
    stages
        .par_iter()
        .map(|stage| {
            let path = lhc_path(stage, start, budget)?;
            let score = accumulated_probability(path.cells(), grid)?;
            Ok((path, score))
        })
        .collect()
}

/// Best candidate over all warming stages; ties keep the earliest stage.
pub fn lhc_gw_conv<T: Real>(
    grid: &SearchGrid<T>,
    start: Cell,
    budget: usize,
    steps: usize,
) -> Result<TargetList<T>, SearchError> {
    let candidates = gw_candidates(grid, start, budget, steps)?;
    let (stage, (path, score)) = candidates
        .into_iter()
        .enumerate()
        .reduce(|best, cand| if cand.1 .1 > best.1 .1 { cand } else { best })
        .expect("at least the unwarmed candidate");
    let cells = path.cells()[1..].to_vec();
    Ok(TargetList {
        start,
        start_point: grid.center(start),
        waypoints: cells.iter().map(|&c| grid.center(c)).collect(),
        cells,
        score,
        stage,
    })
}
