//! Plain-text elevation grid format.
//!
//! ```text
//! ncols 3 nrows 2 cellsize 0.25 xll 0.0 yll 0.0
//! 0.0 0.1 0.2
//! 0.0 0.1 0.2
//! ```
//!
//! The first data line is row 0 (minimum y).

use std::io::Write;
use std::path::Path;

use super::{DemGrid, TerrainError};
use crate::geom::Vec2;
use crate::scalar::{to_f64, Real};

pub fn load_dem<T: Real>(path: impl AsRef<Path>) -> Result<DemGrid<T>, TerrainError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| TerrainError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_dem(&text)
}

struct Header {
    ncols: usize,
    nrows: usize,
    cellsize: f64,
    xll: f64,
    yll: f64,
}

fn parse_header(line: &str) -> Result<Header, TerrainError> {
    let err = |msg: String| TerrainError::Parse { line: 1, msg };
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 10 {
        return Err(err(format!(
            "header needs 5 key/value pairs, found {} tokens",
            tokens.len()
        )));
    }
    let (mut ncols, mut nrows, mut cellsize, mut xll, mut yll) = (None, None, None, None, None);
    for pair in tokens.chunks(2) {
        let (key, value) = (pair[0].to_ascii_lowercase(), pair[1]);
        let float = || {
            value
                .parse::<f64>()
                .map_err(|_| err(format!("bad value {value:?} for {key}")))
        };
        let int = || {
            value
                .parse::<usize>()
                .map_err(|_| err(format!("bad value {value:?} for {key}")))
        };
        let slot_taken = match key.as_str() {
            "ncols" => ncols.replace(int()?).is_some(),
            "nrows" => nrows.replace(int()?).is_some(),
            "cellsize" => cellsize.replace(float()?).is_some(),
            "xll" => xll.replace(float()?).is_some(),
            "yll" => yll.replace(float()?).is_some(),
            _ => return Err(err(format!("unknown header key {key:?}"))),
        };
        if slot_taken {
            return Err(err(format!("duplicate header key {key:?}")));
        }
    }
    let missing = |k: &str| err(format!("missing header key {k:?}"));
    Ok(Header {
        ncols: ncols.ok_or_else(|| missing("ncols"))?,
        nrows: nrows.ok_or_else(|| missing("nrows"))?,
        cellsize: cellsize.ok_or_else(|| missing("cellsize"))?,
        xll: xll.ok_or_else(|| missing("xll"))?,
        yll: yll.ok_or_else(|| missing("yll"))?,
    })
}

pub fn parse_dem<T: Real>(text: &str) -> Result<DemGrid<T>, TerrainError> {
    let mut lines = text.lines().enumerate();
    let (_, first) = lines.next().ok_or(TerrainError::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let header = parse_header(first)?;
    if header.ncols == 0 || header.nrows == 0 {
        return Err(TerrainError::ZeroDimension {
            width: header.ncols,
            height: header.nrows,
        });
    }
    if !(header.cellsize > 0.0 && header.cellsize.is_finite())
        || !header.xll.is_finite()
        || !header.yll.is_finite()
    {
        return Err(TerrainError::Parse {
            line: 1,
            msg: "cellsize must be positive and origin finite".into(),
        });
    }

    let mut elevation = Vec::with_capacity(header.ncols * header.nrows);
    let mut rows = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        if line.trim().is_empty() {
            continue;
        }
        if rows == header.nrows {
            return Err(TerrainError::Parse {
                line: lineno,
                msg: format!("more than the declared {} rows", header.nrows),
            });
        }
        let before = elevation.len();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| TerrainError::Parse {
                line: lineno,
                msg: format!("bad elevation {tok:?}"),
            })?;
            if !v.is_finite() {
                return Err(TerrainError::NonFinite {
                    col: elevation.len() - before,
                    row: rows,
                });
            }
            elevation.push(T::from_f64(v).ok_or(TerrainError::Parse {
                line: lineno,
                msg: format!("elevation {tok:?} not representable"),
            })?);
        }
        let got = elevation.len() - before;
        if got != header.ncols {
            return Err(TerrainError::Parse {
                line: lineno,
                msg: format!("expected {} values, found {got}", header.ncols),
            });
        }
        rows += 1;
    }
    if rows != header.nrows {
        return Err(TerrainError::Parse {
            line: text.lines().count(),
            msg: format!("expected {} rows, found {rows}", header.nrows),
        });
    }
    let conv = |v: f64| T::from_f64(v).expect("finite header value");
    DemGrid::new(
        Vec2::new(conv(header.xll), conv(header.yll)),
        conv(header.cellsize),
        header.ncols,
        header.nrows,
        elevation,
    )
}

/// Writes a grid in the format read by [`parse_dem`]. Values round-trip exactly for `f64`.
pub fn write_dem<T: Real, W: Write>(dem: &DemGrid<T>, mut out: W) -> std::io::Result<()> {
    writeln!(
        out,
        "ncols {} nrows {} cellsize {} xll {} yll {}",
        dem.width(),
        dem.height(),
        to_f64(dem.cell_size()),
        to_f64(dem.origin().x),
        to_f64(dem.origin().y)
    )?;
    let mut line = String::new();
    for row in 0..dem.height() {
        line.clear();
        for col in 0..dem.width() {
            if col > 0 {
                line.push(' ');
            }
            line.push_str(&to_f64(dem.elevation(col, row)).to_string());
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}
