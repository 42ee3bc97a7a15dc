//! PDM scenario files (JSON) and grid CSV export.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Gaussian2, Pdm, PdmError, SearchGrid};
use crate::geom::Vec2;
use crate::scalar::{lit, to_f64, Real};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentRecord {
    mu: [f64; 2],
    sigma: [[f64; 2]; 2],
}

pub fn pdm_to_json<T: Real>(pdm: &Pdm<T>) -> String {
    let records: Vec<ComponentRecord> = pdm
        .components()
        .iter()
        .map(|g| {
            let c = g.cov();
            ComponentRecord {
                mu: [to_f64(g.mean().x), to_f64(g.mean().y)],
                sigma: [
                    [to_f64(c[0][0]), to_f64(c[0][1])],
                    [to_f64(c[1][0]), to_f64(c[1][1])],
                ],
            }
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain records serialise")
}

pub fn pdm_from_json<T: Real>(text: &str) -> Result<Pdm<T>, PdmError> {
    let records: Vec<ComponentRecord> =
        serde_json::from_str(text).map_err(|e| PdmError::Format(e.to_string()))?;
    let components = records
        .into_iter()
        .map(|r| {
            let s = r.sigma;
            Gaussian2::new(
                Vec2::new(lit(r.mu[0]), lit(r.mu[1])),
                [[lit(s[0][0]), lit(s[0][1])], [lit(s[1][0]), lit(s[1][1])]],
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Pdm::new(components)
}

pub fn read_pdm<T: Real>(path: impl AsRef<Path>) -> Result<Pdm<T>, PdmError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| PdmError::Io {
        path: path.display().to_string(),
        source,
    })?;
    pdm_from_json(&text)
}

pub fn write_pdm<T: Real>(pdm: &Pdm<T>, path: impl AsRef<Path>) -> Result<(), PdmError> {
    let path = path.as_ref();
    std::fs::write(path, pdm_to_json(pdm) + "\n").map_err(|source| PdmError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// One line per grid row, row 0 (minimum y) first, comma separated.
pub fn write_grid_csv<T: Real, W: Write>(grid: &SearchGrid<T>, mut out: W) -> std::io::Result<()> {
    for row in 0..grid.rows() {
        let line: Vec<String> = grid.values()[row * grid.cols()..(row + 1) * grid.cols()]
            .iter()
            .map(|v| to_f64(*v).to_string())
            .collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}
