use serde::{Deserialize, Serialize};

use crate::pdm::SearchGrid;
use crate::sim::Trajectory;

use super::MissionError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    /// Mean odometry per rover so far, m.
    pub distance_m: f64,
    /// Probability mass of all cells seen so far.
    pub probability: f64,
}

/// Accumulated probability against mean distance travelled.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Curve {
    pub points: Vec<CurvePoint>,
}

impl Curve {
    /// Value reached by the time the mean distance is `distance_m`
    /// (0 before the first point).
    pub fn value_at(&self, distance_m: f64) -> f64 {
        let idx = self.points.partition_point(|p| p.distance_m <= distance_m);
        if idx == 0 { 0.0 } else { self.points[idx - 1].probability }
    }

    pub fn terminal(&self) -> Option<CurvePoint> {
        self.points.last().copied()
    }
}

/// Sweeps trajectories on a shared clock and marks every metric cell whose
/// center comes within `search_radius` of a rover. One point is emitted
/// every `every` log samples and at the end.
pub fn accumulated_curve(
    trajectories: &[Trajectory<f64>],
    grid: &SearchGrid<f64>,
    search_radius: f64,
    every: usize,
) -> Result<Curve, MissionError> {
    if trajectories.is_empty() || trajectories.iter().any(|t| t.is_empty()) {
        return Err(MissionError::Stage { stage: "metrics", message: "no trajectories to score".into() });
    }
    let every = every.max(1);
    let n = trajectories.len() as f64;
    let len = trajectories.iter().map(Trajectory::len).max().unwrap_or(0);
    let mut seen = vec![false; grid.values().len()];
    let mut mass = 0.0;
    let mut odometry = vec![0.0; trajectories.len()];
    let mut points = Vec::new();
    let (cs, origin) = (grid.cell_size(), grid.origin());
    let r2 = search_radius * search_radius;

    for k in 0..len {
        for (i, t) in trajectories.iter().enumerate() {
            let s = t.sample_at(k);
            if k > 0 && k < t.len() {
                let p = t.sample_at(k - 1);
                let (dx, dy, dz) = (s.x - p.x, s.y - p.y, s.z - p.z);
                odometry[i] += (dx * dx + dy * dy + dz * dz).sqrt();
            }
            let span = |c: f64, o: f64, cells: usize| {
                let lo = ((c - search_radius - o) / cs).floor().max(0.0) as usize;
                let hi = (((c + search_radius - o) / cs).floor().max(0.0) as usize).min(cells - 1);
                lo..=hi
            };
            for row in span(s.y, origin.y, grid.rows()) {
                for col in span(s.x, origin.x, grid.cols()) {
                    let idx = row * grid.cols() + col;
                    if seen[idx] {
                        continue;
                    }
                    let cx = origin.x + (col as f64 + 0.5) * cs;
                    let cy = origin.y + (row as f64 + 0.5) * cs;
                    if (cx - s.x).powi(2) + (cy - s.y).powi(2) <= r2 {
                        seen[idx] = true;
                        mass += grid.values()[idx];
                    }
                }
            }
        }
        if k % every == 0 || k + 1 == len {
            let d = odometry.iter().sum::<f64>() / n;
            points.push(CurvePoint { distance_m: d, probability: mass });
        }
    }
    Ok(Curve { points })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Compliance {
    pub limit_deg: f64,
    pub samples: usize,
    pub exceedances: usize,
    /// Share of samples within the limits; 1 when there are none.
    pub fraction: f64,
}

/// Counts logged samples whose |pitch| or |roll| exceeds `limit_deg`.
pub fn compliance_metric<'a>(
    trajectories: impl IntoIterator<Item = &'a Trajectory<f64>>,
    limit_deg: f64,
) -> Compliance {
    let (mut samples, mut exceedances) = (0usize, 0usize);
    for t in trajectories {
        for s in &t.samples {
            samples += 1;
            if s.pitch_deg.abs() > limit_deg || s.roll_deg.abs() > limit_deg {
                exceedances += 1;
            }
        }
    }
    let fraction = if samples == 0 { 1.0 } else { 1.0 - exceedances as f64 / samples as f64 };
    Compliance { limit_deg, samples, exceedances, fraction }
}
