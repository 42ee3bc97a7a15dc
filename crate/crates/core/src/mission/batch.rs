use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{export::write_json, run_mission, MissionConfig, MissionError, MissionReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchRun {
    pub seed: u64,
    pub error: Option<String>,
    pub mean_distance_m: Option<f64>,
    pub mean_duration_s: Option<f64>,
    pub mission_time_s: Option<f64>,
    pub samples: Option<usize>,
    pub exceedances: Option<usize>,
    pub min_separation_m: Option<f64>,
    pub final_probability: Option<f64>,
}

/// Per-seed results and their aggregate over the successful runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub runs: Vec<BatchRun>,
    pub succeeded: usize,
    pub failed: usize,
    pub mean_distance_m: Option<f64>,
    pub mean_duration_s: Option<f64>,
    pub mean_mission_time_s: Option<f64>,
    pub total_samples: usize,
    pub total_exceedances: usize,
    pub compliance_fraction: Option<f64>,
    pub min_separation_m: Option<f64>,
}

impl BatchSummary {
    pub fn from_results(results: &[(u64, Result<MissionReport, String>)]) -> Self {
        let runs: Vec<BatchRun> = results
            .iter()
            .map(|(seed, r)| match r {
                Ok(rep) => BatchRun {
                    seed: *seed,
                    error: None,
                    mean_distance_m: Some(rep.team.mean_distance_m),
                    mean_duration_s: Some(rep.team.mean_duration_s),
                    mission_time_s: Some(rep.team.mission_time_s),
                    samples: Some(rep.compliance.samples),
                    exceedances: Some(rep.compliance.exceedances),
                    min_separation_m: rep.coordination.min_separation_m,
                    final_probability: rep.curve.terminal().map(|p| p.probability),
                },
                Err(e) => BatchRun {
                    seed: *seed,
                    error: Some(e.clone()),
                    mean_distance_m: None,
                    mean_duration_s: None,
                    mission_time_s: None,
                    samples: None,
                    exceedances: None,
                    min_separation_m: None,
                    final_probability: None,
                },
            })
            .collect();
        let ok: Vec<&BatchRun> = runs.iter().filter(|r| r.error.is_none()).collect();
        let mean = |f: fn(&BatchRun) -> Option<f64>| {
            (!ok.is_empty()).then(|| ok.iter().filter_map(|r| f(r)).sum::<f64>() / ok.len() as f64)
        };
        let total_samples = ok.iter().filter_map(|r| r.samples).sum();
        let total_exceedances = ok.iter().filter_map(|r| r.exceedances).sum();
        Self {
            succeeded: ok.len(),
            failed: runs.len() - ok.len(),
            mean_distance_m: mean(|r| r.mean_distance_m),
            mean_duration_s: mean(|r| r.mean_duration_s),
            mean_mission_time_s: mean(|r| r.mission_time_s),
            total_samples,
            total_exceedances,
            compliance_fraction: (total_samples > 0)
                .then(|| 1.0 - total_exceedances as f64 / total_samples as f64),
            min_separation_m: ok.iter().filter_map(|r| r.min_separation_m).reduce(f64::min),
            runs,
        }
    }
}

/// Runs `cfg` once per seed, each into `out/seed_<seed>`, and writes
/// `out/batch_summary.json`. Failed runs are recorded, not fatal.
pub fn run_batch(cfg: &MissionConfig, seeds: &[u64], out: Option<&Path>) -> Result<BatchSummary, MissionError> {
    cfg.validate()?;
    let results: Vec<(u64, Result<MissionReport, String>)> = seeds
        .par_iter()
        .map(|&seed| {
            let run_cfg = MissionConfig { seed, ..cfg.clone() };
            let dir = out.map(|d| d.join(format!("seed_{seed}")));
            let r = run_mission(&run_cfg, dir.as_deref()).map(|o| o.report).map_err(|e| e.to_string());
            (seed, r)
        })
        .collect();
    let summary = BatchSummary::from_results(&results);
    if let Some(dir) = out {
        std::fs::create_dir_all(dir).map_err(|source| MissionError::Io { path: dir.display().to_string(), source })?;
        write_json(&dir.join("batch_summary.json"), &summary)?;
    }
    Ok(summary)
}
