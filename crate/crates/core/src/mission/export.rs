use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::coordination::TeamPlan;
use crate::pdm::{pdm_to_json, write_grid_csv};
use crate::sim::{Trajectory, TrajectorySample};

use super::{global_trajectories, plot, MissionError, MissionOutcome, MissionReport, Scenario};

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> MissionError + '_ {
    move |source| MissionError::Io { path: path.display().to_string(), source }
}

fn create_dir(path: &Path) -> Result<(), MissionError> {
    fs::create_dir_all(path).map_err(io_err(path))
}

fn write_with(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> std::io::Result<()>) -> Result<(), MissionError> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

pub(crate) fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<(), MissionError> {
    let text = serde_json::to_string_pretty(value).expect("report types serialise");
    write_with(path, |w| writeln!(w, "{text}"))
}

/// Inputs of the run: config, probability map, planning grid and targets.
pub(crate) fn write_scenario(dir: &Path, scenario: &Scenario) -> Result<(), MissionError> {
    create_dir(dir)?;
    write_with(&dir.join("pdm.json"), |w| writeln!(w, "{}", pdm_to_json(&scenario.pdm)))?;
    write_with(&dir.join("search_grid.csv"), |w| write_grid_csv(&scenario.search_grid, w))?;
    write_with(&dir.join("targets.csv"), |w| scenario.targets.write_csv(w))
}

/// Planned paths per segment and one mission-long trajectory per rover.
pub(crate) fn write_plan(dir: &Path, plan: &TeamPlan<f64>) -> Result<(), MissionError> {
    let paths = dir.join("paths");
    let trajs = dir.join("trajectories");
    create_dir(&paths)?;
    create_dir(&trajs)?;
    for seg in &plan.segments {
        for (k, path) in seg.paths.iter().enumerate() {
            let name = paths.join(format!("seg{:03}_rover{}.csv", seg.index + 1, k + 1));
            write_with(&name, |w| path.write_csv(w))?;
        }
    }
    for t in global_trajectories(plan) {
        write_with(&trajs.join(format!("rover{}.csv", t.rover_id)), |w| t.write_csv(w))?;
    }
    Ok(())
}

pub fn render_plots(
    dir: &Path,
    scenario: &Scenario,
    trajectories: &[Trajectory<f64>],
    report: &MissionReport,
    search_radius: f64,
) -> Result<(), MissionError> {
    let plots = dir.join("plots");
    create_dir(&plots)?;
    let files = [
        ("pdm.svg", plot::pdm_heatmap(&scenario.search_grid)),
        ("traversability.svg", plot::traversability_map(&scenario.trav)),
        ("targets.svg", plot::targets_overlay(&scenario.search_grid, &scenario.targets)),
        ("trajectories.svg", plot::trajectories_plot(&scenario.trav, trajectories, search_radius)),
        ("accumulated.svg", plot::curve_plot(&report.curve, report.baseline.as_ref().map(|b| &b.curve))),
    ];
    for (name, svg) in files {
        let path = plots.join(name);
        fs::write(&path, svg).map_err(io_err(&path))?;
    }
    Ok(())
}

/// Writes every artifact of a finished run into `dir`.
pub fn write_outputs(dir: &Path, outcome: &MissionOutcome) -> Result<(), MissionError> {
    write_scenario(dir, &outcome.scenario)?;
    write_json(&dir.join("config.json"), &outcome.config)?;
    write_plan(dir, &outcome.plan)?;
    write_json(&dir.join("mission_summary.json"), &outcome.report.coordination)?;
    write_json(&dir.join("report.json"), &outcome.report)?;
    render_plots(
        dir,
        &outcome.scenario,
        &outcome.global_trajectories(),
        &outcome.report,
        outcome.config.rover.search_radius_m,
    )
}

pub fn read_report(path: &Path) -> Result<MissionReport, MissionError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| MissionError::Config(format!("{}: {e}", path.display())))
}

/// Reads a trajectory CSV as written by [`Trajectory::write_csv`].
pub fn read_trajectory_csv(path: &Path, rover_id: usize) -> Result<Trajectory<f64>, MissionError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let bad = |line: usize| MissionError::Config(format!("{}: malformed line {line}", path.display()));
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let v: Vec<f64> = line.split(',').map(|f| f.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad(i + 1))?;
        if v.len() != 8 {
            return Err(bad(i + 1));
        }
        samples.push(TrajectorySample {
            t: v[0],
            x: v[1],
            y: v[2],
            z: v[3],
            roll_deg: v[4],
            pitch_deg: v[5],
            yaw_deg: v[6],
            speed_mps: v[7],
        });
    }
    let dt = if samples.len() > 1 { samples[1].t - samples[0].t } else { 0.1 };
    let mut t = Trajectory::new(dt);
    t.rover_id = rover_id;
    t.priority = rover_id;
    t.samples = samples;
    Ok(t)
}
