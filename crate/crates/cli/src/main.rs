//! `rover-team` command line tool.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use rover_team::mission::{
    self, read_report, read_trajectory_csv, render_plots, run_batch, run_mission, MissionConfig,
    MissionError, MissionReport,
};

#[derive(Debug, Parser)]
#[command(name = "rover-team", version, about = "Plan and simulate rover team search missions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Mission config (JSON). Built-in defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed, overrides the config.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Team size [default: 5, or the config value].
    #[arg(long)]
    rovers: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Terrain class split of the configured DEM.
    TerrainStats(Common),
    /// Probability map and its search grid.
    GenPdm(Common),
    /// Team targets from the probability map.
    PlanTargets(Common),
    /// Full mission: targets, coordinated team plan, metrics and exports.
    PlanMission(Common),
    /// Summarise a report written by plan-mission.
    Report {
        #[command(flatten)]
        common: Common,
        /// Report file; defaults to <out>/report.json.
        report: Option<PathBuf>,
    },
    /// Re-render the plots of a finished mission directory.
    Plot(Common),
    /// Run the config once per seed and aggregate the reports.
    Batch {
        #[command(flatten)]
        common: Common,
        /// Seeds as a list or inclusive range, e.g. `1,4,9` or `1..10`.
        #[arg(long, default_value = "1..10")]
        seeds: String,
    },
}

impl Common {
    fn load(&self) -> Result<MissionConfig, MissionError> {
        let mut cfg = match &self.config {
            Some(path) => MissionConfig::load(path)?,
            None => MissionConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(rovers) = self.rovers {
            cfg.rovers = rovers;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn parse_seeds(text: &str) -> Result<Vec<u64>, MissionError> {
    let bad = || MissionError::Config(format!("cannot read seeds from {text:?}"));
    let seeds: Vec<u64> = if let Some((a, b)) = text.split_once("..") {
        let a: u64 = a.trim().parse().map_err(|_| bad())?;
        let b: u64 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        text.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err(bad());
    }
    Ok(seeds)
}

fn write_text(path: &Path, text: &str) -> Result<(), MissionError> {
    let io = |source| MissionError::Io { path: path.display().to_string(), source };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, text).map_err(io)
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json values serialise")
}

fn terrain_stats(common: &Common) -> Result<(), MissionError> {
    let cfg = common.load()?;
    let (dem, _, split) = mission::build_terrain(&cfg)?;
    let value = json!({
        "width": dem.width(),
        "height": dem.height(),
        "cell_size_m": dem.cell_size(),
        "traversable_pct": split.traversable,
        "high_risk_pct": split.high_risk,
        "impassable_pct": split.impassable,
    });
    if let Some(out) = &common.out {
        write_text(&out.join("terrain_stats.json"), &pretty(&value))?;
    }
    println!("{}", pretty(&value));
    Ok(())
}

fn gen_pdm(common: &Common) -> Result<(), MissionError> {
    let cfg = common.load()?;
    let (dem, _, _) = mission::build_terrain(&cfg)?;
    let pdm = mission::build_pdm(&cfg, dem.bounds())?;
    let grid = rover_team::pdm::rasterize(&pdm, dem.bounds(), cfg.search.cell_size_m)
        .map_err(|e| MissionError::Config(e.to_string()))?;
    let text = rover_team::pdm::pdm_to_json(&pdm);
    if let Some(out) = &common.out {
        write_text(&out.join("pdm.json"), &format!("{text}\n"))?;
        let mut csv = Vec::new();
        rover_team::pdm::write_grid_csv(&grid, &mut csv)
            .map_err(|source| MissionError::Io { path: "search_grid.csv".into(), source })?;
        write_text(&out.join("search_grid.csv"), &String::from_utf8_lossy(&csv))?;
    }
    println!("{text}");
    eprintln!(
        "{} components, grid {}x{} cells, in-bounds mass {:.4}",
        pdm.len(),
        grid.cols(),
        grid.rows(),
        grid.total()
    );
    Ok(())
}

fn plan_targets(common: &Common) -> Result<(), MissionError> {
    let cfg = common.load()?;
    let scenario = mission::prepare(&cfg)?;
    let mut csv = Vec::new();
    scenario
        .targets
        .write_csv(&mut csv)
        .map_err(|source| MissionError::Io { path: "targets.csv".into(), source })?;
    let csv = String::from_utf8_lossy(&csv).into_owned();
    if let Some(out) = &common.out {
        write_text(&out.join("targets.csv"), &csv)?;
    }
    print!("{csv}");
    Ok(())
}

fn summary_lines(r: &MissionReport) -> Vec<String> {
    let mut lines = vec![
        format!("seed {}  rovers {}  targets {}", r.seed, r.rovers, r.targets),
        format!(
            "terrain: {:.2}% traversable, {:.2}% high risk, {:.2}% impassable",
            r.terrain.traversable_pct, r.terrain.high_risk_pct, r.terrain.impassable_pct
        ),
        format!(
            "team: mean distance {:.2} m, mean duration {:.2} s, mission time {:.2} s",
            r.team.mean_distance_m, r.team.mean_duration_s, r.team.mission_time_s
        ),
        format!(
            "attitude: {} of {} samples over the limit, compliance {:.5}",
            r.compliance.exceedances, r.compliance.samples, r.compliance.fraction
        ),
        format!(
            "coordination: {} segments, {} replans, min separation {}",
            r.coordination.segments,
            r.coordination.retries,
            r.coordination.min_separation_m.map_or("n/a".into(), |d| format!("{d:.3} m"))
        ),
        format!(
            "accumulated probability {:.4} of {:.4}",
            r.curve.terminal().map_or(0.0, |p| p.probability),
            r.in_bounds_mass
        ),
    ];
    for rover in &r.per_rover {
        lines.push(format!(
            "  rover {}: {:.2} m, {:.2} s, {} replans",
            rover.rover, rover.distance_m, rover.duration_s, rover.retries
        ));
    }
    if let Some(b) = &r.baseline {
        lines.push(format!(
            "single rover: {:.2} m, accumulated {:.4}",
            b.distance_m,
            b.curve.terminal().map_or(0.0, |p| p.probability)
        ));
    }
    lines
}

fn plan_mission(common: &Common) -> Result<(), MissionError> {
    let cfg = common.load()?;
    let out = common.out_dir();
    let outcome = run_mission(&cfg, Some(&out))?;
    for line in summary_lines(&outcome.report) {
        println!("{line}");
    }
    println!("outputs written to {}", out.display());
    Ok(())
}

fn report(common: &Common, path: Option<&Path>) -> Result<(), MissionError> {
    let path = path.map_or_else(|| common.out_dir().join("report.json"), Path::to_path_buf);
    let r = read_report(&path)?;
    for line in summary_lines(&r) {
        println!("{line}");
    }
    Ok(())
}

fn plot(common: &Common) -> Result<(), MissionError> {
    let out = common.out_dir();
    let cfg = match &common.config {
        Some(_) => common.load()?,
        None => {
            let saved = Common { config: Some(out.join("config.json")), ..common.clone() };
            saved.load()?
        }
    };
    let report = read_report(&out.join("report.json"))?;
    let scenario = mission::prepare(&cfg)?;
    let trajectories = (1..=report.rovers)
        .map(|k| read_trajectory_csv(&out.join("trajectories").join(format!("rover{k}.csv")), k))
        .collect::<Result<Vec<_>, _>>()?;
    render_plots(&out, &scenario, &trajectories, &report, cfg.rover.search_radius_m)?;
    println!("plots written to {}", out.join("plots").display());
    Ok(())
}

fn batch(common: &Common, seeds: &str) -> Result<(), MissionError> {
    let cfg = common.load()?;
    let seeds = parse_seeds(seeds)?;
    let out = common.out_dir();
    let summary = run_batch(&cfg, &seeds, Some(&out))?;
    println!("{}", serde_json::to_string_pretty(&summary).expect("summary serialises"));
    if summary.failed > 0 {
        return Err(MissionError::Stage {
            stage: "batch",
            message: format!("{} of {} runs failed", summary.failed, seeds.len()),
        });
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), MissionError> {
    match &cli.command {
        Command::TerrainStats(c) => terrain_stats(c),
        Command::GenPdm(c) => gen_pdm(c),
        Command::PlanTargets(c) => plan_targets(c),
        Command::PlanMission(c) => plan_mission(c),
        Command::Report { common, report: path } => report(common, path.as_deref()),
        Command::Plot(c) => plot(c),
        Command::Batch { common, seeds } => batch(common, seeds),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
