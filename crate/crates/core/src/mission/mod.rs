//! End-to-end mission scenarios: terrain, probability map, targets,
//! coordinated team plan, metrics and file exports.
//!
//! This layer works in `f64` throughout.

mod batch;
mod config;
mod export;
mod metrics;
pub mod plot;

pub use batch::{run_batch, BatchRun, BatchSummary};
pub use config::{
    ControllerSettings, CoordinationSettings, MetricSettings, MissionConfig, PdmSettings,
    RoughnessSettings, RoverSettings, RrtSettings, SearchSettings, SimSettings, TerrainSource,
    ThresholdSettings,
};
pub use export::{read_report, read_trajectory_csv, render_plots, write_outputs};
pub use metrics::{accumulated_curve, compliance_metric, Compliance, Curve, CurvePoint};

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coordination::{
    assign_rover_goals, coordinate_mission, snap_goals, GoalSites, MissionFailure, TeamPlan, TerrainPlanner,
    TerrainSimulator,
};
use crate::geom::{Rect, Vec2};
use crate::pdm::{random_pdm, rasterize, read_pdm, Pdm, PdmError, SearchGrid, SpreadRange};
use crate::search::{lhc_gw_conv, TargetList};
use crate::seeds;
use crate::sim::{RoverState, Trajectory};
use crate::terrain::{
    classify, load_dem, slope_map, synth_terrain, terrain_stats, ClassFractions, DemGrid,
    TerrainError, TraversabilityMap,
};

#[derive(Debug, Error)]
pub enum MissionError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{stage} stage failed: {message}")]
    Stage { stage: &'static str, message: String },
}

impl MissionError {
    /// Process exit status for the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            MissionError::Config(_) => 1,
            MissionError::Stage { .. } => 2,
            MissionError::Io { .. } => 3,
        }
    }

    fn stage(stage: &'static str, e: impl std::fmt::Display) -> Self {
        MissionError::Stage { stage, message: e.to_string() }
    }
}

fn terrain_err(e: TerrainError) -> MissionError {
    match e {
        TerrainError::Io { path, source } => MissionError::Io { path, source },
        other => MissionError::Config(other.to_string()),
    }
}

fn pdm_err(e: PdmError) -> MissionError {
    match e {
        PdmError::Io { path, source } => MissionError::Io { path, source },
        other => MissionError::Config(other.to_string()),
    }
}

/// Everything computed before the rovers move.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub dem: DemGrid<f64>,
    pub trav: TraversabilityMap<f64>,
    pub terrain: ClassFractions<f64>,
    pub pdm: Pdm<f64>,
    pub search_grid: SearchGrid<f64>,
    pub targets: TargetList<f64>,
    pub deployment: Vec2<f64>,
}

pub fn build_terrain(
    cfg: &MissionConfig,
) -> Result<(DemGrid<f64>, TraversabilityMap<f64>, ClassFractions<f64>), MissionError> {
    let dem = match &cfg.terrain {
        TerrainSource::Synth { width, height, cell_size_m, roughness } => {
            let seed = seeds::derive(cfg.seed, &[seeds::TERRAIN]);
            synth_terrain(seed, *width, *height, *cell_size_m, &roughness.to_core())
                .map_err(|e| MissionError::Config(e.to_string()))?
        }
        TerrainSource::File { path } => load_dem(path).map_err(terrain_err)?,
    };
    let trav = classify(&slope_map(&dem), cfg.thresholds()?).map_err(terrain_err)?;
    let stats = terrain_stats(&trav).map_err(|e| MissionError::stage("terrain", e))?;
    Ok((dem, trav, stats))
}

pub fn build_pdm(cfg: &MissionConfig, bounds: Rect<f64>) -> Result<Pdm<f64>, MissionError> {
    match &cfg.pdm.file {
        Some(path) => read_pdm(path).map_err(pdm_err),
        None => {
            let spread = SpreadRange {
                min_variance: cfg.pdm.min_variance_m2,
                max_variance: cfg.pdm.max_variance_m2,
            };
            random_pdm(seeds::derive(cfg.seed, &[seeds::PDM]), cfg.pdm.components, bounds, spread)
                .map_err(pdm_err)
        }
    }
}

pub fn deployment_point(cfg: &MissionConfig, bounds: Rect<f64>) -> Result<Vec2<f64>, MissionError> {
    let p = cfg.search.start.map_or_else(|| bounds.center(), |[x, y]| Vec2::new(x, y));
    if !bounds.contains(p) {
        return Err(MissionError::Config(format!("deployment point ({}, {}) is off the map", p.x, p.y)));
    }
    Ok(p)
}

pub fn plan_targets(
    cfg: &MissionConfig,
    pdm: &Pdm<f64>,
    bounds: Rect<f64>,
) -> Result<(SearchGrid<f64>, TargetList<f64>, Vec2<f64>), MissionError> {
    let grid = rasterize(pdm, bounds, cfg.search.cell_size_m).map_err(pdm_err)?;
    let deployment = deployment_point(cfg, bounds)?;
    let start = grid
        .cell_at(deployment)
        .ok_or_else(|| MissionError::Config("deployment point outside the search grid".into()))?;
    let targets = lhc_gw_conv(&grid, start, cfg.search.budget, cfg.search.warming_steps)
        .map_err(|e| MissionError::stage("search", e))?;
    Ok((grid, targets, deployment))
}

/// Terrain, probability map and targets for a config.
pub fn prepare(cfg: &MissionConfig) -> Result<Scenario, MissionError> {
    cfg.validate()?;
    let (dem, trav, terrain) = build_terrain(cfg)?;
    let pdm = build_pdm(cfg, dem.bounds())?;
    let (search_grid, targets, deployment) = plan_targets(cfg, &pdm, dem.bounds())?;
    Ok(Scenario { dem, trav, terrain, pdm, search_grid, targets, deployment })
}

/// Rovers lined up abreast at the deployment point, facing the first target.
pub fn initial_states(
    cfg: &MissionConfig,
    scenario: &Scenario,
    rovers: usize,
) -> Result<Vec<RoverState<f64>>, MissionError> {
    let c = cfg.coordination_config()?;
    let d = scenario.deployment;
    let first = scenario.targets.waypoints.first().copied().unwrap_or(d + Vec2::new(1.0, 0.0));
    let spots = assign_rover_goals(d - (first - d), d, rovers, c.lateral_spacing_m, scenario.trav.bounds(), c.goal_margin_m);
    let yaw = (first - d).heading_deg();
    let sites = goal_sites(cfg, scenario)?;
    snap_goals(&spots, &sites, c.d_safe_m.max(c.keep_out_m), c.lateral_spacing_m.max(1.0) * 2.0)
        .into_iter()
        .map(|p| {
            let p = p.ok_or_else(|| MissionError::stage("coordination", "no clear deployment spot"))?;
            RoverState::at_rest(&scenario.dem, p, yaw).map_err(|e| MissionError::stage("coordination", e))
        })
        .collect()
}

/// Stopping spots the planner can reach: clear of impassable blocks and
/// under the planner's slope cap.
pub fn goal_sites<'a>(cfg: &MissionConfig, scenario: &'a Scenario) -> Result<GoalSites<'a, f64>, MissionError> {
    let r = cfg.rrt_config()?;
    Ok(GoalSites::new(&scenario.trav).with_slope_cap(&scenario.dem, r.attitude_limit_deg - r.slope_margin_deg))
}

/// Runs the prioritised team loop for `rovers` rovers over the scenario targets.
pub fn fly_team(
    cfg: &MissionConfig,
    scenario: &Scenario,
    rovers: usize,
) -> Result<Result<TeamPlan<f64>, Box<MissionFailure<f64>>>, MissionError> {
    let initial = initial_states(cfg, scenario, rovers)?;
    let planner = TerrainPlanner { dem: &scenario.dem, trav: &scenario.trav, config: cfg.rrt_config()? };
    let simulator = TerrainSimulator {
        dem: &scenario.dem,
        params: cfg.rover_params()?,
        controller: cfg.controller()?,
        config: cfg.sim_config()?,
    };
    Ok(coordinate_mission(
        &scenario.targets.waypoints,
        &initial,
        scenario.deployment,
        &goal_sites(cfg, scenario)?,
        &planner,
        &simulator,
        &cfg.coordination_config()?,
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TerrainSplit {
    pub traversable_pct: f64,
    pub high_risk_pct: f64,
    pub impassable_pct: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoverSummary {
    pub rover: usize,
    pub distance_m: f64,
    pub duration_s: f64,
    pub retries: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeamTotals {
    pub total_distance_m: f64,
    pub mean_distance_m: f64,
    pub total_duration_s: f64,
    pub mean_duration_s: f64,
    /// Wall-clock mission time: each segment lasts until its slowest rover parks.
    pub mission_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinationSummary {
    pub segments: usize,
    pub retries: usize,
    pub min_separation_m: Option<f64>,
    pub d_safe_m: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub description: String,
    pub distance_m: f64,
    pub duration_s: f64,
    pub curve: Curve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionReport {
    pub seed: u64,
    pub terrain_seed: u64,
    pub pdm_seed: u64,
    pub rovers: usize,
    pub targets: usize,
    pub target_score: f64,
    pub winning_warming_stage: usize,
    pub terrain: TerrainSplit,
    pub per_rover: Vec<RoverSummary>,
    pub team: TeamTotals,
    pub compliance: Compliance,
    pub coordination: CoordinationSummary,
    /// Probability mass on the metric grid, the ceiling of the curve.
    pub in_bounds_mass: f64,
    pub curve: Curve,
    pub baseline: Option<Baseline>,
}

/// Outcome of a successful run, kept in memory for further analysis.
#[derive(Debug, Clone)]
pub struct MissionOutcome {
    pub config: MissionConfig,
    pub scenario: Scenario,
    pub plan: TeamPlan<f64>,
    pub baseline: Option<TeamPlan<f64>>,
    pub metric_grid: SearchGrid<f64>,
    pub report: MissionReport,
}

impl MissionOutcome {
    pub fn global_trajectories(&self) -> Vec<Trajectory<f64>> {
        global_trajectories(&self.plan)
    }
}

pub fn global_trajectories(plan: &TeamPlan<f64>) -> Vec<Trajectory<f64>> {
    (0..plan.rovers).filter_map(|k| plan.global_trajectory(k)).collect()
}

pub fn coordination_summary(plan: &TeamPlan<f64>, d_safe: f64, failure: Option<String>) -> CoordinationSummary {
    CoordinationSummary {
        segments: plan.segments.len(),
        retries: plan.total_retries(),
        min_separation_m: plan.min_separation(),
        d_safe_m: d_safe,
        failures: failure.into_iter().collect(),
    }
}

fn team_curve(plan: &TeamPlan<f64>, grid: &SearchGrid<f64>, cfg: &MissionConfig) -> Result<Curve, MissionError> {
    let trajs = global_trajectories(plan);
    accumulated_curve(&trajs, grid, cfg.rover.search_radius_m, cfg.metrics.curve_every)
}

/// Executes the whole pipeline. With `out`, every artifact is written there;
/// on a coordination failure the partial plan is exported before returning.
pub fn run_mission(cfg: &MissionConfig, out: Option<&Path>) -> Result<MissionOutcome, MissionError> {
    let scenario = prepare(cfg)?;
    if let Some(dir) = out {
        export::write_scenario(dir, &scenario)?;
    }
    let d_safe = cfg.coordination.d_safe_m;
    let plan = match fly_team(cfg, &scenario, cfg.rovers)? {
        Ok(p) => p,
        Err(failure) => {
            if let Some(dir) = out {
                export::write_plan(dir, &failure.partial)?;
                let summary = coordination_summary(&failure.partial, d_safe, Some(failure.to_string()));
                export::write_json(&dir.join("mission_summary.json"), &summary)?;
            }
            return Err(MissionError::stage("coordination", failure));
        }
    };
    let baseline = if cfg.metrics.single_rover_baseline && cfg.rovers > 1 {
        let single = fly_team(cfg, &scenario, 1)?.map_err(|f| MissionError::stage("baseline", f))?;
        Some(single)
    } else {
        None
    };

    let bounds = scenario.dem.bounds();
    let metric_grid = rasterize(&scenario.pdm, bounds, cfg.metrics.cell_size_m).map_err(pdm_err)?;
    let curve = team_curve(&plan, &metric_grid, cfg)?;
    let baseline_report = match &baseline {
        Some(b) => Some(Baseline {
            description: "same targets and pipeline with one rover and the same search radius".into(),
            distance_m: b.rover_distance(0),
            duration_s: b.total_time(),
            curve: team_curve(b, &metric_grid, cfg)?,
        }),
        None => None,
    };
    let compliance = compliance_metric(
        plan.segments.iter().flat_map(|s| &s.trajectories),
        cfg.metrics.compliance_limit_deg,
    );
    let per_rover: Vec<RoverSummary> = (0..plan.rovers)
        .map(|k| RoverSummary {
            rover: k + 1,
            distance_m: plan.rover_distance(k),
            duration_s: plan.rover_duration(k),
            retries: plan.segments.iter().map(|s| s.retries[k]).sum(),
        })
        .collect();
    let n = per_rover.len() as f64;
    let total_distance_m: f64 = per_rover.iter().map(|r| r.distance_m).sum();
    let total_duration_s: f64 = per_rover.iter().map(|r| r.duration_s).sum();
    let report = MissionReport {
        seed: cfg.seed,
        terrain_seed: seeds::derive(cfg.seed, &[seeds::TERRAIN]),
        pdm_seed: seeds::derive(cfg.seed, &[seeds::PDM]),
        rovers: plan.rovers,
        targets: scenario.targets.len(),
        target_score: scenario.targets.score,
        winning_warming_stage: scenario.targets.stage,
        terrain: TerrainSplit {
            traversable_pct: scenario.terrain.traversable,
            high_risk_pct: scenario.terrain.high_risk,
            impassable_pct: scenario.terrain.impassable,
        },
        team: TeamTotals {
            total_distance_m,
            mean_distance_m: total_distance_m / n,
            total_duration_s,
            mean_duration_s: total_duration_s / n,
            mission_time_s: plan.total_time(),
        },
        per_rover,
        compliance,
        coordination: coordination_summary(&plan, d_safe, None),
        in_bounds_mass: metric_grid.total(),
        curve,
        baseline: baseline_report,
    };
    let outcome = MissionOutcome { config: cfg.clone(), scenario, plan, baseline, metric_grid, report };
    if let Some(dir) = out {
        write_outputs(dir, &outcome)?;
    }
    Ok(outcome)
}
