use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::coordination::CoordinationConfig;
use crate::rrt::{CostWeights, RrtConfig};
use crate::sim::{ControllerState, Pid, PidGains, RoverParams, SimConfig, SlipModel};
use crate::terrain::{Roughness, TraversabilityThresholds};

use super::MissionError;

/// Where the elevation model comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum TerrainSource {
    Synth {
        #[serde(default = "default_blocks")]
        width: usize,
        #[serde(default = "default_blocks")]
        height: usize,
        #[serde(default = "default_block_size")]
        cell_size_m: f64,
        #[serde(default)]
        roughness: RoughnessSettings,
    },
    File {
        path: PathBuf,
    },
}

fn default_blocks() -> usize {
    600
}

fn default_block_size() -> f64 {
    0.25
}

impl Default for TerrainSource {
    fn default() -> Self {
        TerrainSource::Synth {
            width: default_blocks(),
            height: default_blocks(),
            cell_size_m: default_block_size(),
            roughness: RoughnessSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoughnessSettings {
    pub amplitude_m: f64,
    pub wavelength_m: f64,
    pub octaves: usize,
    pub persistence: f64,
    pub lacunarity: f64,
}

impl Default for RoughnessSettings {
    fn default() -> Self {
        let r = Roughness::<f64>::default();
        Self {
            amplitude_m: r.amplitude_m,
            wavelength_m: r.wavelength_m,
            octaves: r.octaves,
            persistence: r.persistence,
            lacunarity: r.lacunarity,
        }
    }
}

impl RoughnessSettings {
    pub fn to_core(&self) -> Roughness<f64> {
        Roughness {
            amplitude_m: self.amplitude_m,
            wavelength_m: self.wavelength_m,
            octaves: self.octaves,
            persistence: self.persistence,
            lacunarity: self.lacunarity,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ThresholdSettings {
    pub high_risk_deg: f64,
    pub impassable_deg: f64,
}

impl Default for ThresholdSettings {
    fn default() -> Self {
        Self { high_risk_deg: 10.0, impassable_deg: 15.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PdmSettings {
    /// Mixture size G for random maps.
    pub components: usize,
    pub min_variance_m2: f64,
    pub max_variance_m2: f64,
    /// Fixed mixture instead of a random one.
    pub file: Option<PathBuf>,
}

impl Default for PdmSettings {
    fn default() -> Self {
        Self { components: 4, min_variance_m2: 16.0, max_variance_m2: 225.0, file: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchSettings {
    pub cell_size_m: f64,
    /// Number of team targets.
    pub budget: usize,
    pub warming_steps: usize,
    /// Deployment point; the map center when absent.
    pub start: Option<[f64; 2]>,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self { cell_size_m: 5.0, budget: 64, warming_steps: 4, start: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RrtSettings {
    pub w_length: f64,
    pub w_roll: f64,
    pub w_pitch: f64,
    pub w_turn: f64,
    pub n_length_m: f64,
    pub n_roll_deg: f64,
    pub n_pitch_deg: f64,
    pub n_turn_deg: f64,
    pub max_nodes: usize,
    pub goal_tolerance_m: f64,
    pub goal_bias: f64,
    pub gamma_m: f64,
    pub clearance_m: f64,
    pub slope_margin_deg: f64,
    pub corridor_half_width_m: f64,
    pub attempts_per_node: usize,
}

impl Default for RrtSettings {
    fn default() -> Self {
        let c = RrtConfig::<f64>::default();
        let w = c.weights;
        Self {
            w_length: w.w_length,
            w_roll: w.w_roll,
            w_pitch: w.w_pitch,
            w_turn: w.w_turn,
            n_length_m: w.n_length_m,
            n_roll_deg: w.n_roll_deg,
            n_pitch_deg: w.n_pitch_deg,
            n_turn_deg: w.n_turn_deg,
            max_nodes: c.max_nodes,
            goal_tolerance_m: c.goal_tolerance_m,
            goal_bias: c.goal_bias,
            gamma_m: c.gamma_m,
            clearance_m: c.clearance_m,
            slope_margin_deg: c.slope_margin_deg,
            corridor_half_width_m: c.corridor_half_width_m,
            attempts_per_node: c.attempts_per_node,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RoverSettings {
    pub mass_kg: f64,
    pub yaw_inertia_kgm2: f64,
    pub linear_damping: [f64; 3],
    pub quadratic_damping: [f64; 3],
    pub gravity_mps2: f64,
    pub gravity_scale: f64,
    pub max_thrust_n: f64,
    pub max_yaw_moment_nm: f64,
    pub max_speed_mps: f64,
    pub footprint_radius_m: f64,
    pub search_radius_m: f64,
}

impl Default for RoverSettings {
    fn default() -> Self {
        let p = RoverParams::<f64>::default();
        Self {
            mass_kg: p.mass_matrix[0][0],
            yaw_inertia_kgm2: p.mass_matrix[2][2],
            linear_damping: p.linear_damping,
            quadratic_damping: p.quadratic_damping,
            gravity_mps2: p.gravity,
            gravity_scale: p.gravity_scale,
            max_thrust_n: p.max_thrust_n,
            max_yaw_moment_nm: p.max_yaw_moment_nm,
            max_speed_mps: p.max_speed_mps,
            footprint_radius_m: p.footprint_radius_m,
            search_radius_m: p.search_radius_m,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ControllerSettings {
    pub heading_gains: [f64; 3],
    pub speed_gains: [f64; 3],
    pub acceptance_radius_m: f64,
    pub final_radius_m: f64,
    pub cruise_speed_mps: f64,
    pub approach_gain: f64,
    pub min_approach_speed_mps: f64,
}

impl Default for ControllerSettings {
    fn default() -> Self {
        let c = ControllerState::<f64>::default();
        let g = |p: &Pid<f64>| [p.gains.kp, p.gains.ki, p.gains.kd];
        Self {
            heading_gains: g(&c.heading),
            speed_gains: g(&c.speed),
            acceptance_radius_m: c.acceptance_radius_m,
            final_radius_m: c.final_radius_m,
            cruise_speed_mps: c.cruise_speed_mps,
            approach_gain: c.approach_gain,
            min_approach_speed_mps: c.min_approach_speed_mps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSettings {
    pub dt_s: f64,
    pub log_every: usize,
    pub timeout_s: f64,
    /// Lateral slip noise amplitude; 0 turns slip off.
    pub slip_amplitude: f64,
}

impl Default for SimSettings {
    fn default() -> Self {
        let c = SimConfig::<f64>::default();
        Self { dt_s: c.dt, log_every: c.log_every, timeout_s: c.timeout_s, slip_amplitude: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoordinationSettings {
    pub d_safe_m: f64,
    pub keep_out_m: f64,
    pub max_retries: usize,
    pub lateral_spacing_m: f64,
    pub goal_margin_m: f64,
    pub inflated_clearance_m: f64,
    pub max_clearance_m: f64,
    pub goal_relocations: usize,
    pub relocation_radius_m: f64,
    pub retries_before_delay: usize,
    pub delay_step_s: f64,
}

impl Default for CoordinationSettings {
    fn default() -> Self {
        let c = CoordinationConfig::<f64>::default();
        Self {
            d_safe_m: c.d_safe_m,
            keep_out_m: c.keep_out_m,
            max_retries: c.max_retries,
            lateral_spacing_m: c.lateral_spacing_m,
            goal_margin_m: c.goal_margin_m,
            inflated_clearance_m: c.inflated_clearance_m,
            max_clearance_m: c.max_clearance_m,
            goal_relocations: c.goal_relocations,
            relocation_radius_m: c.relocation_radius_m,
            retries_before_delay: c.retries_before_delay,
            delay_step_s: c.delay_step_s,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricSettings {
    /// Cell size of the coverage grid behind the accumulated curve.
    pub cell_size_m: f64,
    pub compliance_limit_deg: f64,
    /// Also run the same targets with a single rover for comparison.
    pub single_rover_baseline: bool,
    /// Log samples between curve points.
    pub curve_every: usize,
}

impl Default for MetricSettings {
    fn default() -> Self {
        Self { cell_size_m: 1.0, compliance_limit_deg: 15.0, single_rover_baseline: true, curve_every: 10 }
    }
}

/// Complete description of one mission scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissionConfig {
    /// Master seed; every random stage derives its own seed from it.
    pub seed: u64,
    pub rovers: usize,
    pub terrain: TerrainSource,
    pub thresholds: ThresholdSettings,
    pub pdm: PdmSettings,
    pub search: SearchSettings,
    pub rrt: RrtSettings,
    pub rover: RoverSettings,
    pub controller: ControllerSettings,
    pub sim: SimSettings,
    pub coordination: CoordinationSettings,
    pub metrics: MetricSettings,
}

impl Default for MissionConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            rovers: 5,
            terrain: TerrainSource::default(),
            thresholds: ThresholdSettings::default(),
            pdm: PdmSettings::default(),
            search: SearchSettings::default(),
            rrt: RrtSettings::default(),
            rover: RoverSettings::default(),
            controller: ControllerSettings::default(),
            sim: SimSettings::default(),
            coordination: CoordinationSettings::default(),
            metrics: MetricSettings::default(),
        }
    }
}

fn config_err(e: impl std::fmt::Display) -> MissionError {
    MissionError::Config(e.to_string())
}

impl MissionConfig {
    pub fn from_json(text: &str) -> Result<Self, MissionError> {
        serde_json::from_str(text).map_err(config_err)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serialises")
    }

    /// Reads a config file; relative data paths are taken relative to it.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, MissionError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| MissionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut cfg = Self::from_json(&text)?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        if let TerrainSource::File { path: p } = &mut cfg.terrain {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        if let Some(p) = &mut cfg.pdm.file {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn thresholds(&self) -> Result<TraversabilityThresholds<f64>, MissionError> {
        TraversabilityThresholds::new(self.thresholds.high_risk_deg, self.thresholds.impassable_deg)
            .map_err(config_err)
    }

    pub fn rrt_config(&self) -> Result<RrtConfig<f64>, MissionError> {
        let r = &self.rrt;
        let c = RrtConfig {
            weights: CostWeights {
                w_length: r.w_length,
                w_roll: r.w_roll,
                w_pitch: r.w_pitch,
                w_turn: r.w_turn,
                n_length_m: r.n_length_m,
                n_roll_deg: r.n_roll_deg,
                n_pitch_deg: r.n_pitch_deg,
                n_turn_deg: r.n_turn_deg,
            },
            max_nodes: r.max_nodes,
            goal_tolerance_m: r.goal_tolerance_m,
            goal_bias: r.goal_bias,
            gamma_m: r.gamma_m,
            clearance_m: r.clearance_m,
            attitude_limit_deg: self.thresholds.impassable_deg,
            slope_margin_deg: r.slope_margin_deg,
            corridor_half_width_m: r.corridor_half_width_m,
            attempts_per_node: r.attempts_per_node,
        };
        c.validate().map_err(config_err)?;
        Ok(c)
    }

    pub fn rover_params(&self) -> Result<RoverParams<f64>, MissionError> {
        let r = &self.rover;
        let p = RoverParams {
            mass_matrix: [[r.mass_kg, 0.0, 0.0], [0.0, r.mass_kg, 0.0], [0.0, 0.0, r.yaw_inertia_kgm2]],
            linear_damping: r.linear_damping,
            quadratic_damping: r.quadratic_damping,
            gravity: r.gravity_mps2,
            gravity_scale: r.gravity_scale,
            max_thrust_n: r.max_thrust_n,
            max_yaw_moment_nm: r.max_yaw_moment_nm,
            max_speed_mps: r.max_speed_mps,
            footprint_radius_m: r.footprint_radius_m,
            search_radius_m: r.search_radius_m,
        };
        p.validate().map_err(config_err)?;
        Ok(p)
    }

    pub fn controller(&self) -> Result<ControllerState<f64>, MissionError> {
        let p = self.rover_params()?;
        let c = &self.controller;
        let gains = |g: [f64; 3]| PidGains { kp: g[0], ki: g[1], kd: g[2] };
        let mut ctrl = ControllerState::for_params(&p);
        ctrl.heading = Pid::new(gains(c.heading_gains), p.max_yaw_moment_nm, true);
        ctrl.speed = Pid::new(gains(c.speed_gains), p.max_thrust_n, false);
        ctrl.acceptance_radius_m = c.acceptance_radius_m;
        ctrl.final_radius_m = c.final_radius_m;
        ctrl.cruise_speed_mps = c.cruise_speed_mps;
        ctrl.approach_gain = c.approach_gain;
        ctrl.min_approach_speed_mps = c.min_approach_speed_mps;
        if !ctrl.validate() {
            return Err(config_err("controller gains must be non-negative and radii positive"));
        }
        Ok(ctrl)
    }

    pub fn sim_config(&self) -> Result<SimConfig<f64>, MissionError> {
        let s = &self.sim;
        let c = SimConfig {
            dt: s.dt_s,
            log_every: s.log_every,
            timeout_s: s.timeout_s,
            slip: SlipModel { amplitude: s.slip_amplitude },
        };
        c.validate().map_err(config_err)?;
        Ok(c)
    }

    pub fn coordination_config(&self) -> Result<CoordinationConfig<f64>, MissionError> {
        let c = &self.coordination;
        let cc = CoordinationConfig {
            d_safe_m: c.d_safe_m,
            keep_out_m: c.keep_out_m,
            max_retries: c.max_retries,
            lateral_spacing_m: c.lateral_spacing_m,
            goal_margin_m: c.goal_margin_m,
            clearance_m: self.rrt.clearance_m,
            inflated_clearance_m: c.inflated_clearance_m,
            max_clearance_m: c.max_clearance_m,
            goal_relocations: c.goal_relocations,
            relocation_radius_m: c.relocation_radius_m,
            retries_before_delay: c.retries_before_delay,
            delay_step_s: c.delay_step_s,
            master_seed: self.seed,
        };
        cc.validate().map_err(config_err)?;
        Ok(cc)
    }

    /// Checks every section without running anything.
    pub fn validate(&self) -> Result<(), MissionError> {
        if self.rovers == 0 {
            return Err(config_err("at least one rover is required"));
        }
        if self.search.budget == 0 || self.search.warming_steps == 0 {
            return Err(config_err("search budget and warming steps must be at least 1"));
        }
        if !(self.search.cell_size_m > 0.0 && self.metrics.cell_size_m > 0.0) {
            return Err(config_err("cell sizes must be positive"));
        }
        if self.pdm.file.is_none() && self.pdm.components == 0 {
            return Err(config_err("a random map needs at least one component"));
        }
        if self.metrics.curve_every == 0 {
            return Err(config_err("curve_every must be at least 1"));
        }
        if let TerrainSource::Synth { width, height, cell_size_m, .. } = &self.terrain {
            if *width == 0 || *height == 0 || !(*cell_size_m > 0.0) {
                return Err(config_err("synthetic terrain needs positive dimensions"));
            }
        }
        self.thresholds()?;
        self.rrt_config()?;
        self.controller()?;
        self.sim_config()?;
        self.coordination_config()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let c = MissionConfig::from_json("{}").unwrap();
        assert_eq!(c, MissionConfig::default());
        c.validate().unwrap();
    }

    #[test]
    fn round_trip_and_unknown_fields() {
        let c = MissionConfig::default();
        assert_eq!(MissionConfig::from_json(&c.to_json()).unwrap(), c);
        assert!(matches!(MissionConfig::from_json(r#"{"sed": 3}"#), Err(MissionError::Config(_))));
        let c = MissionConfig::from_json(r#"{"terrain": {"source": "file", "path": "a.asc"}}"#).unwrap();
        assert_eq!(c.terrain, TerrainSource::File { path: "a.asc".into() });
    }

    #[test]
    fn bad_values_are_config_errors() {
        let mut c = MissionConfig::default();
        c.rrt.w_length = 0.5;
        assert!(matches!(c.validate(), Err(MissionError::Config(_))));
        let mut c = MissionConfig::default();
        c.rover.mass_kg = 0.0;
        assert!(c.validate().is_err());
        let mut c = MissionConfig::default();
        c.rovers = 0;
        assert!(c.validate().is_err());
    }
}
