//! Closed-loop rover simulation.
//!
//! The body is a planar three degree-of-freedom rigid body (surge, sway,
//! yaw) in the Fossen matrix form
//!
//! ```text
//! M v' + (C(v) + D(v)) v + g = tau,    eta' = J(yaw) v
//! ```
//!
//! with height, roll and pitch slaved to the terrain surface after every
//! step. Guidance is line-of-sight towards the active waypoint; heading and
//! speed are held by two PID loops.

mod control;
mod dynamics;
mod trajectory;

pub use control::{los_guidance, pid_control, ControllerState, Pid, PidGains};
pub use dynamics::{kinetic_energy, step_dynamics, Actuation, RoverParams, RoverState};
pub use trajectory::{Trajectory, TrajectorySample};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

use crate::geom::Vec2;
use crate::scalar::{lit, to_f64, wrap_deg, Real};
use crate::terrain::{DemGrid, TerrainError};

#[derive(Debug, Error)]
pub enum SimError {
    #[error("invalid rover parameters: {0}")]
    BadParams(String),
    #[error("invalid simulation settings: {0}")]
    BadConfig(String),
    #[error("path has no waypoints")]
    EmptyPath,
    #[error("rover left the map at ({x:.3}, {y:.3})")]
    OutOfBounds {
        x: f64,
        y: f64,
        trajectory: Box<Trajectory<f64>>,
    },
    #[error("final waypoint not reached within {timeout_s} s")]
    Timeout {
        timeout_s: f64,
        trajectory: Box<Trajectory<f64>>,
    },
    #[error(transparent)]
    Terrain(#[from] TerrainError),
}

impl SimError {
    /// Trajectory flown up to the failure, if the run got that far.
    pub fn trajectory(&self) -> Option<&Trajectory<f64>> {
        match self {
            SimError::OutOfBounds { trajectory, .. } | SimError::Timeout { trajectory, .. } => {
                Some(trajectory)
            }
            _ => None,
        }
    }
}

/// Lateral slip: sway velocity noise `amplitude * tan(inclination) * N(0,1) * sqrt(dt)`
/// added every integration step. Zero amplitude disables it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlipModel<T> {
    pub amplitude: T,
}

impl<T: Real> SlipModel<T> {
    pub fn off() -> Self {
        Self { amplitude: T::zero() }
    }

    pub fn enabled(&self) -> bool {
        self.amplitude > T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig<T> {
    /// Integration step, s.
    pub dt: T,
    /// Integration steps per logged sample (5 at 0.02 s gives 10 Hz).
    pub log_every: usize,
    pub timeout_s: T,
    pub slip: SlipModel<T>,
}

impl<T: Real> Default for SimConfig<T> {
    fn default() -> Self {
        Self {
            dt: lit(0.02),
            log_every: 5,
            timeout_s: lit(600.0),
            slip: SlipModel::off(),
        }
    }
}

impl<T: Real> SimConfig<T> {
    pub fn log_dt(&self) -> T {
        self.dt * lit(self.log_every as f64)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if !(self.dt > T::zero()) || self.log_every == 0 {
            return Err(SimError::BadConfig("dt and log_every must be positive".into()));
        }
        if !(self.timeout_s > T::zero()) || self.slip.amplitude < T::zero() {
            return Err(SimError::BadConfig(
                "timeout must be positive and slip amplitude non-negative".into(),
            ));
        }
        Ok(())
    }
}

fn to_f64_trajectory<T: Real>(t: &Trajectory<T>) -> Box<Trajectory<f64>> {
    Box::new(t.map_scalar(to_f64))
}

/// Drives the rover along `waypoints` until it parks within the final
/// acceptance radius.
///
/// The first logged sample is the initial state at `t = 0`. Intermediate
/// waypoints are released once the rover comes within the controller's
/// acceptance radius; completion is checked at logging instants.
#[allow(clippy::too_many_arguments)]
pub fn simulate_path<T: Real>(
    initial: &RoverState<T>,
    waypoints: &[Vec2<T>],
    dem: &DemGrid<T>,
    params: &RoverParams<T>,
    ctrl: &ControllerState<T>,
    config: &SimConfig<T>,
    seed: u64,
) -> Result<Trajectory<T>, SimError> {
    params.validate()?;
    config.validate()?;
    if waypoints.is_empty() {
        return Err(SimError::EmptyPath);
    }
    if !ctrl.validate() {
        return Err(SimError::BadConfig("controller gains and radii must be valid".into()));
    }
    let mut ctrl = ctrl.clone();
    ctrl.reset();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = initial.with_time(T::zero()).slaved(dem)?;
    let mut traj = Trajectory::new(config.log_dt());
    traj.push_state(&state);

    let last = waypoints.len() - 1;
    let mut target = if last == 0 { 0 } else { 1 };
    let dt = config.dt;
    let mut step: usize = 0;
    let max_steps = to_f64((config.timeout_s / dt).ceil()) as usize;

    loop {
        let pos = state.position();
        while target < last && pos.distance(waypoints[target]) <= ctrl.acceptance_radius_m {
            target += 1;
        }
        if step % config.log_every == 0 {
            let done = target == last && pos.distance(waypoints[last]) <= ctrl.final_radius_m;
            if done {
                traj.finish(state);
                return Ok(traj);
            }
        }
        if step >= max_steps {
            traj.finish(state);
            return Err(SimError::Timeout {
                timeout_s: to_f64(config.timeout_s),
                trajectory: to_f64_trajectory(&traj),
            });
        }

        let wp = waypoints[target];
        let desired = los_guidance(&state, wp);
        let heading_err = wrap_deg(desired - state.yaw_deg);
        let speed_ref = ctrl.speed_reference(heading_err, pos.distance(waypoints[last]), target == last);
        let tau = pid_control(&mut ctrl, heading_err, speed_ref - state.u, dt);

        let next = step_dynamics(&state, &tau, params, dem, dt);
        let mut next = match next {
            Ok(s) => s,
            Err(SimError::Terrain(TerrainError::OutOfBounds { x, y })) => {
                traj.finish(state);
                return Err(SimError::OutOfBounds { x, y, trajectory: to_f64_trajectory(&traj) });
            }
            Err(e) => return Err(e),
        };
        if config.slip.enabled() {
            let n: f64 = StandardNormal.sample(&mut rng);
            let tilt = state.inclination_deg.to_radians().tan();
            next.v = next.v + config.slip.amplitude * tilt * lit::<T>(n) * dt.sqrt();
            next = next.speed_limited(params.max_speed_mps);
        }
        step += 1;
        next.t = lit::<T>(step as f64) * dt;
        state = next;
        if step % config.log_every == 0 {
            traj.push_state(&state);
        }
    }
}
