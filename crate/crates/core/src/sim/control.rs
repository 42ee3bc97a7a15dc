use crate::geom::Vec2;
use crate::scalar::{lit, wrap_deg, Real};

use super::{Actuation, RoverParams, RoverState};

/// Desired heading in degrees from the rover towards `waypoint`, in
/// `[-180, 180)`. A waypoint on top of the rover keeps the current yaw.
pub fn los_guidance<T: Real>(state: &RoverState<T>, waypoint: Vec2<T>) -> T {
    let d = waypoint - state.position();
    if d.x == T::zero() && d.y == T::zero() {
        return wrap_deg(state.yaw_deg);
    }
    wrap_deg(d.heading_deg())
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PidGains<T> {
    pub kp: T,
    pub ki: T,
    pub kd: T,
}

/// PID loop with a saturated output and an integrator clamped so its
/// contribution alone never exceeds the saturation.
#[derive(Debug, Clone, PartialEq)]
pub struct Pid<T> {
    pub gains: PidGains<T>,
    pub output_limit: T,
    /// Differentiate the error on the circle (degrees) instead of the line.
    pub angular: bool,
    integral: T,
    prev_error: Option<T>,
}

impl<T: Real> Pid<T> {
    pub fn new(gains: PidGains<T>, output_limit: T, angular: bool) -> Self {
        Self { gains, output_limit, angular, integral: T::zero(), prev_error: None }
    }

    pub fn reset(&mut self) {
        self.integral = T::zero();
        self.prev_error = None;
    }

    pub fn integral(&self) -> T {
        self.integral
    }

    pub fn update(&mut self, error: T, dt: T) -> T {
        let g = self.gains;
        let lim = self.output_limit;
        let derivative = match self.prev_error {
            Some(p) if self.angular => wrap_deg(error - p) / dt,
            Some(p) => (error - p) / dt,
            None => T::zero(),
        };
        self.prev_error = Some(error);
        if g.ki > T::zero() {
            let cap = lim / g.ki;
            self.integral = (self.integral + error * dt).max(-cap).min(cap);
        }
        let out = g.kp * error + g.ki * self.integral + g.kd * derivative;
        out.max(-lim).min(lim)
    }
}

/// Heading and speed loops plus waypoint-following settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState<T> {
    /// Yaw moment (N m) per degree of heading error.
    pub heading: Pid<T>,
    /// Surge force (N) per m/s of speed error.
    pub speed: Pid<T>,
    /// Distance at which an intermediate waypoint counts as reached.
    pub acceptance_radius_m: T,
    /// Parking tolerance at the last waypoint.
    pub final_radius_m: T,
    pub cruise_speed_mps: T,
    /// Speed per metre of remaining distance on the final approach, 1/s.
    pub approach_gain: T,
    pub min_approach_speed_mps: T,
}

impl<T: Real> ControllerState<T> {
    pub fn for_params(params: &RoverParams<T>) -> Self {
        Self {
            heading: Pid::new(
                PidGains { kp: lit(0.02), ki: T::zero(), kd: lit(0.0005) },
                params.max_yaw_moment_nm,
                true,
            ),
            speed: Pid::new(
                PidGains { kp: lit(8.0), ki: lit(4.0), kd: T::zero() },
                params.max_thrust_n,
                false,
            ),
            acceptance_radius_m: lit(0.5),
            final_radius_m: lit(0.1),
            cruise_speed_mps: lit(0.3),
            approach_gain: lit(0.5),
            min_approach_speed_mps: lit(0.05),
        }
    }

    pub fn reset(&mut self) {
        self.heading.reset();
        self.speed.reset();
    }

    pub fn validate(&self) -> bool {
        let gains = [self.heading.gains, self.speed.gains];
        gains.iter().all(|g| g.kp >= T::zero() && g.ki >= T::zero() && g.kd >= T::zero())
            && self.acceptance_radius_m > T::zero()
            && self.final_radius_m > T::zero()
            && self.cruise_speed_mps > T::zero()
    }

    /// Commanded surge speed: cruise scaled by how well the rover points at
    /// the waypoint, slowed down close to the end of the path.
    pub fn speed_reference(&self, heading_err_deg: T, dist_to_end: T, on_final: bool) -> T {
        let align = heading_err_deg.to_radians().cos().max(T::zero());
        let mut v = self.cruise_speed_mps * align;
        if on_final {
            let approach = (self.approach_gain * dist_to_end).max(self.min_approach_speed_mps);
            v = v.min(approach);
        }
        v
    }
}

impl<T: Real> Default for ControllerState<T> {
    fn default() -> Self {
        Self::for_params(&RoverParams::default())
    }
}

/// Yaw moment from the heading loop (error wrapped to the shorter way
/// round) and surge force from the speed loop.
pub fn pid_control<T: Real>(
    ctrl: &mut ControllerState<T>,
    heading_err_deg: T,
    speed_err_mps: T,
    dt: T,
) -> Actuation<T> {
    Actuation {
        surge_n: ctrl.speed.update(speed_err_mps, dt),
        sway_n: T::zero(),
        yaw_nm: ctrl.heading.update(wrap_deg(heading_err_deg), dt),
    }
}
