use crate::geom::Vec2;
use crate::scalar::{lit, wrap_deg, Real};
use crate::terrain::{surface_query, DemGrid};

use super::SimError;

/// Mass, damping, gravity and actuator limits of one rover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoverParams<T> {
    /// Rigid-body inertia over (surge, sway, yaw); kg, kg and kg m^2.
    pub mass_matrix: [[T; 3]; 3],
    /// Linear damping per axis (N s/m, N s/m, N m s/rad).
    pub linear_damping: [T; 3],
    /// Quadratic damping per axis, multiplies |v| v.
    pub quadratic_damping: [T; 3],
    /// Surface gravity, m/s^2.
    pub gravity: T,
    /// Scales the slope restoring force; 0 ignores slopes.
    pub gravity_scale: T,
    pub max_thrust_n: T,
    pub max_yaw_moment_nm: T,
    pub max_speed_mps: T,
    pub footprint_radius_m: T,
    pub search_radius_m: T,
}

impl<T: Real> Default for RoverParams<T> {
    fn default() -> Self {
        let z = T::zero();
        Self {
            mass_matrix: [[lit(2.5), z, z], [z, lit(2.5), z], [z, z, lit(0.03)]],
            linear_damping: [lit(5.0), lit(200.0), lit(0.3)],
            quadratic_damping: [lit(1.0), lit(10.0), lit(0.05)],
            gravity: lit(3.721),
            gravity_scale: T::one(),
            max_thrust_n: lit(3.0),
            max_yaw_moment_nm: lit(0.5),
            max_speed_mps: lit(0.5),
            footprint_radius_m: lit(0.3),
            search_radius_m: lit(0.5),
        }
    }
}

impl<T: Real> RoverParams<T> {
    pub fn validate(&self) -> Result<(), SimError> {
        let m = &self.mass_matrix;
        let sym = (0..3).all(|i| (0..3).all(|j| m[i][j] == m[j][i]));
        let d1 = m[0][0];
        let d2 = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if !sym || !(d1 > T::zero() && d2 > T::zero() && det3(m) > T::zero()) {
            return Err(SimError::BadParams("mass matrix must be symmetric positive definite".into()));
        }
        let dmp = self.linear_damping.iter().chain(&self.quadratic_damping);
        if dmp.clone().any(|d| !(*d >= T::zero())) {
            return Err(SimError::BadParams("damping must be non-negative".into()));
        }
        let positive = [
            self.max_thrust_n,
            self.max_yaw_moment_nm,
            self.max_speed_mps,
            self.footprint_radius_m,
            self.search_radius_m,
        ];
        if positive.iter().any(|v| !(*v > T::zero())) {
            return Err(SimError::BadParams("limits and radii must be positive".into()));
        }
        if !(self.gravity >= T::zero() && self.gravity_scale >= T::zero()) {
            return Err(SimError::BadParams("gravity must be non-negative".into()));
        }
        Ok(())
    }

    pub fn mass(&self) -> T {
        self.mass_matrix[0][0]
    }
}

fn det3<T: Real>(m: &[[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inverse3<T: Real>(m: &[[T; 3]; 3]) -> [[T; 3]; 3] {
    let d = det3(m);
    let c = |r0: usize, c0: usize, r1: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 1, 2, 2) / d, -c(0, 1, 2, 2) / d, c(0, 1, 1, 2) / d],
        [-c(1, 0, 2, 2) / d, c(0, 0, 2, 2) / d, -c(0, 0, 1, 2) / d],
        [c(1, 0, 2, 1) / d, -c(0, 0, 2, 1) / d, c(0, 0, 1, 1) / d],
    ]
}

/// Commanded surge force, sway force and yaw moment.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Actuation<T> {
    pub surge_n: T,
    pub sway_n: T,
    pub yaw_nm: T,
}

impl<T: Real> Actuation<T> {
    pub fn clamped(&self, p: &RoverParams<T>) -> Self {
        let c = |v: T, lim: T| v.max(-lim).min(lim);
        Self {
            surge_n: c(self.surge_n, p.max_thrust_n),
            sway_n: c(self.sway_n, p.max_thrust_n),
            yaw_nm: c(self.yaw_nm, p.max_yaw_moment_nm),
        }
    }
}

/// Pose in the map frame plus body-frame velocities.
///
/// Yaw is counter-clockwise from +x; sway is positive to the left.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RoverState<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub roll_deg: T,
    pub pitch_deg: T,
    pub yaw_deg: T,
    /// Steepest local inclination under the rover.
    pub inclination_deg: T,
    pub u: T,
    pub v: T,
    pub r_deg_s: T,
    pub t: T,
}

impl<T: Real> RoverState<T> {
    /// Stationary rover at `(x, y)` facing `yaw_deg`, resting on the terrain.
    pub fn at_rest(dem: &DemGrid<T>, position: Vec2<T>, yaw_deg: T) -> Result<Self, SimError> {
        Self { x: position.x, y: position.y, yaw_deg, ..Self::default() }.slaved(dem)
    }

    pub fn position(&self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }

    pub fn speed(&self) -> T {
        (self.u * self.u + self.v * self.v).sqrt()
    }

    pub fn with_time(mut self, t: T) -> Self {
        self.t = t;
        self
    }

    /// Same pose with zero velocity at time 0.
    pub fn at_rest_pose(mut self) -> Self {
        self.u = T::zero();
        self.v = T::zero();
        self.r_deg_s = T::zero();
        self.t = T::zero();
        self
    }

    /// Copy with height and attitude taken from the terrain under it.
    pub fn slaved(mut self, dem: &DemGrid<T>) -> Result<Self, SimError> {
        self.yaw_deg = wrap_deg(self.yaw_deg);
        let q = surface_query(dem, self.x, self.y, self.yaw_deg)?;
        self.z = q.z;
        self.roll_deg = q.roll_deg;
        self.pitch_deg = q.pitch_deg;
        self.inclination_deg = q.inclination_deg;
        Ok(self)
    }

    pub(crate) fn speed_limited(mut self, max_speed: T) -> Self {
        let s = self.speed();
        if s > max_speed {
            let k = max_speed / s;
            self.u = self.u * k;
            self.v = self.v * k;
        }
        self
    }
}

/// `0.5 v^T M v` with the yaw rate in rad/s.
pub fn kinetic_energy<T: Real>(state: &RoverState<T>, params: &RoverParams<T>) -> T {
    let v = [state.u, state.v, state.r_deg_s.to_radians()];
    let m = &params.mass_matrix;
    let mut e = T::zero();
    for i in 0..3 {
        for j in 0..3 {
            e = e + v[i] * m[i][j] * v[j];
        }
    }
    e * lit(0.5)
}

/// One explicit Euler step of the planar rigid body, then terrain slaving.
///
/// `tau` is clamped to the actuator limits first. The slope term pushes
/// downhill: `g = [m g sin(pitch), -m g sin(roll), 0]`.
pub fn step_dynamics<T: Real>(
    state: &RoverState<T>,
    tau: &Actuation<T>,
    params: &RoverParams<T>,
    dem: &DemGrid<T>,
    dt: T,
) -> Result<RoverState<T>, SimError> {
    let tau = tau.clamped(params);
    let m = &params.mass_matrix;
    let (u, v, r) = (state.u, state.v, state.r_deg_s.to_radians());
    let vel = [u, v, r];

    // rigid-body Coriolis/centripetal terms for a general planar M
    let a = m[1][1] * v + m[1][2] * r;
    let b = m[0][0] * u;
    let coriolis = [-a * r, b * r, a * u - b * v];

    let mg = params.mass() * params.gravity * params.gravity_scale;
    let g = [
        mg * state.pitch_deg.to_radians().sin(),
        -mg * state.roll_deg.to_radians().sin(),
        T::zero(),
    ];
    let tau_v = [tau.surge_n, tau.sway_n, tau.yaw_nm];
    let mut rhs = [T::zero(); 3];
    for i in 0..3 {
        let damping = params.linear_damping[i] * vel[i]
            + params.quadratic_damping[i] * vel[i].abs() * vel[i];
        rhs[i] = tau_v[i] - coriolis[i] - damping - g[i];
    }
    let minv = inverse3(m);
    let mut acc = [T::zero(); 3];
    for i in 0..3 {
        acc[i] = (0..3).fold(T::zero(), |s, j| s + minv[i][j] * rhs[j]);
    }

    let (s, c) = state.yaw_deg.to_radians().sin_cos();
    let mut next = *state;
    next.x = state.x + dt * (u * c - v * s);
    next.y = state.y + dt * (u * s + v * c);
    next.yaw_deg = state.yaw_deg + dt * state.r_deg_s;
    next.u = u + dt * acc[0];
    next.v = v + dt * acc[1];
    next.r_deg_s = (r + dt * acc[2]).to_degrees();
    next.t = state.t + dt;
    next.speed_limited(params.max_speed_mps).slaved(dem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_general_mass_matrix() {
        let m = [[3.0, 0.1, 0.2], [0.1, 2.0, 0.3], [0.2, 0.3, 1.0]];
        let inv = inverse3(&m);
        for i in 0..3 {
            for j in 0..3 {
                let p: f64 = (0..3).map(|k| m[i][k] * inv[k][j]).sum();
                assert!((p - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_indefinite_mass() {
        let mut p = RoverParams::<f64>::default();
        p.mass_matrix[2][2] = -1.0;
        assert!(p.validate().is_err());
        let mut p = RoverParams::<f64>::default();
        p.linear_damping[0] = -1.0;
        assert!(p.validate().is_err());
    }

    #[test]
    fn coriolis_does_no_work() {
        let p = RoverParams::<f64> {
            mass_matrix: [[3.0, 0.0, 0.0], [0.0, 4.0, 0.5], [0.0, 0.5, 1.0]],
            ..RoverParams::default()
        };
        let (u, v, r) = (0.3, -0.2, 0.7);
        let m = p.mass_matrix;
        let a = m[1][1] * v + m[1][2] * r;
        let b = m[0][0] * u;
        let c = [-a * r, b * r, a * u - b * v];
        assert!((c[0] * u + c[1] * v + c[2] * r).abs() < 1e-15);
    }
}
