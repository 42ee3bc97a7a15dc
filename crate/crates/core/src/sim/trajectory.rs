use std::io::Write;

use crate::geom::Vec2;
use crate::scalar::{from_usize, to_f64, Real};

use super::RoverState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample<T> {
    pub t: T,
    pub x: T,
    pub y: T,
    pub z: T,
    pub roll_deg: T,
    pub pitch_deg: T,
    pub yaw_deg: T,
    pub speed_mps: T,
}

impl<T: Real> TrajectorySample<T> {
    pub fn position(&self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }

    fn from_state(state: &RoverState<T>, t: T) -> Self {
        Self {
            t,
            x: state.x,
            y: state.y,
            z: state.z,
            roll_deg: state.roll_deg,
            pitch_deg: state.pitch_deg,
            yaw_deg: state.yaw_deg,
            speed_mps: state.speed(),
        }
    }
}

/// Fixed-rate log of one rover; sample `k` is taken at `k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory<T> {
    pub rover_id: usize,
    pub priority: usize,
    pub dt: T,
    pub samples: Vec<TrajectorySample<T>>,
    /// Full state when the run stopped (may lie between log instants).
    pub end_state: RoverState<T>,
}

impl<T: Real> Trajectory<T> {
    pub fn new(dt: T) -> Self {
        Self { rover_id: 0, priority: 0, dt, samples: Vec::new(), end_state: RoverState::default() }
    }

    /// A rover standing still at `state` for `samples` log instants.
    pub fn parked(state: &RoverState<T>, samples: usize, dt: T) -> Self {
        let mut parked = *state;
        parked.u = T::zero();
        parked.v = T::zero();
        parked.r_deg_s = T::zero();
        let mut t = Self::new(dt);
        for _ in 0..samples.max(1) {
            t.push_state(&parked);
        }
        t.finish(parked.with_time(t.duration()));
        t
    }

    pub(crate) fn push_state(&mut self, state: &RoverState<T>) {
        let t = from_usize::<T>(self.samples.len()) * self.dt;
        self.samples.push(TrajectorySample::from_state(state, t));
    }

    pub(crate) fn finish(&mut self, state: RoverState<T>) {
        self.end_state = state;
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Time of the last sample.
    pub fn duration(&self) -> T {
        from_usize::<T>(self.samples.len().saturating_sub(1)) * self.dt
    }

    /// Sample `k`, or the last sample once the rover has stopped logging.
    pub fn sample_at(&self, k: usize) -> &TrajectorySample<T> {
        &self.samples[k.min(self.samples.len() - 1)]
    }

    /// Odometry over the logged samples, including height changes.
    pub fn distance(&self) -> T {
        self.samples.windows(2).fold(T::zero(), |acc, w| {
            let (a, b) = (&w[0], &w[1]);
            let (dx, dy, dz) = (b.x - a.x, b.y - a.y, b.z - a.z);
            acc + (dx * dx + dy * dy + dz * dz).sqrt()
        })
    }

    /// Same motion starting `samples` log instants later; the rover waits at
    /// its first pose meanwhile.
    pub fn delayed(&self, samples: usize) -> Self {
        if samples == 0 || self.samples.is_empty() {
            return self.clone();
        }
        let mut first = self.samples[0];
        first.speed_mps = T::zero();
        let mut out = Vec::with_capacity(self.samples.len() + samples);
        out.extend(std::iter::repeat_n(first, samples));
        out.extend(self.samples.iter().copied());
        for (k, s) in out.iter_mut().enumerate() {
            s.t = from_usize::<T>(k) * self.dt;
        }
        let mut end_state = self.end_state;
        end_state.t = end_state.t + from_usize::<T>(samples) * self.dt;
        Self { samples: out, end_state, ..self.clone() }
    }

    pub fn map_scalar<U: Real>(&self, f: impl Fn(T) -> U) -> Trajectory<U> {
        let s = &self.end_state;
        Trajectory {
            rover_id: self.rover_id,
            priority: self.priority,
            dt: f(self.dt),
            samples: self
                .samples
                .iter()
                .map(|p| TrajectorySample {
                    t: f(p.t),
                    x: f(p.x),
                    y: f(p.y),
                    z: f(p.z),
                    roll_deg: f(p.roll_deg),
                    pitch_deg: f(p.pitch_deg),
                    yaw_deg: f(p.yaw_deg),
                    speed_mps: f(p.speed_mps),
                })
                .collect(),
            end_state: RoverState {
                x: f(s.x),
                y: f(s.y),
                z: f(s.z),
                roll_deg: f(s.roll_deg),
                pitch_deg: f(s.pitch_deg),
                yaw_deg: f(s.yaw_deg),
                inclination_deg: f(s.inclination_deg),
                u: f(s.u),
                v: f(s.v),
                r_deg_s: f(s.r_deg_s),
                t: f(s.t),
            },
        }
    }

    pub fn write_csv_header<W: Write>(mut out: W) -> std::io::Result<()> {
        writeln!(out, "t_s,x_m,y_m,z_m,roll_deg,pitch_deg,yaw_deg,speed_mps")
    }

    /// Sample rows with `t_offset` added to every time stamp.
    pub fn write_csv_rows<W: Write>(&self, mut out: W, t_offset: T) -> std::io::Result<()> {
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                to_f64(s.t + t_offset),
                to_f64(s.x),
                to_f64(s.y),
                to_f64(s.z),
                to_f64(s.roll_deg),
                to_f64(s.pitch_deg),
                to_f64(s.yaw_deg),
                to_f64(s.speed_mps)
            )?;
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        Self::write_csv_header(&mut out)?;
        self.write_csv_rows(&mut out, T::zero())
    }
}
