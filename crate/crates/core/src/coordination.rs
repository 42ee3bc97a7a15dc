//! Prioritised planning of the rover team.
//!
//! Each segment between consecutive team targets is planned rover by rover
//! in priority order. Rover 1 is committed as planned; every later rover is
//! simulated and checked against all committed trajectories, and replanned
//! with a fresh seed until it is clear of them.

use thiserror::Error;

use crate::geom::{Rect, Vec2};
use crate::rrt::{plan_segment_among, KeepOut, Path, PlanError, RrtConfig};
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::seeds;
use crate::sim::{
    simulate_path, ControllerState, RoverParams, RoverState, SimConfig, SimError, Trajectory,
    TrajectorySample,
};
use crate::terrain::{surface_query, DemGrid, TerrainClass, TraversabilityMap};

#[derive(Debug, Error)]
pub enum CoordinationError {
    #[error("no targets to visit")]
    NoTargets,
    #[error("invalid coordination settings: {0}")]
    BadConfig(String),
    #[error("trajectories sampled at different rates ({a} s and {b} s)")]
    SampleRateMismatch { a: f64, b: f64 },
    #[error("segment {segment}, rover {rover}: planning failed: {source}")]
    Planning {
        segment: usize,
        rover: usize,
        #[source]
        source: PlanError,
    },
    #[error("segment {segment}, rover {rover}: simulation failed: {source}")]
    Simulation {
        segment: usize,
        rover: usize,
        #[source]
        source: SimError,
    },
    #[error(
        "segment {segment}, rover {rover}: still in conflict after {attempts} attempts \
         (rovers {} and {} at t = {:.1} s, {:.3} m apart)",
        conflict.rovers.0, conflict.rovers.1, conflict.time_s, conflict.separation_m
    )]
    RetriesExhausted {
        segment: usize,
        rover: usize,
        attempts: usize,
        conflict: ConflictReport,
    },
}

/// First instant two rovers come closer than the safety distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConflictReport {
    pub time_s: f64,
    pub rovers: (usize, usize),
    pub separation_m: f64,
    pub positions: ([f64; 2], [f64; 2]),
}

/// Planar separation at every shared time stamp; a trajectory that ends
/// first keeps its final pose. Returns the earliest violation of `d_safe`.
pub fn check_conflict<T: Real>(
    a: &Trajectory<T>,
    b: &Trajectory<T>,
    d_safe: T,
) -> Result<Option<ConflictReport>, CoordinationError> {
    let (da, db) = (to_f64(a.dt), to_f64(b.dt));
    if (da - db).abs() > 1e-12 * da.abs().max(db.abs()) {
        return Err(CoordinationError::SampleRateMismatch { a: da, b: db });
    }
    if a.is_empty() || b.is_empty() {
        return Ok(None);
    }
    for k in 0..a.len().max(b.len()) {
        let (pa, pb) = (a.sample_at(k), b.sample_at(k));
        let sep = pa.position().distance(pb.position());
        if sep < d_safe {
            return Ok(Some(ConflictReport {
                time_s: to_f64(from_usize::<T>(k) * a.dt),
                rovers: (a.rover_id, b.rover_id),
                separation_m: to_f64(sep),
                positions: ([to_f64(pa.x), to_f64(pa.y)], [to_f64(pb.x), to_f64(pb.y)]),
            }));
        }
    }
    Ok(None)
}

/// Smallest planar separation over all rover pairs and shared time stamps.
pub fn min_separation<T: Real>(trajectories: &[Trajectory<T>]) -> Option<T> {
    let mut best: Option<T> = None;
    for (i, a) in trajectories.iter().enumerate() {
        for b in &trajectories[i + 1..] {
            for k in 0..a.len().max(b.len()) {
                let d = a.sample_at(k).position().distance(b.sample_at(k).position());
                best = Some(best.map_or(d, |m| m.min(d)));
            }
        }
    }
    best
}

/// Per-rover goals for one segment: the team goal shifted sideways by
/// `(k - (m + 1) / 2) * spacing` along the left normal of the segment, so
/// rover 1 is rightmost. A zero-length segment uses the +x direction.
/// Goals are clamped into `bounds` shrunk by `margin`.
pub fn assign_rover_goals<T: Real>(
    from: Vec2<T>,
    to: Vec2<T>,
    rovers: usize,
    spacing: T,
    bounds: Rect<T>,
    margin: T,
) -> Vec<Vec2<T>> {
    let d = to - from;
    let len = d.norm();
    let dir = if len > lit(1e-12) { d * (T::one() / len) } else { Vec2::new(T::one(), T::zero()) };
    let left = dir.perp_left();
    let mid = from_usize::<T>(rovers + 1) * lit(0.5);
    let inner = bounds.inset(margin);
    (1..=rovers)
        .map(|k| inner.clamp(to + left * ((from_usize::<T>(k) - mid) * spacing)))
        .collect()
}

/// Where a rover may be sent to stop.
#[derive(Debug, Clone, Copy)]
pub struct GoalSites<'a, T> {
    pub trav: &'a TraversabilityMap<T>,
    /// When set, the ground within half a metre must also stay flatter
    /// than `max_inclination_deg`.
    pub dem: Option<&'a DemGrid<T>>,
    pub max_inclination_deg: T,
}

impl<'a, T: Real> GoalSites<'a, T> {
    pub fn new(trav: &'a TraversabilityMap<T>) -> Self {
        Self { trav, dem: None, max_inclination_deg: lit(90.0) }
    }

    pub fn with_slope_cap(mut self, dem: &'a DemGrid<T>, max_inclination_deg: T) -> Self {
        self.dem = Some(dem);
        self.max_inclination_deg = max_inclination_deg;
        self
    }

    /// No impassable block in the 3x3 neighbourhood, and gentle enough ground.
    pub fn is_clear(&self, p: Vec2<T>) -> bool {
        let cs = self.trav.cell_size();
        let offsets = [-1.0, 0.0, 1.0];
        let passable = offsets.iter().all(|&dx| {
            offsets.iter().all(|&dy| {
                let q = p + Vec2::new(cs * lit(dx), cs * lit(dy));
                matches!(self.trav.class_at(q), Some(TerrainClass::Traversable | TerrainClass::HighRisk))
            })
        });
        let Some(dem) = self.dem else {
            return passable;
        };
        let gentle = |q: Vec2<T>| {
            surface_query(dem, q.x, q.y, T::zero()).is_ok_and(|s| s.inclination_deg < self.max_inclination_deg)
        };
        passable
            && gentle(p)
            && (0..8).all(|i| gentle(p + Vec2::from_heading_deg(from_usize::<T>(i * 45)) * lit(0.5)))
    }
}

/// Moves goals that are not clear sites to the nearest clear point, keeping
/// at least `min_separation` from goals already placed. Returns `None` for a
/// goal with no acceptable point within `search_radius`.
pub fn snap_goals<T: Real>(
    goals: &[Vec2<T>],
    sites: &GoalSites<'_, T>,
    min_separation: T,
    search_radius: T,
) -> Vec<Option<Vec2<T>>> {
    let mut placed: Vec<Vec2<T>> = Vec::new();
    let mut out = Vec::with_capacity(goals.len());
    let step = sites.trav.cell_size();
    let rings = to_f64((search_radius / step).ceil()) as usize;
    for &g in goals {
        let ok = |p: Vec2<T>| sites.is_clear(p) && placed.iter().all(|q| q.distance(p) >= min_separation);
        let mut found = ok(g).then_some(g);
        'rings: for ring in 1..=rings {
            if found.is_some() {
                break;
            }
            let r = from_usize::<T>(ring) * step;
            let n = 8 * ring;
            for i in 0..n {
                let a = from_usize::<T>(i) * lit::<T>(360.0) / from_usize::<T>(n);
                let p = g + Vec2::from_heading_deg(a) * r;
                if ok(p) {
                    found = Some(p);
                    break 'rings;
                }
            }
        }
        if let Some(p) = found {
            placed.push(p);
        }
        out.push(found);
    }
    out
}

/// Path planning for one rover and segment.
pub trait SegmentPlanner<T: Real> {
    fn plan(
        &self,
        rover: usize,
        start: Vec2<T>,
        goal: Vec2<T>,
        clearance_m: T,
        keep_out: &[KeepOut<T>],
        seed: u64,
    ) -> Result<Path<T>, PlanError>;
}

/// Closed-loop execution of a planned path.
pub trait RoverSimulator<T: Real> {
    fn simulate(
        &self,
        rover: usize,
        start: &RoverState<T>,
        path: &Path<T>,
        seed: u64,
    ) -> Result<Trajectory<T>, SimError>;
}

/// RRT* on a terrain model.
#[derive(Debug, Clone)]
pub struct TerrainPlanner<'a, T> {
    pub dem: &'a DemGrid<T>,
    pub trav: &'a TraversabilityMap<T>,
    pub config: RrtConfig<T>,
}

impl<T: Real> SegmentPlanner<T> for TerrainPlanner<'_, T> {
    fn plan(
        &self,
        _rover: usize,
        start: Vec2<T>,
        goal: Vec2<T>,
        clearance_m: T,
        keep_out: &[KeepOut<T>],
        seed: u64,
    ) -> Result<Path<T>, PlanError> {
        let config = RrtConfig { clearance_m, ..self.config };
        plan_segment_among(start, goal, self.dem, self.trav, &config, keep_out, seed)
    }
}

/// Rigid-body simulation on a terrain model; slip noise is seeded per call.
#[derive(Debug, Clone)]
pub struct TerrainSimulator<'a, T> {
    pub dem: &'a DemGrid<T>,
    pub params: RoverParams<T>,
    pub controller: ControllerState<T>,
    pub config: SimConfig<T>,
}

impl<T: Real> RoverSimulator<T> for TerrainSimulator<'_, T> {
    fn simulate(
        &self,
        _rover: usize,
        start: &RoverState<T>,
        path: &Path<T>,
        seed: u64,
    ) -> Result<Trajectory<T>, SimError> {
        simulate_path(start, &path.points(), self.dem, &self.params, &self.controller, &self.config, seed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinationConfig<T> {
    pub d_safe_m: T,
    /// Radius around teammates' start and goal spots that paths avoid.
    pub keep_out_m: T,
    /// Replans allowed per rover and segment after the first attempt.
    pub max_retries: usize,
    /// Lateral distance between neighbouring rover goals.
    pub lateral_spacing_m: T,
    /// Goals are kept this far inside the map edge.
    pub goal_margin_m: T,
    /// Planning region clearance, and the value used after a failed plan.
    pub clearance_m: T,
    pub inflated_clearance_m: T,
    /// Further failed plans double the clearance up to this value.
    pub max_clearance_m: T,
    /// Nearby goals tried when a rover cannot reach its own safely.
    pub goal_relocations: usize,
    pub relocation_radius_m: T,
    /// Attempts that use a fresh seed only before departures are delayed.
    pub retries_before_delay: usize,
    /// Extra departure delay per further attempt, s.
    pub delay_step_s: T,
    pub master_seed: u64,
}

impl<T: Real> Default for CoordinationConfig<T> {
    fn default() -> Self {
        Self {
            d_safe_m: lit(1.0),
            keep_out_m: lit(1.2),
            max_retries: 20,
            lateral_spacing_m: lit(2.0),
            goal_margin_m: lit(0.5),
            clearance_m: lit(2.0),
            inflated_clearance_m: lit(4.0),
            max_clearance_m: lit(16.0),
            goal_relocations: 8,
            relocation_radius_m: lit(4.0),
            retries_before_delay: 2,
            delay_step_s: lit(3.0),
            master_seed: 0,
        }
    }
}

impl<T: Real> CoordinationConfig<T> {
    pub fn validate(&self) -> Result<(), CoordinationError> {
        let bad = |m: &str| Err(CoordinationError::BadConfig(m.to_string()));
        if !(self.d_safe_m > T::zero()) {
            return bad("d_safe must be positive");
        }
        if !(self.keep_out_m >= T::zero()) {
            return bad("keep-out radius must be non-negative");
        }
        if !(self.lateral_spacing_m >= T::zero() && self.goal_margin_m >= T::zero()) {
            return bad("spacing and margin must be non-negative");
        }
        if !(self.clearance_m >= T::zero() && self.inflated_clearance_m >= self.clearance_m) {
            return bad("inflated clearance must be at least the clearance");
        }
        if !(self.max_clearance_m >= self.inflated_clearance_m) {
            return bad("maximum clearance must be at least the inflated clearance");
        }
        if !(self.relocation_radius_m >= T::zero()) {
            return bad("relocation radius must be non-negative");
        }
        if !(self.delay_step_s >= T::zero()) {
            return bad("delay step must be non-negative");
        }
        Ok(())
    }

    /// Next planning-region clearance after a failed plan, if any.
    fn wider_clearance(&self, current: T) -> Option<T> {
        if current < self.inflated_clearance_m {
            Some(self.inflated_clearance_m)
        } else {
            let next = current * lit(2.0);
            (next <= self.max_clearance_m && next > current).then_some(next)
        }
    }

    /// Departure delay, in log samples, for a given attempt.
    fn delay_samples(&self, attempt: usize, dt: T) -> usize {
        if attempt < self.retries_before_delay || !(dt > T::zero()) {
            return 0;
        }
        let k = attempt + 1 - self.retries_before_delay;
        to_f64((from_usize::<T>(k) * self.delay_step_s / dt).round()) as usize
    }
}

/// Committed result of one segment.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentPlan<T> {
    /// Zero-based segment index.
    pub index: usize,
    pub goals: Vec<Vec2<T>>,
    pub paths: Vec<Path<T>>,
    pub trajectories: Vec<Trajectory<T>>,
    /// Replans per rover.
    pub retries: Vec<usize>,
    /// Departure delay per rover, in log samples.
    pub delays: Vec<usize>,
}

impl<T: Real> SegmentPlan<T> {
    /// Time until the last rover parks.
    pub fn duration(&self) -> T {
        self.trajectories.iter().map(Trajectory::duration).fold(T::zero(), T::max)
    }

    fn samples(&self) -> usize {
        self.trajectories.iter().map(Trajectory::len).max().unwrap_or(0)
    }
}

struct Committed<T> {
    path: Path<T>,
    trajectory: Trajectory<T>,
    attempts: usize,
    delay: usize,
}

/// Everything one rover needs to find a conflict-free run to one goal.
struct RoverTask<'a, T> {
    segment: usize,
    rover: usize,
    start: &'a RoverState<T>,
    goal: Vec2<T>,
    keep_out: Vec<KeepOut<T>>,
    relocation: usize,
}

impl<T: Real> RoverTask<'_, T> {
    fn run(
        mut self,
        committed: &[Trajectory<T>],
        planner: &dyn SegmentPlanner<T>,
        simulator: &dyn RoverSimulator<T>,
        config: &CoordinationConfig<T>,
    ) -> Result<Committed<T>, CoordinationError> {
        let (segment, rover) = (self.segment, self.rover);
        let labels = |kind: u64, attempt: usize| {
            [kind, segment as u64, rover as u64, attempt as u64, self.relocation as u64]
        };
        let mut attempt = 0usize;
        let mut clearance = config.clearance_m;
        loop {
            let seed = seeds::derive(config.master_seed, &labels(seeds::PLAN, attempt));
            let path = match planner.plan(rover, self.start.position(), self.goal, clearance, &self.keep_out, seed) {
                Ok(p) => p,
                Err(PlanError::NoPathFound { .. }) if config.wider_clearance(clearance).is_some() => {
                    clearance = config.wider_clearance(clearance).unwrap_or(clearance);
                    continue;
                }
                Err(PlanError::NoPathFound { .. }) if !self.keep_out.is_empty() => {
                    self.keep_out.clear();
                    continue;
                }
                Err(source) => return Err(CoordinationError::Planning { segment, rover, source }),
            };
            let slip_seed = seeds::derive(config.master_seed, &labels(seeds::SLIP, attempt));
            let exhausted = attempt >= config.max_retries;
            let mut trajectory = match simulator.simulate(rover, self.start, &path, slip_seed) {
                Ok(t) => t,
                Err(SimError::Timeout { .. }) if !exhausted => {
                    attempt += 1;
                    continue;
                }
                Err(source) => return Err(CoordinationError::Simulation { segment, rover, source }),
            };
            let delay = if committed.is_empty() { 0 } else { config.delay_samples(attempt, trajectory.dt) };
            trajectory = trajectory.delayed(delay);
            trajectory.rover_id = rover;
            trajectory.priority = rover;

            let mut conflict = None;
            for other in committed {
                if let Some(c) = check_conflict(&trajectory, other, config.d_safe_m)? {
                    conflict = Some(c);
                    break;
                }
            }
            match conflict {
                None => return Ok(Committed { path, trajectory, attempts: attempt, delay }),
                Some(c) if exhausted => {
                    return Err(CoordinationError::RetriesExhausted {
                        segment,
                        rover,
                        attempts: attempt + 1,
                        conflict: c,
                    })
                }
                Some(_) => attempt += 1,
            }
        }
    }
}

/// Failures that another goal might avoid.
fn goal_dependent(e: &CoordinationError) -> bool {
    match e {
        CoordinationError::RetriesExhausted { .. } => true,
        CoordinationError::Planning { source, .. } => {
            matches!(source, PlanError::NoPathFound { .. } | PlanError::InvalidGoal { .. })
        }
        CoordinationError::Simulation { source, .. } => {
            matches!(source, SimError::Timeout { .. } | SimError::OutOfBounds { .. })
        }
        _ => false,
    }
}

/// Clear sites near `goal`, nearest ring first, at least `min_separation`
/// from every other rover's goal.
fn relocation_candidates<T: Real>(
    goal: Vec2<T>,
    others: &[Vec2<T>],
    sites: &GoalSites<'_, T>,
    min_separation: T,
    radius: T,
    count: usize,
) -> Vec<Vec2<T>> {
    let step = sites.trav.cell_size();
    let rings = to_f64((radius / step).ceil()) as usize;
    let mut out = Vec::new();
    for ring in 1..=rings {
        let r = from_usize::<T>(ring) * step;
        let n = 8 * ring;
        for i in 0..n {
            let a = from_usize::<T>(i) * lit::<T>(360.0) / from_usize::<T>(n);
            let p = goal + Vec2::from_heading_deg(a) * r;
            if sites.is_clear(p) && others.iter().all(|q| q.distance(p) >= min_separation) {
                out.push(p);
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    out
}

/// Plans, simulates and deconflicts every rover for one segment.
///
/// `starts[k]` and `goals[k]` belong to rover `k + 1`; the returned
/// trajectories all start at segment time 0. When a rover cannot reach its
/// goal safely and `sites` is given, nearby clear sites are tried in turn.
pub fn coordinate_segment<T: Real>(
    index: usize,
    starts: &[RoverState<T>],
    goals: &[Vec2<T>],
    planner: &dyn SegmentPlanner<T>,
    simulator: &dyn RoverSimulator<T>,
    sites: Option<&GoalSites<'_, T>>,
    config: &CoordinationConfig<T>,
) -> Result<SegmentPlan<T>, CoordinationError> {
    config.validate()?;
    if starts.len() != goals.len() {
        return Err(CoordinationError::BadConfig("one start and one goal per rover".into()));
    }
    let mut plan = SegmentPlan {
        index,
        goals: goals.to_vec(),
        paths: Vec::new(),
        trajectories: Vec::new(),
        retries: Vec::new(),
        delays: Vec::new(),
    };
    let spacing = config.d_safe_m.max(config.keep_out_m);
    for (k, start) in starts.iter().enumerate() {
        let rover = k + 1;
        let others: Vec<Vec2<T>> =
            plan.goals.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, g)| *g).collect();
        let keep_out: Vec<KeepOut<T>> = starts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k)
            .map(|(_, s)| s.position())
            .chain(others.iter().copied())
            .map(|p| KeepOut::new(p, config.keep_out_m))
            .collect();
        let mut candidates = vec![plan.goals[k]];
        if let Some(sites) = sites {
            candidates.extend(relocation_candidates(
                plan.goals[k],
                &others,
                sites,
                spacing,
                config.relocation_radius_m,
                config.goal_relocations,
            ));
        }
        let mut first_error = None;
        let mut spent = 0usize;
        for (relocation, &goal) in candidates.iter().enumerate() {
            let task = RoverTask { segment: index, rover, start, goal, keep_out: keep_out.clone(), relocation };
            match task.run(&plan.trajectories, planner, simulator, config) {
                Ok(c) => {
                    plan.goals[k] = goal;
                    plan.paths.push(c.path);
                    plan.trajectories.push(c.trajectory);
                    plan.retries.push(spent + c.attempts);
                    plan.delays.push(c.delay);
                    first_error = None;
                    break;
                }
                Err(e) if goal_dependent(&e) => {
                    spent += config.max_retries + 1;
                    first_error.get_or_insert(e);
                }
                Err(e) => return Err(e),
            }
        }
        if let Some(e) = first_error {
            return Err(e);
        }
    }
    Ok(plan)
}

/// Whole-mission plan: one [`SegmentPlan`] per team target.
#[derive(Debug, Clone, PartialEq)]
pub struct TeamPlan<T> {
    pub rovers: usize,
    pub initial: Vec<RoverState<T>>,
    pub segments: Vec<SegmentPlan<T>>,
}

impl<T: Real> TeamPlan<T> {
    /// Segments run back to back; each lasts until its slowest rover parks.
    pub fn total_time(&self) -> T {
        self.segments.iter().map(SegmentPlan::duration).fold(T::zero(), |a, b| a + b)
    }

    /// 3D odometry of rover `k` (zero-based) over all segments.
    pub fn rover_distance(&self, k: usize) -> T {
        self.segments.iter().map(|s| s.trajectories[k].distance()).fold(T::zero(), |a, b| a + b)
    }

    /// Time rover `k` spends driving or waiting to depart, excluding time
    /// parked while slower rovers finish a segment.
    pub fn rover_duration(&self, k: usize) -> T {
        self.segments.iter().map(|s| s.trajectories[k].duration()).fold(T::zero(), |a, b| a + b)
    }

    pub fn total_retries(&self) -> usize {
        self.segments.iter().flat_map(|s| &s.retries).sum()
    }

    pub fn min_separation(&self) -> Option<T> {
        self.segments
            .iter()
            .filter_map(|s| min_separation(&s.trajectories))
            .reduce(T::min)
    }

    pub fn log_dt(&self) -> Option<T> {
        self.segments.first().and_then(|s| s.trajectories.first()).map(|t| t.dt)
    }

    /// Mission-long trajectory of rover `k` on one clock: each segment is
    /// padded with the parked final pose until the slowest rover finishes.
    pub fn global_trajectory(&self, k: usize) -> Option<Trajectory<T>> {
        let dt = self.log_dt()?;
        let mut samples: Vec<TrajectorySample<T>> = Vec::new();
        let mut end_state = self.initial[k];
        for seg in &self.segments {
            let traj = &seg.trajectories[k];
            let skip = usize::from(!samples.is_empty());
            for i in skip..seg.samples() {
                let mut s = *traj.sample_at(i);
                if i >= traj.len() {
                    s.speed_mps = T::zero();
                }
                samples.push(s);
            }
            end_state = traj.end_state;
        }
        for (i, s) in samples.iter_mut().enumerate() {
            s.t = from_usize::<T>(i) * dt;
        }
        Some(Trajectory { rover_id: k + 1, priority: k + 1, dt, samples, end_state })
    }
}

/// Coordination failure with everything committed before it.
#[derive(Debug, Error)]
#[error("{source}")]
pub struct MissionFailure<T: Real> {
    #[source]
    pub source: CoordinationError,
    pub partial: TeamPlan<T>,
}

/// Runs the prioritised loop over all segments. Segment `n` starts every
/// rover from its end pose of segment `n - 1`; rovers wait at rest for the
/// whole team before setting off again.
#[allow(clippy::too_many_arguments)]
pub fn coordinate_mission<T: Real>(
    targets: &[Vec2<T>],
    initial: &[RoverState<T>],
    team_start: Vec2<T>,
    sites: &GoalSites<'_, T>,
    planner: &dyn SegmentPlanner<T>,
    simulator: &dyn RoverSimulator<T>,
    config: &CoordinationConfig<T>,
) -> Result<TeamPlan<T>, Box<MissionFailure<T>>> {
    let mut plan = TeamPlan { rovers: initial.len(), initial: initial.to_vec(), segments: Vec::new() };
    let fail = |source, plan: TeamPlan<T>| Box::new(MissionFailure { source, partial: plan });
    if targets.is_empty() {
        return Err(fail(CoordinationError::NoTargets, plan));
    }
    if initial.is_empty() {
        return Err(fail(CoordinationError::BadConfig("at least one rover is required".into()), plan));
    }
    let mut starts = initial.to_vec();
    let mut from = team_start;
    for (n, &to) in targets.iter().enumerate() {
        let raw = assign_rover_goals(
            from,
            to,
            initial.len(),
            config.lateral_spacing_m,
            sites.trav.bounds(),
            config.goal_margin_m,
        );
        let search = config.lateral_spacing_m.max(lit(1.0)) * lit(2.0);
        let snapped = snap_goals(&raw, sites, config.d_safe_m.max(config.keep_out_m), search);
        let goals: Option<Vec<_>> = snapped.into_iter().collect();
        let Some(goals) = goals else {
            let e = CoordinationError::BadConfig(format!("segment {n}: no clear goal near the team target"));
            return Err(fail(e, plan));
        };
        match coordinate_segment(n, &starts, &goals, planner, simulator, Some(sites), config) {
            Ok(seg) => {
                starts = seg.trajectories.iter().map(|t| t.end_state.at_rest_pose()).collect();
                plan.segments.push(seg);
            }
            Err(e) => return Err(fail(e, plan)),
        }
        from = to;
    }
    Ok(plan)
}
