//! RRT* over terrain with a four-term smoothness/flatness cost.
//!
//! Every tree edge is scored with
//!
//! ```text
//! cost = W_R*R/N_R + W_phi*|roll|/N_phi + W_theta*|pitch|/N_theta + W_psi*|dpsi|/N_psi
//! ```
//!
//! where `R` is the edge length, roll and pitch are the rover attitude at the
//! child node when facing along the edge, and `dpsi` is the heading change
//! from the parent edge. Nodes on impassable blocks, or whose attitude
//! reaches the impassable slope limit, are never added.

mod tree;

pub use tree::{RrtNode, RrtTree};

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::{Rect, Vec2};
use crate::scalar::{angle_diff_abs_deg, from_usize, lit, to_f64, Real};
use crate::terrain::{
    surface_query, DemGrid, TerrainClass, TerrainError, TraversabilityMap,
};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("cost normaliser {0} must be positive")]
    ZeroNormalizer(&'static str),
    #[error("cost weights must be non-negative and sum to 1 (sum = {0})")]
    BadWeights(f64),
    #[error("invalid planner configuration: {0}")]
    BadConfig(String),
    #[error("start ({x}, {y}) is outside the map or on impassable terrain")]
    InvalidStart { x: f64, y: f64 },
    #[error("goal ({x}, {y}) is outside the map or on impassable terrain")]
    InvalidGoal { x: f64, y: f64 },
    #[error("no path found after growing {nodes} nodes")]
    NoPathFound { nodes: usize },
    #[error(transparent)]
    Terrain(#[from] TerrainError),
}

/// Weights and normalisers of the edge cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostWeights<T> {
    pub w_length: T,
    pub w_roll: T,
    pub w_pitch: T,
    pub w_turn: T,
    pub n_length_m: T,
    pub n_roll_deg: T,
    pub n_pitch_deg: T,
    pub n_turn_deg: T,
}

impl<T: Real> Default for CostWeights<T> {
    fn default() -> Self {
        Self {
            w_length: lit(0.1),
            w_roll: lit(0.4),
            w_pitch: lit(0.4),
            w_turn: lit(0.1),
            n_length_m: lit(1.0),
            n_roll_deg: lit(15.0),
            n_pitch_deg: lit(15.0),
            n_turn_deg: lit(60.0),
        }
    }
}

impl<T: Real> CostWeights<T> {
    pub fn validate(&self) -> Result<(), PlanError> {
        for (name, n) in [
            ("N_R", self.n_length_m),
            ("N_phi", self.n_roll_deg),
            ("N_theta", self.n_pitch_deg),
            ("N_psi", self.n_turn_deg),
        ] {
            if !(n > T::zero()) {
                return Err(PlanError::ZeroNormalizer(name));
            }
        }
        let ws = [self.w_length, self.w_roll, self.w_pitch, self.w_turn];
        let sum = ws.iter().fold(T::zero(), |a, &w| a + w);
        if ws.iter().any(|w| *w < T::zero()) || (to_f64(sum) - 1.0).abs() > 1e-6 {
            return Err(PlanError::BadWeights(to_f64(sum)));
        }
        Ok(())
    }
}

/// Per-edge inputs of the cost: step length (m) and magnitudes in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CostComponents<T> {
    pub step_m: T,
    pub roll_deg: T,
    pub pitch_deg: T,
    pub turn_deg: T,
}

pub fn node_cost<T: Real>(c: &CostComponents<T>, w: &CostWeights<T>) -> Result<T, PlanError> {
    for (name, n) in [
        ("N_R", w.n_length_m),
        ("N_phi", w.n_roll_deg),
        ("N_theta", w.n_pitch_deg),
        ("N_psi", w.n_turn_deg),
    ] {
        if !(n > T::zero()) {
            return Err(PlanError::ZeroNormalizer(name));
        }
    }
    Ok(edge_cost(c, w))
}

fn edge_cost<T: Real>(c: &CostComponents<T>, w: &CostWeights<T>) -> T {
    w.w_length * c.step_m / w.n_length_m
        + w.w_roll * c.roll_deg.abs() / w.n_roll_deg
        + w.w_pitch * c.pitch_deg.abs() / w.n_pitch_deg
        + w.w_turn * c.turn_deg.abs() / w.n_turn_deg
}

/// Sampling rectangle: bounding box of start and goal grown by the
/// clearance on every side, clipped to the map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRegion<T> {
    pub rect: Rect<T>,
}

impl<T: Real> PlanRegion<T> {
    pub fn new(start: Vec2<T>, goal: Vec2<T>, clearance: T, map: Rect<T>) -> Self {
        Self {
            rect: Rect::around(start, goal, clearance).intersect(&map),
        }
    }

    pub fn contains(&self, p: Vec2<T>) -> bool {
        self.rect.contains(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RrtConfig<T> {
    pub weights: CostWeights<T>,
    /// Tree size at which growth stops.
    pub max_nodes: usize,
    pub goal_tolerance_m: T,
    /// Probability of sampling the goal itself.
    pub goal_bias: T,
    /// Rewire radius constant: `r = min(gamma * sqrt(ln n / n), N_R)`.
    pub gamma_m: T,
    pub clearance_m: T,
    /// Nodes whose |pitch| or |roll| reach this are rejected.
    pub attitude_limit_deg: T,
    /// Along every edge the ground inclination must stay this far below the
    /// attitude limit, whatever the heading.
    pub slope_margin_deg: T,
    /// Half width of the strip beside each edge that must meet the slope cap.
    pub corridor_half_width_m: T,
    /// Sample budget per node, bounds the loop when most samples are rejected.
    pub attempts_per_node: usize,
}

impl<T: Real> Default for RrtConfig<T> {
    fn default() -> Self {
        Self {
            weights: CostWeights::default(),
            max_nodes: 1250,
            goal_tolerance_m: lit(0.5),
            goal_bias: lit(0.05),
            gamma_m: lit(8.0),
            clearance_m: lit(2.0),
            attitude_limit_deg: lit(15.0),
            slope_margin_deg: lit(0.5),
            corridor_half_width_m: lit(0.25),
            attempts_per_node: 30,
        }
    }
}

impl<T: Real> RrtConfig<T> {
    pub fn validate(&self) -> Result<(), PlanError> {
        self.weights.validate()?;
        let bad = |m: &str| Err(PlanError::BadConfig(m.to_string()));
        if self.max_nodes < 2 {
            return bad("max_nodes must be at least 2");
        }
        if !(self.goal_tolerance_m > T::zero()) {
            return bad("goal tolerance must be positive");
        }
        if !(self.goal_bias >= T::zero() && self.goal_bias <= T::one()) {
            return bad("goal bias must lie in [0, 1]");
        }
        if !(self.gamma_m > T::zero() && self.clearance_m >= T::zero()) {
            return bad("gamma must be positive and clearance non-negative");
        }
        if !(self.attitude_limit_deg > T::zero()) || self.attempts_per_node == 0 {
            return bad("attitude limit and attempt budget must be positive");
        }
        if !(self.slope_margin_deg >= T::zero() && self.slope_margin_deg < self.attitude_limit_deg) {
            return bad("slope margin must lie in [0, attitude limit)");
        }
        if !(self.corridor_half_width_m >= T::zero()) {
            return bad("corridor half width must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub cum_cost: T,
}

impl<T: Real> Waypoint<T> {
    pub fn xy(&self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }
}

/// Planned waypoints from start to goal.
#[derive(Debug, Clone, PartialEq)]
pub struct Path<T> {
    pub waypoints: Vec<Waypoint<T>>,
    pub cost: T,
    pub node_count: usize,
}

impl<T: Real> Path<T> {
    /// Straight two-point path, used where a planner is not needed.
    pub fn direct(dem: &DemGrid<T>, start: Vec2<T>, goal: Vec2<T>) -> Result<Self, PlanError> {
        let z = |p: Vec2<T>| surface_query(dem, p.x, p.y, T::zero()).map(|q| q.z);
        Ok(Self {
            waypoints: vec![
                Waypoint { x: start.x, y: start.y, z: z(start)?, cum_cost: T::zero() },
                Waypoint { x: goal.x, y: goal.y, z: z(goal)?, cum_cost: T::zero() },
            ],
            cost: T::zero(),
            node_count: 0,
        })
    }

    pub fn points(&self) -> Vec<Vec2<T>> {
        self.waypoints.iter().map(Waypoint::xy).collect()
    }

    pub fn length(&self) -> T {
        self.waypoints
            .windows(2)
            .fold(T::zero(), |acc, w| acc + w[0].xy().distance(w[1].xy()))
    }

    /// `index,x_m,y_m,z_m,cum_cost` rows after a header line.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "index,x_m,y_m,z_m,cum_cost")?;
        for (i, w) in self.waypoints.iter().enumerate() {
            writeln!(
                out,
                "{},{},{},{},{}",
                i,
                to_f64(w.x),
                to_f64(w.y),
                to_f64(w.z),
                to_f64(w.cum_cost)
            )?;
        }
        Ok(())
    }
}

/// How a goal-region node finishes at the exact goal point.
#[derive(Debug, Clone, Copy)]
enum GoalHop<T> {
    AtGoal,
    Hop { heading: T, comps: CostComponents<T> },
}

/// Circular no-go area, such as a spot occupied by another rover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeepOut<T> {
    pub center: Vec2<T>,
    pub radius_m: T,
}

impl<T: Real> KeepOut<T> {
    pub fn new(center: Vec2<T>, radius_m: T) -> Self {
        Self { center, radius_m }
    }

    pub fn contains(&self, p: Vec2<T>) -> bool {
        p.distance(self.center) < self.radius_m
    }

    pub fn blocks(&self, a: Vec2<T>, b: Vec2<T>) -> bool {
        self.center.distance_to_segment(a, b) < self.radius_m
    }
}

struct Planner<'a, T> {
    dem: &'a DemGrid<T>,
    trav: &'a TraversabilityMap<T>,
    config: &'a RrtConfig<T>,
    goal: Vec2<T>,
    keep_out: Vec<KeepOut<T>>,
}

impl<'a, T: Real> Planner<'a, T> {
    fn passable(&self, p: Vec2<T>) -> bool {
        matches!(
            self.trav.class_at(p),
            Some(TerrainClass::Traversable | TerrainClass::HighRisk)
        )
    }

    /// Every block touched by the straight segment is passable.
    fn segment_clear(&self, a: Vec2<T>, b: Vec2<T>) -> bool {
        let step = self.trav.cell_size() * lit(0.5);
        let n = to_f64((a.distance(b) / step).ceil()).max(1.0) as usize;
        (0..=n).all(|i| self.passable(a.lerp(b, from_usize::<T>(i) / from_usize::<T>(n))))
            && !self.keep_out.iter().any(|k| k.blocks(a, b))
    }

    /// Heading and cost inputs of an edge `from -> to`, if admissible.
    fn edge(
        &self,
        from: Vec2<T>,
        from_heading: Option<T>,
        to: Vec2<T>,
    ) -> Option<(T, CostComponents<T>)> {
        let step = from.distance(to);
        let max_step = self.config.weights.n_length_m * lit(1.0 + 1e-9);
        if !(step > T::zero()) || step > max_step {
            return None;
        }
        let heading = (to - from).heading_deg();
        if !self.segment_clear(from, to) {
            return None;
        }
        let pose = surface_query(self.dem, to.x, to.y, heading).ok()?;
        let limit = self.config.attitude_limit_deg;
        if pose.pitch_deg.abs() >= limit || pose.roll_deg.abs() >= limit {
            return None;
        }
        let slope_cap = limit - self.config.slope_margin_deg;
        let side = (to - from).perp_left() * (self.config.corridor_half_width_m / step);
        let n = to_f64((step / (self.trav.cell_size() * lit(0.25))).ceil()) as usize;
        for i in 1..=n {
            let c = from.lerp(to, from_usize::<T>(i) / from_usize::<T>(n));
            for p in [c, c + side, c - side] {
                if surface_query(self.dem, p.x, p.y, heading).ok()?.inclination_deg >= slope_cap {
                    return None;
                }
            }
        }
        let turn = from_heading
            .map(|h| angle_diff_abs_deg(heading, h))
            .unwrap_or_else(T::zero);
        Some((
            heading,
            CostComponents {
                step_m: step,
                roll_deg: pose.roll_deg.abs(),
                pitch_deg: pose.pitch_deg.abs(),
                turn_deg: turn,
            },
        ))
    }

    fn goal_hop(&self, node: &RrtNode<T>) -> Option<GoalHop<T>> {
        let d = node.position.distance(self.goal);
        if d > self.config.goal_tolerance_m {
            return None;
        }
        if d <= lit(1e-9) {
            return Some(GoalHop::AtGoal);
        }
        self.edge(node.position, node.heading_deg, self.goal)
            .map(|(heading, comps)| GoalHop::Hop { heading, comps })
    }

    fn solution_cost(&self, node: &RrtNode<T>, hop: &GoalHop<T>) -> T {
        match hop {
            GoalHop::AtGoal => node.cost,
            GoalHop::Hop { heading, comps } => {
                let turn = node
                    .heading_deg
                    .map(|h| angle_diff_abs_deg(*heading, h))
                    .unwrap_or_else(T::zero);
                let c = CostComponents { turn_deg: turn, ..*comps };
                node.cost + edge_cost(&c, &self.config.weights)
            }
        }
    }

    fn snapshot(&self, tree: &RrtTree<T>, idx: usize, hop: &GoalHop<T>) -> Result<Path<T>, PlanError> {
        let mut waypoints = Vec::new();
        for i in tree.chain(idx) {
            let n = &tree.nodes()[i];
            let z = surface_query(self.dem, n.position.x, n.position.y, T::zero())?.z;
            waypoints.push(Waypoint { x: n.position.x, y: n.position.y, z, cum_cost: n.cost });
        }
        let cost = self.solution_cost(&tree.nodes()[idx], hop);
        if let GoalHop::Hop { .. } = hop {
            let z = surface_query(self.dem, self.goal.x, self.goal.y, T::zero())?.z;
            waypoints.push(Waypoint { x: self.goal.x, y: self.goal.y, z, cum_cost: cost });
        }
        Ok(Path {
            waypoints: densify(self.dem, waypoints, self.config.weights.n_length_m)?,
            cost,
            node_count: tree.len(),
        })
    }

    fn rewire_radius(&self, n: usize) -> T {
        let cap = self.config.weights.n_length_m;
        if n < 2 {
            return cap;
        }
        let nf = from_usize::<T>(n);
        (self.config.gamma_m * (nf.ln() / nf).sqrt()).min(cap)
    }
}

/// Inserts intermediate points wherever consecutive waypoints are further
/// apart than `max_spacing`.
fn densify<T: Real>(
    dem: &DemGrid<T>,
    waypoints: Vec<Waypoint<T>>,
    max_spacing: T,
) -> Result<Vec<Waypoint<T>>, PlanError> {
    let mut out: Vec<Waypoint<T>> = Vec::with_capacity(waypoints.len());
    for w in waypoints {
        if let Some(prev) = out.last().copied() {
            let d = prev.xy().distance(w.xy());
            let pieces = to_f64((d / max_spacing).ceil()) as usize;
            for k in 1..pieces {
                let t = from_usize::<T>(k) / from_usize::<T>(pieces);
                let p = prev.xy().lerp(w.xy(), t);
                let z = surface_query(dem, p.x, p.y, T::zero())?.z;
                let c = prev.cum_cost + (w.cum_cost - prev.cum_cost) * t;
                out.push(Waypoint { x: p.x, y: p.y, z, cum_cost: c });
            }
        }
        out.push(w);
    }
    Ok(out)
}

/// Plans a path and also returns the final search tree.
pub fn plan_segment_with_tree<T: Real>(
    start: Vec2<T>,
    goal: Vec2<T>,
    dem: &DemGrid<T>,
    trav: &TraversabilityMap<T>,
    config: &RrtConfig<T>,
    seed: u64,
) -> (Result<Path<T>, PlanError>, RrtTree<T>) {
    plan_among_with_tree(start, goal, dem, trav, config, &[], seed)
}

/// Like [`plan_segment_with_tree`], with edges kept out of `keep_out`.
/// An area that would cover the start or the goal is shrunk to clear it.
pub fn plan_among_with_tree<T: Real>(
    start: Vec2<T>,
    goal: Vec2<T>,
    dem: &DemGrid<T>,
    trav: &TraversabilityMap<T>,
    config: &RrtConfig<T>,
    keep_out: &[KeepOut<T>],
    seed: u64,
) -> (Result<Path<T>, PlanError>, RrtTree<T>) {
    let empty = RrtTree::new(start);
    if let Err(e) = config.validate() {
        return (Err(e), empty);
    }
    let region = PlanRegion::new(start, goal, config.clearance_m, dem.bounds());
    let keep_out = keep_out
        .iter()
        .map(|k| {
            let room = k.center.distance(start).min(k.center.distance(goal));
            KeepOut::new(k.center, k.radius_m.min(room * lit(0.999)))
        })
        .collect();
    let planner = Planner { dem, trav, config, goal, keep_out };
    if !region.contains(start) || !planner.passable(start) {
        return (Err(PlanError::InvalidStart { x: to_f64(start.x), y: to_f64(start.y) }), empty);
    }
    if !region.contains(goal) || !planner.passable(goal) {
        return (Err(PlanError::InvalidGoal { x: to_f64(goal.x), y: to_f64(goal.y) }), empty);
    }

    let mut tree = RrtTree::new(start);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut goal_nodes: Vec<(usize, GoalHop<T>)> = Vec::new();
    if let Some(hop) = planner.goal_hop(&tree.nodes()[0]) {
        goal_nodes.push((0, hop));
    }
    let mut best: Option<Path<T>> = None;
    let rect = region.rect;
    let max_attempts = config.max_nodes.saturating_mul(config.attempts_per_node);
    let mut attempts = 0usize;

    let update_best = |tree: &RrtTree<T>, goal_nodes: &[(usize, GoalHop<T>)], best: &mut Option<Path<T>>| {
        let mut cand: Option<(T, usize, GoalHop<T>)> = None;
        for &(i, hop) in goal_nodes {
            let c = planner.solution_cost(&tree.nodes()[i], &hop);
            if cand.as_ref().is_none_or(|(bc, _, _)| c < *bc) {
                cand = Some((c, i, hop));
            }
        }
        if let Some((c, i, hop)) = cand {
            if best.as_ref().is_none_or(|b| c < b.cost) {
                *best = planner.snapshot(tree, i, &hop).ok();
            }
        }
    };
    update_best(&tree, &goal_nodes, &mut best);

    while tree.len() < config.max_nodes && attempts < max_attempts {
        attempts += 1;
        let sample = if lit::<T>(rng.random::<f64>()) < config.goal_bias {
            goal
        } else {
            let (u, v) = (lit::<T>(rng.random::<f64>()), lit::<T>(rng.random::<f64>()));
            Vec2::new(rect.min.x + u * rect.width(), rect.min.y + v * rect.height())
        };
        let nearest = tree.nearest(sample);
        let from = tree.nodes()[nearest].position;
        let d = from.distance(sample);
        if !(d > lit(1e-9)) {
            continue;
        }
        let step = config.weights.n_length_m;
        let new_pos = if d > step { from + (sample - from) * (step / d) } else { sample };
        if !region.contains(new_pos)
            || !planner.passable(new_pos)
            || planner.keep_out.iter().any(|k| k.contains(new_pos))
        {
            continue;
        }

        let radius = planner.rewire_radius(tree.len());
        let mut near = tree.within(new_pos, radius);
        if !near.contains(&nearest) {
            near.push(nearest);
            near.sort_unstable();
        }

        let mut chosen: Option<(usize, T, T, CostComponents<T>)> = None;
        for &i in &near {
            let n = &tree.nodes()[i];
            if let Some((heading, comps)) = planner.edge(n.position, n.heading_deg, new_pos) {
                let total = n.cost + edge_cost(&comps, &config.weights);
                if chosen.as_ref().is_none_or(|c| total < c.1) {
                    chosen = Some((i, total, heading, comps));
                }
            }
        }
        let Some((parent, cost, heading, comps)) = chosen else {
            continue;
        };
        let new_idx = tree.push(RrtNode {
            position: new_pos,
            parent: Some(parent),
            heading_deg: Some(heading),
            cost,
            components: comps,
        });

        for &i in &near {
            if i == parent || tree.nodes()[i].parent.is_none() {
                continue;
            }
            let (pos, cur_cost) = (tree.nodes()[i].position, tree.nodes()[i].cost);
            let new_node = &tree.nodes()[new_idx];
            let Some((h, c)) = planner.edge(new_pos, new_node.heading_deg, pos) else {
                continue;
            };
            let total = new_node.cost + edge_cost(&c, &config.weights);
            if total < cur_cost && !tree.is_ancestor(i, new_idx) {
                tree.reparent(i, new_idx, h, c, total);
                tree.propagate(i, &config.weights, edge_cost);
            }
        }

        if let Some(hop) = planner.goal_hop(&tree.nodes()[new_idx]) {
            goal_nodes.push((new_idx, hop));
        }
        update_best(&tree, &goal_nodes, &mut best);
    }

    let result = best.ok_or(PlanError::NoPathFound { nodes: tree.len() });
    (result, tree)
}

/// Plans a path from `start` to `goal`; deterministic for a given seed.
pub fn plan_segment<T: Real>(
    start: Vec2<T>,
    goal: Vec2<T>,
    dem: &DemGrid<T>,
    trav: &TraversabilityMap<T>,
    config: &RrtConfig<T>,
    seed: u64,
) -> Result<Path<T>, PlanError> {
    plan_segment_with_tree(start, goal, dem, trav, config, seed).0
}

/// Plans a path that avoids `keep_out`; see [`plan_among_with_tree`].
pub fn plan_segment_among<T: Real>(
    start: Vec2<T>,
    goal: Vec2<T>,
    dem: &DemGrid<T>,
    trav: &TraversabilityMap<T>,
    config: &RrtConfig<T>,
    keep_out: &[KeepOut<T>],
    seed: u64,
) -> Result<Path<T>, PlanError> {
    plan_among_with_tree(start, goal, dem, trav, config, keep_out, seed).0
}

/// `(pitch_deg, roll_deg)` at every waypoint, facing along the segment
/// that arrives there (the first waypoint uses the first segment).
pub fn path_attitude_profile<T: Real>(
    path: &Path<T>,
    dem: &DemGrid<T>,
) -> Result<Vec<(T, T)>, PlanError> {
    let pts = path.points();
    let heading = |i: usize| -> T {
        match pts.len() {
            0 | 1 => T::zero(),
            _ if i == 0 => (pts[1] - pts[0]).heading_deg(),
            _ => (pts[i] - pts[i - 1]).heading_deg(),
        }
    };
    pts.iter()
        .enumerate()
        .map(|(i, p)| {
            let q = surface_query(dem, p.x, p.y, heading(i))?;
            Ok((q.pitch_deg, q.roll_deg))
        })
        .collect()
}
