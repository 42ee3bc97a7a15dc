//! Exploration planning and simulation for small planetary rover teams.
//!
//! The pipeline runs in stages, each in its own module:
//!
//! * [`terrain`]: elevation grids, worst-case slopes, traversability classes
//! * [`pdm`]: Gaussian-mixture probability map and its search-grid form
//! * [`search`]: hill-climbing target generation with global warming
//! * [`rrt`]: terrain-aware RRT* between consecutive targets
//! * [`sim`]: closed-loop rover simulation (planar rigid body, LOS + PID)
//! * [`coordination`]: prioritised planning of the whole team
//! * [`mission`]: end-to-end scenarios, metrics, exports and plots
//!
//! All numeric code is generic over [`Real`]; the aliases below fix the
//! scalar to `f64` (the precision used by the file formats and CLI) or `f32`.

pub mod coordination;
pub mod geom;
pub mod mission;
pub mod pdm;
pub mod rrt;
pub mod scalar;
pub mod search;
pub mod seeds;
pub mod sim;
pub mod terrain;

pub use scalar::Real;

pub type Point = geom::Vec2<f64>;
pub type Bounds = geom::Rect<f64>;
pub type Dem = terrain::DemGrid<f64>;
pub type Dem32 = terrain::DemGrid<f32>;
pub type TravMap = terrain::TraversabilityMap<f64>;
pub type ProbabilityMap = pdm::Pdm<f64>;
pub type ProbabilityMap32 = pdm::Pdm<f32>;
pub type Grid = pdm::SearchGrid<f64>;
pub type Grid32 = pdm::SearchGrid<f32>;
pub type Targets = search::TargetList<f64>;

pub type RrtPath = rrt::Path<f64>;
pub type RrtPath32 = rrt::Path<f32>;
pub type RoverTrajectory = sim::Trajectory<f64>;
pub type RoverTrajectory32 = sim::Trajectory<f32>;
pub type Plan = coordination::TeamPlan<f64>;
