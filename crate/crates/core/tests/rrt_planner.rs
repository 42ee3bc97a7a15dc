use proptest::prelude::*;
use rover_team::geom::Vec2;
use rover_team::rrt::{
    node_cost, path_attitude_profile, plan_segment, plan_segment_with_tree, CostComponents,
    PlanError, PlanRegion, RrtConfig,
};
use rover_team::scalar::angle_diff_abs_deg;
use rover_team::terrain::{
    classify, slope_map, surface_query, synth_terrain, DemGrid, Roughness, TerrainClass,
    TraversabilityMap, TraversabilityThresholds,
};

fn trav(dem: &DemGrid<f64>) -> TraversabilityMap<f64> {
    classify(&slope_map(dem), TraversabilityThresholds::default()).unwrap()
}

fn flat_around_origin() -> DemGrid<f64> {
    DemGrid::from_fn(Vec2::new(-5.0, -5.0), 0.25, 60, 40, |_, _| 0.0).unwrap()
}

fn rough(seed: u64) -> DemGrid<f64> {
    synth_terrain(seed, 120, 120, 0.25, &Roughness::default()).unwrap()
}

#[test]
fn flat_straight_segment_is_nearly_optimal() {
    let dem = flat_around_origin();
    let map = trav(&dem);
    let (start, goal) = (Vec2::new(0.0, 0.0), Vec2::new(5.0, 0.0));
    for seed in 0..5 {
        let path = plan_segment(start, goal, &dem, &map, &RrtConfig::default(), seed).unwrap();
        // 0.1 per metre of straight travel is the floor
        assert!(path.cost >= 0.5 - 1e-9, "seed {seed}: {}", path.cost);
        assert!(path.cost <= 0.6, "seed {seed}: {}", path.cost);
        assert!((path.length() - 5.0).abs() <= 0.5, "seed {seed}: {}", path.length());
        assert_eq!(path.waypoints.first().unwrap().xy(), start);
        assert_eq!(path.waypoints.last().unwrap().xy(), goal);
    }
}

#[test]
fn walled_goal_has_no_path() {
    // a 6 m high square ring of 1.5 m width around the goal
    let dem = DemGrid::<f64>::from_fn(Vec2::zero(), 0.25, 60, 60, |x, y| {
        let r = (x - 10.0).abs().max((y - 7.5).abs());
        if (2.0..3.5).contains(&r) { 6.0 } else { 0.0 }
    })
    .unwrap();
    let map = trav(&dem);
    let cfg = RrtConfig { max_nodes: 400, ..RrtConfig::default() };
    let err = plan_segment(Vec2::new(3.0, 7.5), Vec2::new(10.0, 7.5), &dem, &map, &cfg, 3).unwrap_err();
    assert!(matches!(err, PlanError::NoPathFound { .. }), "{err}");
}

#[test]
fn same_seed_same_path() {
    let dem = rough(5);
    let map = trav(&dem);
    let cfg = RrtConfig { max_nodes: 600, ..RrtConfig::default() };
    let (a, b) = (Vec2::new(8.0, 8.0), Vec2::new(14.0, 12.0));
    let p1 = plan_segment(a, b, &dem, &map, &cfg, 11);
    let p2 = plan_segment(a, b, &dem, &map, &cfg, 11);
    match (p1, p2) {
        (Ok(x), Ok(y)) => assert_eq!(x, y),
        (Err(x), Err(y)) => assert_eq!(x.to_string(), y.to_string()),
        _ => panic!("outcomes differ"),
    }
}

#[test]
fn tree_is_consistent() {
    let dem = rough(9);
    let map = trav(&dem);
    let cfg = RrtConfig { max_nodes: 800, ..RrtConfig::default() };
    let (start, goal) = (Vec2::new(10.0, 10.0), Vec2::new(16.0, 14.0));
    let (_, tree) = plan_segment_with_tree(start, goal, &dem, &map, &cfg, 2);
    let region = PlanRegion::new(start, goal, cfg.clearance_m, dem.bounds());
    let nodes = tree.nodes();
    assert_eq!(nodes.iter().filter(|n| n.parent.is_none()).count(), 1);
    assert!(nodes[0].parent.is_none() && nodes[0].position == start);
    for n in &nodes[1..] {
        let p = &nodes[n.parent.unwrap()];
        let c = n.components;
        assert!(region.contains(n.position));
        assert!(c.step_m <= 1.0 + 1e-9);
        assert!((c.step_m - p.position.distance(n.position)).abs() < 1e-9);
        assert!(c.roll_deg < 15.0 && c.pitch_deg < 15.0);
        assert_ne!(map.class_at(n.position), Some(TerrainClass::Impassable));
        let h = n.heading_deg.unwrap();
        let q = surface_query(&dem, n.position.x, n.position.y, h).unwrap();
        assert!((q.roll_deg.abs() - c.roll_deg).abs() < 1e-9);
        assert!((q.pitch_deg.abs() - c.pitch_deg).abs() < 1e-9);
        let turn = p.heading_deg.map_or(0.0, |ph| angle_diff_abs_deg(h, ph));
        assert!((c.turn_deg - turn).abs() < 1e-9 && c.turn_deg <= 180.0);
        let expect = p.cost + node_cost(&c, &cfg.weights).unwrap();
        assert!((n.cost - expect).abs() < 1e-9, "{} vs {}", n.cost, expect);
    }
}

#[test]
fn attitude_profile_on_ramp() {
    let slope = 10f64.to_radians().tan();
    let dem = DemGrid::from_fn(Vec2::zero(), 0.25, 60, 60, |x, _| slope * x).unwrap();
    let map = trav(&dem);
    let cfg = RrtConfig { max_nodes: 500, ..RrtConfig::default() };
    let up = plan_segment(Vec2::new(3.0, 7.5), Vec2::new(6.0, 7.5), &dem, &map, &cfg, 1).unwrap();
    let prof = path_attitude_profile(&up, &dem).unwrap();
    let mean_pitch = prof.iter().map(|p| p.0).sum::<f64>() / prof.len() as f64;
    assert!((mean_pitch - 10.0).abs() < 1.5, "{mean_pitch}");

    let flat = DemGrid::from_fn(Vec2::zero(), 0.25, 60, 60, |_, _| 1.0).unwrap();
    let across = plan_segment(Vec2::new(7.5, 3.0), Vec2::new(7.5, 6.0), &flat, &trav(&flat), &cfg, 1)
        .unwrap();
    let prof = path_attitude_profile(&across, &dem).unwrap();
    for (pitch, roll) in &prof[1..] {
        assert!(roll.abs() > 5.0 && pitch.abs() < 8.0, "{pitch} {roll}");
    }
    let straight = rover_team::rrt::Path::direct(&dem, Vec2::new(7.5, 3.0), Vec2::new(7.5, 6.0)).unwrap();
    for (pitch, roll) in path_attitude_profile(&straight, &dem).unwrap() {
        assert!(pitch.abs() < 1e-9 && (roll - 10.0).abs() < 1e-9, "{pitch} {roll}");
    }
}

#[test]
fn cost_examples() {
    let w = RrtConfig::<f64>::default().weights;
    let c = |r, phi, th, psi| CostComponents { step_m: r, roll_deg: phi, pitch_deg: th, turn_deg: psi };
    assert!((node_cost(&c(1.0, 15.0, 15.0, 60.0), &w).unwrap() - 1.0).abs() < 1e-12);
    assert!((node_cost(&c(1.0, 0.0, 0.0, 0.0), &w).unwrap() - 0.1).abs() < 1e-12);
    assert!((node_cost(&c(0.5, 7.5, 0.0, 30.0), &w).unwrap() - 0.3).abs() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn paths_respect_spacing_and_terrain(seed in 0u64..1000, dx in -6.0f64..6.0, dy in -6.0f64..6.0) {
        let dem = rough(seed % 7);
        let map = trav(&dem);
        let start = Vec2::new(15.0, 15.0);
        let goal = Vec2::new(15.0 + dx, 15.0 + dy);
        let ok = |p: Vec2<f64>| map.class_at(p) != Some(TerrainClass::Impassable);
        prop_assume!(ok(start) && ok(goal));
        let cfg = RrtConfig { max_nodes: 400, ..RrtConfig::default() };
        if let Ok(path) = plan_segment(start, goal, &dem, &map, &cfg, seed) {
            for w in path.waypoints.windows(2) {
                prop_assert!(w[0].xy().distance(w[1].xy()) <= 1.0 + 1e-9);
                prop_assert!(w[1].cum_cost >= w[0].cum_cost - 1e-12);
            }
            for w in &path.waypoints {
                prop_assert!(ok(w.xy()));
                let z = surface_query(&dem, w.x, w.y, 0.0).unwrap().z;
                prop_assert_eq!(z, w.z);
            }
            prop_assert_eq!(path.waypoints.last().unwrap().xy(), goal);
        }
    }
}
