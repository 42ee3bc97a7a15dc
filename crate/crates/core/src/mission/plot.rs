//! Self-contained SVG figures. Output depends only on the inputs, so
//! repeated runs produce identical files.

use std::fmt::Write;

use crate::geom::Rect;
use crate::pdm::SearchGrid;
use crate::search::TargetList;
use crate::sim::Trajectory;
use crate::terrain::{TerrainClass, TraversabilityMap};

use super::Curve;

const MAP_PX: f64 = 600.0;
const ROVER_COLORS: [&str; 6] = ["#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#17becf"];

/// Map-frame to pixel transform with y pointing up.
struct Frame {
    bounds: Rect<f64>,
    scale: f64,
}

impl Frame {
    fn new(bounds: Rect<f64>) -> Self {
        let scale = MAP_PX / bounds.width().max(bounds.height());
        Self { bounds, scale }
    }

    fn width(&self) -> f64 {
        self.bounds.width() * self.scale
    }

    fn height(&self) -> f64 {
        self.bounds.height() * self.scale
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.bounds.min.x) * self.scale
    }

    fn y(&self, y: f64) -> f64 {
        (self.bounds.max.y - y) * self.scale
    }

    fn open(&self, title: &str) -> String {
        let mut s = String::new();
        let (w, h) = (self.width(), self.height());
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
        )
        .unwrap();
        writeln!(s, "<title>{title}</title>").unwrap();
        writeln!(s, r##"<rect x="0" y="0" width="{w:.2}" height="{h:.2}" fill="#ffffff"/>"##).unwrap();
        s
    }
}

fn close(mut s: String) -> String {
    s.push_str("</svg>\n");
    s
}

fn ramp(level: usize, levels: usize) -> String {
    let t = level as f64 / (levels - 1) as f64;
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(255.0, 8.0), mix(255.0, 48.0), mix(255.0, 107.0))
}

/// Rows of equal-colour runs drawn as rectangles; `None` cells are skipped.
fn runs(
    s: &mut String,
    frame: &Frame,
    origin: (f64, f64),
    cell: f64,
    cols: usize,
    rows: usize,
    color: impl Fn(usize, usize) -> Option<String>,
) {
    for row in 0..rows {
        let mut col = 0;
        while col < cols {
            let Some(c) = color(col, row) else {
                col += 1;
                continue;
            };
            let start = col;
            while col < cols && color(col, row).as_deref() == Some(c.as_str()) {
                col += 1;
            }
            let x0 = frame.x(origin.0 + start as f64 * cell);
            let y0 = frame.y(origin.1 + (row + 1) as f64 * cell);
            let w = (col - start) as f64 * cell * frame.scale;
            let h = cell * frame.scale;
            writeln!(s, r#"<rect x="{x0:.2}" y="{y0:.2}" width="{w:.2}" height="{h:.2}" fill="{c}"/>"#).unwrap();
        }
    }
}

fn grid_bounds(grid: &SearchGrid<f64>) -> Rect<f64> {
    let cs = grid.cell_size();
    Rect::from_origin_size(grid.origin(), grid.cols() as f64 * cs, grid.rows() as f64 * cs)
}

fn heat_layer(s: &mut String, frame: &Frame, grid: &SearchGrid<f64>) {
    const LEVELS: usize = 16;
    let max = grid.max_value();
    let o = grid.origin();
    runs(s, frame, (o.x, o.y), grid.cell_size(), grid.cols(), grid.rows(), |c, r| {
        if max <= 0.0 {
            return None;
        }
        let v = grid.values()[r * grid.cols() + c] / max;
        let level = ((v * (LEVELS - 1) as f64).round() as usize).min(LEVELS - 1);
        (level > 0).then(|| ramp(level, LEVELS))
    });
}

/// Probability heat map, darker is more likely.
pub fn pdm_heatmap(grid: &SearchGrid<f64>) -> String {
    let frame = Frame::new(grid_bounds(grid));
    let mut s = frame.open("probability distribution map");
    heat_layer(&mut s, &frame, grid);
    close(s)
}

fn trav_layer(s: &mut String, frame: &Frame, trav: &TraversabilityMap<f64>) {
    let o = trav.origin();
    runs(s, frame, (o.x, o.y), trav.cell_size(), trav.width(), trav.height(), |c, r| {
        match trav.class(c, r) {
            TerrainClass::Traversable => None,
            TerrainClass::HighRisk => Some("#ff0000".to_string()),
            TerrainClass::Impassable => Some("#000000".to_string()),
        }
    });
}

/// Traversable white, high-risk red, impassable black.
pub fn traversability_map(trav: &TraversabilityMap<f64>) -> String {
    let frame = Frame::new(trav.bounds());
    let mut s = frame.open("traversability");
    trav_layer(&mut s, &frame, trav);
    close(s)
}

/// Heat map with the team targets in visiting order.
pub fn targets_overlay(grid: &SearchGrid<f64>, targets: &TargetList<f64>) -> String {
    let frame = Frame::new(grid_bounds(grid));
    let mut s = frame.open("search targets");
    heat_layer(&mut s, &frame, grid);
    let mut pts = vec![targets.start_point];
    pts.extend(targets.waypoints.iter().copied());
    let line: Vec<String> = pts.iter().map(|p| format!("{:.2},{:.2}", frame.x(p.x), frame.y(p.y))).collect();
    writeln!(s, r##"<polyline points="{}" fill="none" stroke="#d62728" stroke-width="1.5"/>"##, line.join(" ")).unwrap();
    for (i, p) in pts.iter().enumerate() {
        let fill = if i == 0 { "#2ca02c" } else { "#d62728" };
        writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{fill}"/>"#, frame.x(p.x), frame.y(p.y)).unwrap();
    }
    close(s)
}

/// Rover tracks over the traversability map, each with a translucent band
/// as wide as its search footprint.
pub fn trajectories_plot(
    trav: &TraversabilityMap<f64>,
    trajectories: &[Trajectory<f64>],
    search_radius: f64,
) -> String {
    let frame = Frame::new(trav.bounds());
    let mut s = frame.open("rover trajectories");
    trav_layer(&mut s, &frame, trav);
    for (i, t) in trajectories.iter().enumerate() {
        if t.is_empty() {
            continue;
        }
        let color = ROVER_COLORS[i % ROVER_COLORS.len()];
        let pts: Vec<String> =
            t.samples.iter().map(|p| format!("{:.2},{:.2}", frame.x(p.x), frame.y(p.y))).collect();
        let pts = pts.join(" ");
        let band = 2.0 * search_radius * frame.scale;
        writeln!(
            s,
            r#"<polyline points="{pts}" fill="none" stroke="{color}" stroke-opacity="0.25" stroke-width="{band:.2}" stroke-linejoin="round"/>"#
        )
        .unwrap();
        writeln!(s, r#"<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="0.8"/>"#).unwrap();
    }
    close(s)
}

fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|c| *c >= v).unwrap_or(10.0 * mag)
}

/// Accumulated probability (0 to 1) against mean distance per rover.
pub fn curve_plot(team: &Curve, baseline: Option<&Curve>) -> String {
    let (w, h, m) = (640.0, 420.0, 50.0);
    let max_d = team
        .points
        .iter()
        .chain(baseline.map(|b| b.points.as_slice()).unwrap_or(&[]))
        .map(|p| p.distance_m)
        .fold(0.0, f64::max);
    let xmax = nice_ceiling(max_d);
    let px = |d: f64| m + d / xmax * (w - 2.0 * m);
    let py = |p: f64| h - m - p * (h - 2.0 * m);
    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, "<title>accumulated probability</title>").unwrap();
    writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#ffffff"/>"##).unwrap();
    writeln!(
        s,
        r##"<path d="M{:.2},{:.2} L{:.2},{:.2} L{:.2},{:.2}" fill="none" stroke="#000000"/>"##,
        px(0.0), py(1.0), px(0.0), py(0.0), px(xmax), py(0.0)
    )
    .unwrap();
    for i in 0..=5 {
        let (d, p) = (xmax * i as f64 / 5.0, i as f64 / 5.0);
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="middle">{}</text>"#, px(d), py(0.0) + 16.0, d).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11" text-anchor="end">{:.1}</text>"#, px(0.0) - 6.0, py(p) + 4.0, p).unwrap();
    }
    writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle">distance travelled per rover (m)</text>"#, w / 2.0, h - 10.0).unwrap();
    writeln!(s, r#"<text x="14" y="{:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 14 {:.2})">accumulated probability</text>"#, h / 2.0, h / 2.0).unwrap();
    let mut series = vec![(team, "#1f77b4", "team")];
    if let Some(b) = baseline {
        series.push((b, "#d62728", "single rover"));
    }
    for (i, (curve, color, label)) in series.iter().enumerate() {
        let pts: Vec<String> =
            curve.points.iter().map(|p| format!("{:.2},{:.2}", px(p.distance_m), py(p.probability.min(1.0)))).collect();
        if !pts.is_empty() {
            writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5"/>"#, pts.join(" ")).unwrap();
        }
        let ly = m + 14.0 * i as f64;
        writeln!(s, r#"<line x1="{:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"/>"#, w - 170.0, w - 150.0).unwrap();
        writeln!(s, r#"<text x="{:.2}" y="{:.2}" font-size="11">{label}</text>"#, w - 145.0, ly + 4.0).unwrap();
    }
    close(s)
}
