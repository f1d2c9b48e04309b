//! Graph renormalisation: clip to a time interval and rescale onto the
//! unit time span, with the ordinate scaled by the process's
//! self-similarity index.

use crate::error::{Error, Result};

use super::{Graph2D, Point2};

/// Map the portion of the graph over `[a, b]` through
/// `(x, y) -> ((x - a) / L, (y - y(a)) / L^{1/beta})` with `L = b - a`:
/// the affine renormalisation under which a β-stable path over `[a, b]`
/// looks like a fresh path over `[0, 1]`.
pub fn apply_scaling_map(graph: &Graph2D, interval: (f64, f64), beta: f64) -> Result<Graph2D> {
    let (a, b) = interval;
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("scaling index beta must be positive"));
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid("interval must satisfy a < b"));
    }
    let bbox = graph.bbox();
    if a < bbox.min.x || b > bbox.max.x {
        return Err(Error::invalid(format!(
            "interval [{a}, {b}] leaves the graph's time range [{}, {}]",
            bbox.min.x, bbox.max.x
        )));
    }
    let ya = graph
        .value_at(a)
        .expect("interval start inside the time range");
    let len = b - a;
    let y_scale = len.powf(1.0 / beta);

    // Clipped vertex chain: interpolated entry point, interior
    // vertices, interpolated exit point.
    let mut pts: Vec<Point2> = Vec::new();
    pts.push(Point2::new(a, ya));
    for &p in graph.vertices() {
        if p.x > a && p.x < b {
            pts.push(p);
        }
    }
    let yb = graph
        .value_at(b)
        .expect("interval end inside the time range");
    pts.push(Point2::new(b, yb));
    pts.dedup();

    let mapped: Vec<Point2> = pts
        .into_iter()
        .map(|p| Point2::new((p.x - a) / len, (p.y - ya) / y_scale))
        .collect();
    Graph2D::from_points(mapped)
}
