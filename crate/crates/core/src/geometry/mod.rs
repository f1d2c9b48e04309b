//! Polyline geometry of sample-path graphs and exact closed-cell
//! occupancy counting.
//!
//! Everything here uses closed sets: cells, windows and balls include
//! their boundaries, and a segment that only touches a boundary point
//! still occupies the cell. Counts are exact for the polyline (no
//! sampling, no epsilons), which is what makes the fast counter and the
//! brute-force oracle comparable bit for bit.

mod count;
mod cover;
mod scaling;
mod window;

pub use count::{brute_force_count, count_window, segment_intersects_box2};
pub use cover::{ball_cell_budget, count_cover, count_cover_scales, grid_count, PlaneSet};
pub use scaling::apply_scaling_map;
pub use window::{CountResult, NdBox, OccupancyMask, Window};

use crate::error::{Error, Result};
use crate::process::SamplePath;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Point2 {
        Point2 { x, y }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment2 {
    pub start: Point2,
    pub end: Point2,
}

impl Segment2 {
    pub fn new(start: Point2, end: Point2) -> Segment2 {
        Segment2 { start, end }
    }

    pub fn x_range(&self) -> (f64, f64) {
        (self.start.x.min(self.end.x), self.start.x.max(self.end.x))
    }

    pub fn y_range(&self) -> (f64, f64) {
        (self.start.y.min(self.end.y), self.start.y.max(self.end.y))
    }
}

/// Closed axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rect2 {
    pub min: Point2,
    pub max: Point2,
}

impl Rect2 {
    pub fn new(min: Point2, max: Point2) -> Rect2 {
        debug_assert!(min.x <= max.x && min.y <= max.y);
        Rect2 { min, max }
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.min.x && p.x <= self.max.x && p.y >= self.min.y && p.y <= self.max.y
    }

    pub fn intersects(&self, other: &Rect2) -> bool {
        self.min.x <= other.max.x
            && other.min.x <= self.max.x
            && self.min.y <= other.max.y
            && other.min.y <= self.max.y
    }
}

/// The graph `{(t, X(t))}` of a scalar path as a polyline with
/// nondecreasing abscissae.
#[derive(Clone, Debug, PartialEq)]
pub struct Graph2D {
    vertices: Vec<Point2>,
    bbox: Rect2,
}

impl Graph2D {
    /// Interpolate one coordinate of a sample path into its graph.
    pub fn from_path(path: &SamplePath, coordinate: usize) -> Result<Graph2D> {
        if coordinate >= path.dim() {
            return Err(Error::invalid(format!(
                "coordinate {coordinate} out of range for a {}-dimensional path",
                path.dim()
            )));
        }
        let pts: Vec<Point2> = path
            .times()
            .iter()
            .zip(path.coordinate(coordinate))
            .map(|(&t, &x)| Point2::new(t, x))
            .collect();
        Graph2D::from_points(pts)
    }

    /// Build a graph from raw vertices; abscissae must be nondecreasing
    /// and everything finite.
    pub fn from_points(vertices: Vec<Point2>) -> Result<Graph2D> {
        if vertices.len() < 2 {
            return Err(Error::invalid("a graph needs at least two vertices"));
        }
        let mut min = vertices[0];
        let mut max = vertices[0];
        for w in vertices.windows(2) {
            if w[1].x < w[0].x {
                return Err(Error::invalid("graph abscissae must be nondecreasing"));
            }
        }
        for p in &vertices {
            if !(p.x.is_finite() && p.y.is_finite()) {
                return Err(Error::invalid("graph vertices must be finite"));
            }
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Ok(Graph2D {
            vertices,
            bbox: Rect2 { min, max },
        })
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn segment_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segment(&self, i: usize) -> Segment2 {
        Segment2::new(self.vertices[i], self.vertices[i + 1])
    }

    pub fn bbox(&self) -> Rect2 {
        self.bbox
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment2> + '_ {
        self.vertices.windows(2).map(|w| Segment2::new(w[0], w[1]))
    }

    /// Indices of the segments whose x-extent meets the closed interval
    /// `[x0, x1]`; a contiguous range because abscissae are sorted.
    pub fn segments_in_x_range(&self, x0: f64, x1: f64) -> std::ops::Range<usize> {
        let n = self.segment_count();
        // First segment with right endpoint >= x0.
        let lo = self.vertices[1..].partition_point(|p| p.x < x0);
        // First segment with left endpoint > x1.
        let hi = self.vertices[..n].partition_point(|p| p.x <= x1);
        lo.min(hi)..hi
    }

    /// Ordinate of the polyline at abscissa `x`, linearly interpolated.
    /// With repeated abscissae (vertical jumps) the earliest matching
    /// vertex wins. Returns None outside the x-extent.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        if x < self.bbox.min.x || x > self.bbox.max.x {
            return None;
        }
        let i = self
            .vertices
            .partition_point(|p| p.x < x)
            .min(self.vertices.len() - 1);
        let p = self.vertices[i];
        if p.x == x || i == 0 {
            return Some(p.y);
        }
        let q = self.vertices[i - 1];
        debug_assert!(q.x <= x && x <= p.x);
        if p.x == q.x {
            return Some(q.y);
        }
        Some(q.y + (x - q.x) * (p.y - q.y) / (p.x - q.x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::{gen_wiener, ProcessSpec};

    #[test]
    fn graph_from_path() {
        let p = gen_wiener(16, 3).unwrap();
        let g = Graph2D::from_path(&p, 0).unwrap();
        assert_eq!(g.vertices().len(), 17);
        assert_eq!(g.segment_count(), 16);
        assert_eq!(g.vertices()[0], Point2::new(0.0, 0.0));
        assert_eq!(g.bbox().min.x, 0.0);
        assert_eq!(g.bbox().max.x, 1.0);
        assert!(Graph2D::from_path(&p, 1).is_err());
    }

    #[test]
    fn from_points_validation() {
        assert!(Graph2D::from_points(vec![Point2::new(0.0, 0.0)]).is_err());
        assert!(Graph2D::from_points(vec![
            Point2::new(0.0, 0.0),
            Point2::new(-1.0, 0.0)
        ])
        .is_err());
        // Vertical jumps (equal abscissae) are legal.
        let g = Graph2D::from_points(vec![
            Point2::new(0.0, 0.0),
            Point2::new(0.5, 1.0),
            Point2::new(0.5, -1.0),
            Point2::new(1.0, 0.0),
        ])
        .unwrap();
        assert_eq!(g.segment_count(), 3);
    }

    #[test]
    fn segment_range_queries() {
        let pts: Vec<Point2> = (0..=10).map(|k| Point2::new(k as f64, 0.0)).collect();
        let g = Graph2D::from_points(pts).unwrap();
        assert_eq!(g.segments_in_x_range(2.5, 4.5), 2..5);
        // Closed endpoints: touching segments count.
        assert_eq!(g.segments_in_x_range(3.0, 3.0), 2..4);
        assert_eq!(g.segments_in_x_range(-5.0, -1.0), 0..0);
        assert_eq!(g.segments_in_x_range(20.0, 30.0).len(), 0);
        assert_eq!(g.segments_in_x_range(-1.0, 20.0), 0..10);
    }

    #[test]
    fn value_at_interpolates() {
        let g = Graph2D::from_points(vec![
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 2.0),
            Point2::new(2.0, 0.0),
        ])
        .unwrap();
        assert_eq!(g.value_at(0.0), Some(0.0));
        assert_eq!(g.value_at(0.5), Some(1.0));
        assert_eq!(g.value_at(1.0), Some(2.0));
        assert_eq!(g.value_at(1.5), Some(1.0));
        assert_eq!(g.value_at(2.0), Some(0.0));
        assert_eq!(g.value_at(2.1), None);
        let _ = ProcessSpec::Wiener;
    }
}
