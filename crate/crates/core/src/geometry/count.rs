//! Window-cell occupancy counting: a clipping counter that only visits
//! cells near each segment, and a brute-force oracle that tests every
//! cell against every segment through a different geometric predicate.
//!
//! Both implement the same closed convention — touching a cell boundary
//! occupies the cell — so their results must agree exactly, which the
//! test suite exercises on fixtures and random inputs.

use crate::error::{Error, Result};

use super::{CountResult, Graph2D, OccupancyMask, Rect2, Segment2, Window};

/// Closed segment–rectangle intersection via parametric slab clipping
/// (Liang–Barsky). Handles degenerate (point) segments and touching
/// contacts: any shared boundary point counts.
pub fn segment_intersects_box2(seg: &Segment2, rect: &Rect2) -> bool {
    clip_segment_to_rect(seg, rect).is_some()
}

/// Parameter interval of the segment inside the closed rectangle, or
/// None when it misses.
pub(crate) fn clip_segment_to_rect(seg: &Segment2, rect: &Rect2) -> Option<(f64, f64)> {
    let dx = seg.end.x - seg.start.x;
    let dy = seg.end.y - seg.start.y;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    if clip_slab(seg.start.x, dx, rect.min.x, rect.max.x, &mut t0, &mut t1)
        && clip_slab(seg.start.y, dy, rect.min.y, rect.max.y, &mut t0, &mut t1)
    {
        Some((t0, t1))
    } else {
        None
    }
}

/// Intersect the parameter interval [t0, t1] with the slab
/// `lo <= p + t d <= hi`; false when the interval empties.
fn clip_slab(p: f64, d: f64, lo: f64, hi: f64, t0: &mut f64, t1: &mut f64) -> bool {
    if d == 0.0 {
        return p >= lo && p <= hi;
    }
    let (mut ta, mut tb) = ((lo - p) / d, (hi - p) / d);
    if ta > tb {
        std::mem::swap(&mut ta, &mut tb);
    }
    *t0 = t0.max(ta);
    *t1 = t1.min(tb);
    t0 <= t1
}

/// Closed segment–rectangle intersection by a separating-axis argument:
/// the rectangle's two axes (bounding-box overlap) and the segment's
/// normal (all four corners strictly on one side). Used by the oracle
/// so that the two counters never share clipping arithmetic.
fn segment_intersects_rect_sat(seg: &Segment2, rect: &Rect2) -> bool {
    let (sx0, sx1) = seg.x_range();
    let (sy0, sy1) = seg.y_range();
    if sx1 < rect.min.x || sx0 > rect.max.x || sy1 < rect.min.y || sy0 > rect.max.y {
        return false;
    }
    let ex = seg.end.x - seg.start.x;
    let ey = seg.end.y - seg.start.y;
    let orient = |x: f64, y: f64| ex * (y - seg.start.y) - ey * (x - seg.start.x);
    let c = [
        orient(rect.min.x, rect.min.y),
        orient(rect.max.x, rect.min.y),
        orient(rect.min.x, rect.max.y),
        orient(rect.max.x, rect.max.y),
    ];
    let all_pos = c.iter().all(|&v| v > 0.0);
    let all_neg = c.iter().all(|&v| v < 0.0);
    !(all_pos || all_neg)
}

fn require_2d(window: &Window) -> Result<()> {
    if window.dim() != 2 {
        return Err(Error::invalid("window counting is two-dimensional"));
    }
    Ok(())
}

/// Candidate cell index range along one axis for a coordinate interval
/// `[v0, v1]` (closed): conservative by one cell on each side, exact
/// filtering is left to the intersection predicate.
fn candidate_range(v0: f64, v1: f64, anchor: f64, cell: f64, n: usize) -> (usize, usize) {
    debug_assert!(v0 <= v1);
    let lo = ((v0 - anchor) / cell).floor() as i64 - 1;
    let hi = ((v1 - anchor) / cell).floor() as i64 + 1;
    let lo = lo.clamp(0, n as i64 - 1) as usize;
    let hi = hi.clamp(0, n as i64 - 1) as usize;
    (lo, hi)
}

/// Count the cells of a 2D window met by the graph, visiting only the
/// cells near each segment.
pub fn count_window(graph: &Graph2D, window: &Window) -> Result<CountResult> {
    require_2d(window)?;
    let (n1, n2) = (window.subdivisions()[0], window.subdivisions()[1]);
    let (ax, ay) = (window.anchor()[0], window.anchor()[1]);
    let (cw, ch) = (window.cell_side(0), window.cell_side(1));
    let mut mask = OccupancyMask::new(vec![n1, n2]);
    let mut count = 0usize;
    let x_lo = ax;
    let x_hi = ax + window.sides()[0];
    for s in graph.segments_in_x_range(x_lo, x_hi) {
        let seg = graph.segment(s);
        let (sx0, sx1) = seg.x_range();
        let (sy0, sy1) = seg.y_range();
        if sy1 < ay || sy0 > ay + window.sides()[1] {
            continue;
        }
        let (i0, i1) = candidate_range(sx0, sx1, ax, cw, n1);
        let (j0, j1) = candidate_range(sy0, sy1, ay, ch, n2);
        for i in i0..=i1 {
            for j in j0..=j1 {
                if mask.get(&[i, j]) {
                    continue;
                }
                let cell = window.cell(&[i, j]).rect2();
                if segment_intersects_box2(&seg, &cell) {
                    mask.set(&[i, j]);
                    count += 1;
                }
            }
        }
        if count == window.cell_count() {
            break;
        }
    }
    Ok(CountResult { count, mask })
}

/// Cap on `prod n_i` for the oracle, which visits every cell-segment
/// pair.
const BRUTE_FORCE_CELL_CAP: usize = 10_000;

/// Exhaustive counter: every cell against every segment, using the
/// separating-axis predicate. Slow but independent; the reference that
/// [`count_window`] is validated against.
pub fn brute_force_count(graph: &Graph2D, window: &Window) -> Result<CountResult> {
    require_2d(window)?;
    if window.cell_count() > BRUTE_FORCE_CELL_CAP {
        return Err(Error::invalid(format!(
            "brute-force counting is capped at {BRUTE_FORCE_CELL_CAP} cells"
        )));
    }
    let mut mask = OccupancyMask::new(window.subdivisions().to_vec());
    let mut count = 0usize;
    for (idx, cell) in window.cells() {
        let rect = cell.rect2();
        for seg in graph.segments() {
            if segment_intersects_rect_sat(&seg, &rect) {
                mask.set(&idx);
                count += 1;
                break;
            }
        }
    }
    Ok(CountResult { count, mask })
}
