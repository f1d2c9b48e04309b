//! Subdivided rectangular windows and occupancy masks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{Point2, Rect2};

/// Cap on the total cell count of a window, so masks stay affordable.
const MAX_CELLS: usize = 1 << 24;

/// An axis-aligned box `prod [anchor_i, anchor_i + sides_i]` split into
/// `subdivisions_i` equal closed cells along each axis.
///
/// Cell boundaries are computed as `anchor + index * (side / n)`; two
/// adjacent cells therefore share the same floating-point boundary
/// value, and for dyadic anchors, sides and subdivision counts the
/// boundaries are exact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    anchor: Vec<f64>,
    sides: Vec<f64>,
    subdivisions: Vec<usize>,
}

impl Window {
    pub fn new(anchor: Vec<f64>, sides: Vec<f64>, subdivisions: Vec<usize>) -> Result<Window> {
        if anchor.is_empty() || anchor.len() != sides.len() || anchor.len() != subdivisions.len() {
            return Err(Error::invalid(
                "anchor, sides and subdivisions must have equal nonzero lengths",
            ));
        }
        if anchor.iter().any(|a| !a.is_finite()) {
            return Err(Error::invalid("window anchor must be finite"));
        }
        if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(Error::invalid("window sides must be positive and finite"));
        }
        if subdivisions.iter().any(|&n| n == 0) {
            return Err(Error::invalid("subdivision counts must be positive"));
        }
        let mut total: usize = 1;
        for &n in &subdivisions {
            total = total
                .checked_mul(n)
                .filter(|&t| t <= MAX_CELLS)
                .ok_or_else(|| {
                    Error::invalid(format!("window exceeds the {MAX_CELLS}-cell cap"))
                })?;
        }
        Ok(Window {
            anchor,
            sides,
            subdivisions,
        })
    }

    /// Two-dimensional window with a common subdivision count: the
    /// `n x n` case used by full-window experiments.
    pub fn square2(anchor: [f64; 2], sides: [f64; 2], n: usize) -> Result<Window> {
        Window::new(anchor.to_vec(), sides.to_vec(), vec![n, n])
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn sides(&self) -> &[f64] {
        &self.sides
    }

    pub fn subdivisions(&self) -> &[usize] {
        &self.subdivisions
    }

    pub fn cell_count(&self) -> usize {
        self.subdivisions.iter().product()
    }

    /// Width of a cell along axis `a`.
    pub fn cell_side(&self, a: usize) -> f64 {
        self.sides[a] / self.subdivisions[a] as f64
    }

    /// The closed cell with the given per-axis indices.
    pub fn cell(&self, idx: &[usize]) -> NdBox {
        assert_eq!(idx.len(), self.dim());
        let mut lo = Vec::with_capacity(self.dim());
        let mut hi = Vec::with_capacity(self.dim());
        for (a, &i) in idx.iter().enumerate() {
            assert!(i < self.subdivisions[a], "cell index out of range");
            let w = self.cell_side(a);
            lo.push(self.anchor[a] + i as f64 * w);
            hi.push(self.anchor[a] + (i + 1) as f64 * w);
        }
        NdBox { lo, hi }
    }

    /// All cells in lexicographic index order.
    pub fn cells(&self) -> impl Iterator<Item = (Vec<usize>, NdBox)> + '_ {
        CellIndices::new(self.subdivisions.clone()).map(|idx| {
            let cell = self.cell(&idx);
            (idx, cell)
        })
    }

    /// The whole window as a closed 2D rectangle (2D windows only).
    pub fn rect2(&self) -> Option<Rect2> {
        if self.dim() != 2 {
            return None;
        }
        Some(Rect2::new(
            Point2::new(self.anchor[0], self.anchor[1]),
            Point2::new(self.anchor[0] + self.sides[0], self.anchor[1] + self.sides[1]),
        ))
    }
}

/// Closed n-dimensional box.
#[derive(Clone, Debug, PartialEq)]
pub struct NdBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl NdBox {
    pub fn rect2(&self) -> Rect2 {
        assert_eq!(self.lo.len(), 2);
        Rect2::new(
            Point2::new(self.lo[0], self.lo[1]),
            Point2::new(self.hi[0], self.hi[1]),
        )
    }
}

/// Lexicographic iterator over multi-indices below given bounds.
struct CellIndices {
    bounds: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl CellIndices {
    fn new(bounds: Vec<usize>) -> CellIndices {
        let start = if bounds.iter().all(|&b| b > 0) {
            Some(vec![0; bounds.len()])
        } else {
            None
        };
        CellIndices {
            bounds,
            next: start,
        }
    }
}

impl Iterator for CellIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.clone()?;
        // Advance odometer-style from the last axis.
        let mut idx = current.clone();
        let mut axis = idx.len();
        loop {
            if axis == 0 {
                self.next = None;
                break;
            }
            axis -= 1;
            idx[axis] += 1;
            if idx[axis] < self.bounds[axis] {
                self.next = Some(idx);
                break;
            }
            idx[axis] = 0;
        }
        Some(current)
    }
}

/// Which cells of a window a set occupies.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyMask {
    dims: Vec<usize>,
    bits: Vec<bool>,
}

impl OccupancyMask {
    pub fn new(dims: Vec<usize>) -> OccupancyMask {
        let len = dims.iter().product();
        OccupancyMask {
            dims,
            bits: vec![false; len],
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.dims.len());
        let mut f = 0;
        for (a, &i) in idx.iter().enumerate() {
            debug_assert!(i < self.dims[a]);
            f = f * self.dims[a] + i;
        }
        f
    }

    pub fn get(&self, idx: &[usize]) -> bool {
        self.bits[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize]) {
        let f = self.flat(idx);
        self.bits[f] = true;
    }

    pub fn count_occupied(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Result of counting the cells of a window met by a set.
#[derive(Clone, Debug, PartialEq)]
pub struct CountResult {
    pub count: usize,
    pub mask: OccupancyMask,
}

impl CountResult {
    /// Occupied fraction of the window's cells.
    pub fn fraction(&self, window: &Window) -> f64 {
        self.count as f64 / window.cell_count() as f64
    }

    /// Does the count meet the full-window event `N = prod n_i`?
    pub fn is_full(&self, window: &Window) -> bool {
        self.count == window.cell_count()
    }
}
