//! Local scaling profiles: the two-scale counts behind Assouad-style
//! dimension estimates.
//!
//! For an anchor `z` on the graph and an outer scale `R`, the profile
//! measures how the cover count `N(B(z, R), r)` grows as the inner
//! scale sweeps `r = R / 2^k` over a pinned set of ratio octaves. The
//! reported exponent is the log-log slope of those counts, clamped by
//! the slope of the ball's own cell budget. The clamp encodes the
//! planar ceiling: halving `r` splits every cell into four, so the
//! budget can grow by at most `4x` per octave, every pairwise slope of
//! the budget is at most 2, and a least-squares slope is a convex
//! combination of pairwise slopes. The clamped exponent therefore
//! never exceeds 2 no matter how wild the path is.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{ball_cell_budget, count_cover_scales, Graph2D, PlaneSet, Point2};
use crate::stats::linear_fit;

/// Largest octave we allow anywhere in a plan; keeps every scale well
/// clear of the subnormal range.
const MAX_OCTAVE: u32 = 40;

#[derive(Clone, Debug, Serialize)]
pub struct AssouadPlan {
    /// Outer scales `R = 2^-m`, one profile per anchor and entry.
    pub outer_octaves: Vec<u32>,
    /// Inner scales `r = R / 2^k`; at least two strictly increasing
    /// entries so a slope exists.
    pub ratio_octaves: Vec<u32>,
    /// Upper bound on the number of anchors when `anchor_stride` is 0.
    pub max_anchors: usize,
    /// Walk every `anchor_stride`-th vertex; 0 picks the smallest
    /// stride that respects `max_anchors`.
    pub anchor_stride: usize,
}

impl Default for AssouadPlan {
    fn default() -> Self {
        // 1025 anchors put one anchor every 2^-10 of the time range on
        // a 2^20-step path; the scale choices keep the per-anchor work
        // around a million cell visits even on such paths.
        AssouadPlan {
            outer_octaves: vec![4, 5, 6],
            ratio_octaves: vec![3, 4, 5],
            max_anchors: 1025,
            anchor_stride: 0,
        }
    }
}

/// One anchor/outer-scale profile.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingRecord {
    pub anchor_t: f64,
    pub anchor_x: f64,
    /// Outer scale `R`.
    pub outer: f64,
    /// Finest inner scale used for this record.
    pub inner: f64,
    /// Cover count at the finest inner scale.
    pub count: usize,
    /// Log-log slope of the cover counts across the ratio octaves.
    pub raw_slope: f64,
    /// Log-log slope of the ball's cell budget; at most 2 by the
    /// four-children argument.
    pub budget_slope: f64,
    /// `min(raw_slope, budget_slope)` — the local dimension estimate.
    pub exponent: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct AssouadProfile {
    pub records: Vec<ScalingRecord>,
    pub max_exponent: f64,
}

impl AssouadProfile {
    /// The first record attaining the maximal exponent.
    pub fn witness(&self) -> Option<&ScalingRecord> {
        self.records.iter().find(|r| r.exponent == self.max_exponent)
    }
}

fn validate_plan(plan: &AssouadPlan) -> Result<()> {
    if plan.outer_octaves.is_empty() {
        return Err(Error::invalid("at least one outer octave is required"));
    }
    if plan.ratio_octaves.len() < 2 {
        return Err(Error::invalid(
            "at least two ratio octaves are required to fit a slope",
        ));
    }
    if plan.ratio_octaves.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid("ratio octaves must be strictly increasing"));
    }
    let all = plan.outer_octaves.iter().chain(&plan.ratio_octaves);
    for &o in all {
        if o == 0 || o > MAX_OCTAVE {
            return Err(Error::invalid(format!(
                "octaves must lie in [1, {MAX_OCTAVE}], got {o}"
            )));
        }
    }
    if plan.anchor_stride == 0 && plan.max_anchors == 0 {
        return Err(Error::invalid(
            "max_anchors must be positive when the stride is automatic",
        ));
    }
    Ok(())
}

/// Scan the graph's local scaling behaviour over strided anchors and
/// all planned outer scales.
pub fn assouad_profile(graph: &Graph2D, plan: &AssouadPlan) -> Result<AssouadProfile> {
    validate_plan(plan)?;
    let verts = graph.vertices();
    let stride = if plan.anchor_stride > 0 {
        plan.anchor_stride
    } else {
        verts.len().div_ceil(plan.max_anchors).max(1)
    };
    let anchors: Vec<Point2> = verts.iter().step_by(stride).copied().collect();
    let n_outer = plan.outer_octaves.len();
    let ln2 = std::f64::consts::LN_2;
    let xs: Vec<f64> = plan.ratio_octaves.iter().map(|&k| k as f64 * ln2).collect();

    let jobs = anchors.len() * n_outer;
    let records: Vec<Result<ScalingRecord>> = exec::map_indexed(jobs, |j| {
        let anchor = anchors[j / n_outer];
        let m = plan.outer_octaves[j % n_outer];
        let outer = 0.5f64.powi(m as i32);
        let inners: Vec<f64> = plan
            .ratio_octaves
            .iter()
            .map(|&k| outer * 0.5f64.powi(k as i32))
            .collect();
        let counts = count_cover_scales(&PlaneSet::Graph(graph), anchor, outer, &inners)?;
        // The anchor is a vertex inside its own ball, so every scale
        // sees at least one cell.
        assert!(counts.iter().all(|&c| c > 0), "anchor fell off its graph");
        let budgets = inners
            .iter()
            .map(|&r| ball_cell_budget(anchor, outer, r))
            .collect::<Result<Vec<_>>>()?;
        let count_logs: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
        let budget_logs: Vec<f64> = budgets.iter().map(|&c| (c as f64).ln()).collect();
        let raw_slope = linear_fit(&xs, &count_logs).slope;
        let budget_slope = linear_fit(&xs, &budget_logs).slope;
        Ok(ScalingRecord {
            anchor_t: anchor.x,
            anchor_x: anchor.y,
            outer,
            inner: *inners.last().unwrap(),
            count: *counts.last().unwrap(),
            raw_slope,
            budget_slope,
            exponent: raw_slope.min(budget_slope),
        })
    });
    let records = records.into_iter().collect::<Result<Vec<_>>>()?;
    let max_exponent = records
        .iter()
        .map(|r| r.exponent)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(AssouadProfile {
        records,
        max_exponent,
    })
}
