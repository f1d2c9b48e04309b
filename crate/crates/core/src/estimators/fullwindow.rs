//! Searching paths for windows that are completely (or nearly) filled.
//!
//! A window with `n x n` subdivisions is *full* when the graph meets
//! every one of its cells. The geometric proof scheme walks a ladder of
//! windows up the time axis, each half the width of the previous one
//! and rescaled vertically by the process' scaling index, so that a
//! path of a self-similar process has an independent chance of filling
//! each rung.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{count_window, Graph2D, Window};
use crate::process::SamplePath;

#[derive(Clone, Debug, Serialize)]
pub struct FullWindowHit {
    pub window: Window,
    pub count: usize,
    pub fraction: f64,
}

/// Count every window against the graph and keep those whose occupied
/// fraction reaches `threshold` (1.0 keeps only full windows), best
/// first.
pub fn full_window_search(
    graph: &Graph2D,
    windows: &[Window],
    threshold: f64,
) -> Result<Vec<FullWindowHit>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid("threshold must lie in (0, 1]"));
    }
    let counts: Vec<_> = exec::map_indexed(windows.len(), |i| count_window(graph, &windows[i]));
    let counts = counts.into_iter().collect::<Result<Vec<_>>>()?;
    let mut hits: Vec<FullWindowHit> = windows
        .iter()
        .zip(&counts)
        .map(|(w, c)| FullWindowHit {
            window: w.clone(),
            count: c.count,
            fraction: c.fraction(w),
        })
        .filter(|h| h.fraction >= threshold)
        .collect();
    hits.sort_by(|a, b| b.fraction.partial_cmp(&a.fraction).expect("finite fractions"));
    Ok(hits)
}

/// Windows of the halving proof scheme for a scalar path.
///
/// Rung `i` (from 1) is anchored on the path at `a_i = 1 - 2^{1-i}`
/// with horizontal side `2^-i` and vertical side `(2^-i)^{1/beta}`,
/// split `n x n`. Rungs are emitted while the horizontal side still
/// spans at least `8 n^2` sample steps (so counting is meaningful) and
/// the level does not exceed `max_level`.
pub fn proof_scheme_windows(
    path: &SamplePath,
    beta: f64,
    n: usize,
    max_level: usize,
) -> Result<Vec<Window>> {
    if path.dim() != 1 {
        return Err(Error::Unsupported(
            "the proof scheme reads scalar paths".into(),
        ));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid("scaling index beta must be positive"));
    }
    if n == 0 || max_level == 0 {
        return Err(Error::invalid("n and max_level must be at least 1"));
    }
    let delta = path.delta();
    let values = path.coordinate(0);
    let floor_steps = 8.0 * (n * n) as f64 * delta;
    let mut windows = Vec::new();
    for i in 1..=max_level {
        let side = 0.5f64.powi(i as i32);
        if side < floor_steps {
            break;
        }
        let a = 1.0 - 0.5f64.powi(i as i32 - 1);
        // Interpolate X(a) on the sample grid; a is a dyadic rational
        // so u is exact for power-of-two step counts.
        let u = a / delta;
        let i0 = (u.floor() as usize).min(path.n_steps() - 1);
        let frac = u - i0 as f64;
        let x = values[i0] + frac * (values[i0 + 1] - values[i0]);
        windows.push(Window::square2(
            [a, x],
            [side, side.powf(1.0 / beta)],
            n,
        )?);
    }
    if windows.is_empty() {
        return Err(Error::invalid(format!(
            "path resolution {delta} is too coarse for any proof-scheme level"
        )));
    }
    Ok(windows)
}
