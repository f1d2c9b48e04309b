//! Alternating large-increment scans.
//!
//! Over a window `[a, b]` split into `n` equal pieces, the scan asks
//! for increments that alternate in sign, starting upward, each of
//! magnitude at least `sqrt(b - a)`. For the Wiener process each piece
//! has standard deviation `sqrt((b - a) / n)`, so a single piece
//! clears the bar with probability `1 - Phi(sqrt(n))` and independence
//! across pieces gives `
//!     P(scan holds) = (1 - Phi(sqrt(n)))^n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::process::SamplePath;

#[derive(Clone, Debug, Serialize)]
pub struct ZigzagScan {
    /// Did every increment alternate with sufficient magnitude?
    pub holds: bool,
    /// The `n` increments between consecutive snapped endpoints.
    pub increments: Vec<f64>,
    /// The common magnitude bar `sqrt(b - a)`.
    pub required_magnitude: f64,
    /// Worst distance between an ideal endpoint and its grid snap.
    pub max_snap_error: f64,
    /// Snapped grid indices of the `n + 1` endpoints.
    pub indices: Vec<usize>,
}

/// Evaluate the alternating-increment event for one path over
/// `interval = (a, b)` split into `n` pieces.
pub fn zigzag_scan(path: &SamplePath, interval: (f64, f64), n: usize) -> Result<ZigzagScan> {
    if path.dim() != 1 {
        return Err(Error::Unsupported(
            "zigzag scans read scalar paths".into(),
        ));
    }
    if n < 2 {
        return Err(Error::invalid("a zigzag needs at least two pieces"));
    }
    let (a, b) = interval;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::invalid("interval must be finite with a < b"));
    }
    if a < 0.0 || b > path.horizon() * (1.0 + 1e-12) {
        return Err(Error::invalid("interval leaves the path horizon"));
    }
    let delta = path.delta();
    let mut indices = Vec::with_capacity(n + 1);
    let mut max_snap_error: f64 = 0.0;
    for k in 0..=n {
        let t = a + (b - a) * k as f64 / n as f64;
        let idx = (t / delta).round() as usize;
        let idx = idx.min(path.n_steps());
        max_snap_error = max_snap_error.max((t - idx as f64 * delta).abs());
        indices.push(idx);
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "interval is too short for the sample grid: endpoints collide",
        ));
    }
    let values = path.coordinate(0);
    let increments: Vec<f64> = indices
        .windows(2)
        .map(|w| values[w[1]] - values[w[0]])
        .collect();
    let required_magnitude = (b - a).sqrt();
    let holds = increments.iter().enumerate().all(|(k, &inc)| {
        let signed_ok = if k % 2 == 0 { inc > 0.0 } else { inc < 0.0 };
        signed_ok && inc.abs() >= required_magnitude
    });
    Ok(ZigzagScan {
        holds,
        increments,
        required_magnitude,
        max_snap_error,
        indices,
    })
}
