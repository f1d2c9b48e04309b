//! Threading events: the chance that a path visits a prescribed band
//! in every one of the `n^2` time slots of the unit window, estimated
//! by Monte Carlo and bounded from below by a deterministic quadrature.
//!
//! The event is pinned to the time grid `t_k = k / n^2`, `k = 1..n^2`,
//! with band `[b/n, (b+1)/n]`, `b = k mod n`. A path that threads all
//! bands leaves a witness vertex in every cell of the `n x n` unit
//! window, so threading frequency is a lower bound for the full-window
//! frequency whenever the `t_k` land exactly on the sample grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec;
use crate::geometry::{count_window, Graph2D, Window};
use crate::process::{generate, ProcessSpec};
use crate::rng::replica_seed;
use crate::stats::{normal_cdf, wilson_interval};

/// Two-sided 95% normal quantile used for the Wilson interval.
const WILSON_Z: f64 = 1.959_964;

/// Sample count used to check integrand positivity before running a
/// threading experiment on an Itô integral.
const INTEGRAND_GRID: usize = 10_000;

#[derive(Clone, Debug, Serialize)]
pub struct PnConfig {
    /// Window subdivisions per axis; the event runs over `n^2` slots.
    pub n: usize,
    /// Monte Carlo replicas.
    pub replicas: usize,
    /// Steps per simulated path. Must be at least `8 n^2` so the time
    /// grid resolves every slot.
    pub n_steps: usize,
    /// Quadrature bins per band for the Wiener lower bound.
    pub bins: usize,
}

impl Default for PnConfig {
    fn default() -> Self {
        PnConfig {
            n: 2,
            replicas: 2000,
            n_steps: 4096,
            bins: 400,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreadingReport {
    pub n: usize,
    pub replicas: usize,
    pub n_steps: usize,
    pub mc_successes: usize,
    pub mc_frequency: f64,
    /// Wilson 95% interval for the threading probability.
    pub ci_low: f64,
    pub ci_high: f64,
    pub full_window_successes: usize,
    pub full_window_frequency: f64,
    /// Deterministic lower bound for the threading probability; only
    /// available for the Wiener process.
    pub quadrature_bound: Option<f64>,
    /// Largest distance between a slot time `k / n^2` and the grid
    /// time it was snapped to. Zero exactly when `n^2` divides
    /// `n_steps`.
    pub snap_slack: f64,
}

fn validate_config(cfg: &PnConfig) -> Result<()> {
    if cfg.n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if cfg.replicas == 0 {
        return Err(Error::invalid("at least one replica is required"));
    }
    let nn = cfg.n * cfg.n;
    if cfg.n_steps < 8 * nn {
        return Err(Error::invalid(format!(
            "n_steps = {} cannot resolve {} slots; need at least {}",
            cfg.n_steps,
            nn,
            8 * nn
        )));
    }
    Ok(())
}

/// Families the threading event is defined for: scalar processes, and
/// Itô integrals whose integrand stays bounded away from zero (a
/// vanishing integrand freezes the path and kills the event).
fn threading_support(spec: &ProcessSpec) -> Result<()> {
    match spec {
        ProcessSpec::BrownianD { .. } => Err(Error::Unsupported(
            "threading events are defined for scalar processes".into(),
        )),
        ProcessSpec::ItoIntegral { integrand } => {
            let min = integrand.min_on_unit_interval(INTEGRAND_GRID);
            if min <= 0.0 {
                Err(Error::Unsupported(format!(
                    "threading needs an integrand bounded away from zero on [0, 1]; \
                     sampled minimum is {min}"
                )))
            } else {
                Ok(())
            }
        }
        _ => Ok(()),
    }
}

/// Worst snapping error of the slot times over the sample grid.
fn snap_slack(n: usize, n_steps: usize) -> f64 {
    let nn = (n * n) as f64;
    let steps = n_steps as f64;
    (1..=n * n)
        .map(|k| {
            let target = k as f64 / nn;
            let idx = (target * steps).round();
            (target - idx / steps).abs()
        })
        .fold(0.0, f64::max)
}

/// One replica: does the path thread every band, and does it fill the
/// `n x n` unit window?
fn replica_outcome(
    spec: &ProcessSpec,
    cfg: &PnConfig,
    window: &Window,
    seed: u64,
) -> Result<(bool, bool)> {
    let path = generate(spec, cfg.n_steps, seed)?;
    let nn = cfg.n * cfg.n;
    let steps = cfg.n_steps as f64;
    let values = path.coordinate(0);
    let band_width = 1.0 / cfg.n as f64;
    let mut threading = true;
    for k in 1..=nn {
        let target = k as f64 / nn as f64;
        let idx = (target * steps).round() as usize;
        let x = values[idx];
        let lo = (k % cfg.n) as f64 * band_width;
        if !(x >= lo && x <= lo + band_width) {
            threading = false;
            break;
        }
    }
    let graph = Graph2D::from_path(&path, 0)?;
    let full = count_window(&graph, window)?.count == nn;
    Ok((threading, full))
}

/// Monte Carlo estimate of the threading probability, with the
/// full-window frequency of the same replicas and, for the Wiener
/// process, the quadrature lower bound.
pub fn empirical_pn(spec: &ProcessSpec, cfg: &PnConfig, seed: u64) -> Result<ThreadingReport> {
    spec.validate()?;
    validate_config(cfg)?;
    threading_support(spec)?;
    let window = Window::square2([0.0, 0.0], [1.0, 1.0], cfg.n)?;
    let outcomes: Vec<Result<(bool, bool)>> = exec::map_indexed(cfg.replicas, |r| {
        replica_outcome(spec, cfg, &window, replica_seed(seed, r as u64))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let mc_successes = outcomes.iter().filter(|o| o.0).count();
    let full_window_successes = outcomes.iter().filter(|o| o.1).count();
    let (ci_low, ci_high) =
        wilson_interval(mc_successes as u64, cfg.replicas as u64, WILSON_Z);
    let quadrature_bound = match spec {
        ProcessSpec::Wiener => Some(pn_quadrature_bound(spec, cfg.n, cfg.bins)?),
        _ => None,
    };
    Ok(ThreadingReport {
        n: cfg.n,
        replicas: cfg.replicas,
        n_steps: cfg.n_steps,
        mc_successes,
        mc_frequency: mc_successes as f64 / cfg.replicas as f64,
        ci_low,
        ci_high,
        full_window_successes,
        full_window_frequency: full_window_successes as f64 / cfg.replicas as f64,
        quadrature_bound,
        snap_slack: snap_slack(cfg.n, cfg.n_steps),
    })
}

/// Deterministic lower bound for the Wiener threading probability.
///
/// The slot values form a Gaussian Markov chain: `Y_k = Y_{k-1} + xi_k`
/// with `xi_k ~ N(0, 1/n^2)`. Each band is split into `bins` equal
/// cells and the chain's sub-probability mass is pushed forward with
/// the worst-case transition kernel: the Gaussian mass a source cell
/// sends to a target cell, minimised over the source cell. That
/// minimum sits at one of the two source endpoints, because the mass
/// `y -> P(y + xi in target)` rises to a single peak (source aligned
/// with the target) and falls on both sides. Every discarded sliver of
/// mass only lowers the total, so the result is a true lower bound,
/// and refining the bins (nested splits) can only raise it.
pub fn pn_quadrature_bound(spec: &ProcessSpec, n: usize, bins: usize) -> Result<f64> {
    if !matches!(spec, ProcessSpec::Wiener) {
        return Err(Error::Unsupported(
            "the quadrature bound is implemented for the Wiener process".into(),
        ));
    }
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    if bins < 10 {
        return Err(Error::invalid("at least 10 quadrature bins are required"));
    }
    let nn = n * n;
    // Step variance over a slot of length 1/n^2.
    let sigma = 1.0 / n as f64;
    let width = 1.0 / (n as f64 * bins as f64);
    let band_lo = |k: usize| (k % n) as f64 / n as f64;

    // First slot: exact Gaussian masses from X(0) = 0.
    let lo1 = band_lo(1);
    let mut mass: Vec<f64> = (0..bins)
        .map(|j| {
            let a = lo1 + j as f64 * width;
            let b = a + width;
            normal_cdf(b / sigma) - normal_cdf(a / sigma)
        })
        .collect();

    let mut next = vec![0.0f64; bins];
    for k in 2..=nn {
        let src_lo = band_lo(k - 1);
        let dst_lo = band_lo(k);
        for (j, slot) in next.iter_mut().enumerate() {
            let c = dst_lo + j as f64 * width;
            let d = c + width;
            let gain =
                |y: f64| normal_cdf((d - y) / sigma) - normal_cdf((c - y) / sigma);
            let mut acc = 0.0;
            for (i, m) in mass.iter().enumerate() {
                let lo = src_lo + i as f64 * width;
                acc += m * gain(lo).min(gain(lo + width));
            }
            *slot = acc;
        }
        std::mem::swap(&mut mass, &mut next);
    }
    Ok(mass.iter().sum())
}
