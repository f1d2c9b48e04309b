//! Sample-path simulation and fractal dimension estimation.
//!
//! The crate is organised in three layers:
//!
//! * [`process`] — generators for Wiener, d-dimensional Brownian,
//!   symmetric β-stable and fractional Brownian sample paths, plus
//!   Itô integrals against a Wiener path and quadratic covariation.
//! * [`geometry`] — polyline graphs of sample paths, subdivided
//!   rectangular windows, and exact closed-cell occupancy counts
//!   (fast clipping counter plus a brute-force oracle).
//! * [`estimators`] — box-counting and Assouad-style dimension fits,
//!   full-window searches, threading-probability estimates with a
//!   rigorous quadrature lower bound, and zigzag pattern scans.
//!
//! Batch work (Monte Carlo replicas, scale sweeps, window sweeps) runs
//! through [`exec`], which uses rayon when the default `parallel`
//! feature is enabled and plain loops otherwise. Results are identical
//! byte-for-byte in both modes and for any thread count: every random
//! stream is derived from the master seed and the task's index, never
//! from execution order.

pub mod error;
pub mod estimators;
pub mod exec;
pub mod geometry;
pub mod io;
pub mod process;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
