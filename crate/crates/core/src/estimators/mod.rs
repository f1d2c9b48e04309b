//! Dimension and threading-probability estimators built on the
//! geometry layer.

mod assouad;
mod boxdim;
mod fullwindow;
mod threading;
mod zigzag;

pub use assouad::{assouad_profile, AssouadPlan, AssouadProfile, ScalingRecord};
pub use boxdim::{box_dimension, trail_dimension, DimensionFit};
pub use fullwindow::{full_window_search, proof_scheme_windows, FullWindowHit};
pub use threading::{empirical_pn, pn_quadrature_bound, PnConfig, ThreadingReport};
pub use zigzag::{zigzag_scan, ZigzagScan};
