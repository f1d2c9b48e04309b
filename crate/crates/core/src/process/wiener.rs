//! Wiener process and d-dimensional Brownian motion.

use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::rng::{coordinate_seed, rng_from_seed, Rng};

use super::{ProcessSpec, SamplePath};

pub(crate) fn gaussian_increments(n_steps: usize, delta: f64, rng: &mut Rng) -> Vec<f64> {
    use rand::Rng as _;
    let scale = delta.sqrt();
    (0..n_steps)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Sample a standard Wiener path on `[0, 1]`: independent increments
/// with variance equal to the step length.
pub fn gen_wiener(n_steps: usize, seed: u64) -> Result<SamplePath> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be positive"));
    }
    let delta = 1.0 / n_steps as f64;
    let mut rng = rng_from_seed(seed);
    let inc = gaussian_increments(n_steps, delta, &mut rng);
    Ok(SamplePath::from_increments(
        ProcessSpec::Wiener,
        seed,
        delta,
        vec![inc],
    ))
}

/// Sample d independent Brownian coordinates. Coordinate `c` draws from
/// the stream keyed by `coordinate_seed(seed, c)`, so adding a
/// coordinate never perturbs the existing ones.
pub fn gen_bm_d(n_steps: usize, dim: usize, seed: u64) -> Result<SamplePath> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be positive"));
    }
    let spec = ProcessSpec::BrownianD { dim };
    spec.validate()?;
    let delta = 1.0 / n_steps as f64;
    let increments = crate::exec::map_indexed(dim, |c| {
        let mut rng = rng_from_seed(coordinate_seed(seed, c as u64));
        gaussian_increments(n_steps, delta, &mut rng)
    });
    Ok(SamplePath::from_increments(spec, seed, delta, increments))
}
