//! Fractional Brownian motion.
//!
//! The default sampler draws unit-step fractional Gaussian noise by
//! circulant embedding of its covariance (Davies–Harte): embed the
//! Toeplitz covariance in a 2n-circulant, take the FFT to get its
//! eigenvalues, colour complex white noise with sqrt(eigenvalue)
//! weights and transform back. Cost O(n log n).
//!
//! [`gen_fbm_exact`] implements the O(n^2) Durbin–Levinson recursion
//! (Hosking's method), which samples from the exact conditional
//! distributions and needs no positivity assumption on the embedding.
//! It doubles as an independent reference for the FFT sampler and as a
//! fallback when the embedding is rejected at small sizes.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, Rng};

use super::{ProcessSpec, SamplePath};

/// Relative tolerance for negative embedding eigenvalues: anything
/// above `-EIG_TOL * max_eigenvalue` is treated as rounding noise.
const EIG_TOL: f64 = 1e-9;

/// Largest size for which the exact sampler is an acceptable automatic
/// fallback; beyond this the quadratic cost would dwarf the FFT route.
const EXACT_FALLBACK_LIMIT: usize = 1 << 12;

/// Autocovariance of unit-step fractional Gaussian noise at lag k:
/// `((k+1)^{2h} + |k-1|^{2h} - 2 k^{2h}) / 2`.
fn fgn_acvf(hurst: f64, k: usize) -> f64 {
    let two_h = 2.0 * hurst;
    let k = k as f64;
    0.5 * ((k + 1.0).powf(two_h) + (k - 1.0).abs().powf(two_h) - 2.0 * k.powf(two_h))
}

/// Eigenvalues of the 2n-circulant embedding of an autocovariance
/// sequence given at lags `0..=n`. Errors when any eigenvalue is
/// negative beyond tolerance; tiny negatives are clamped to zero.
pub(crate) fn embedding_eigenvalues(acvf: &[f64]) -> Result<Vec<f64>> {
    let n = acvf.len() - 1;
    assert!(n >= 1, "need at least lags 0 and 1");
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = Vec::with_capacity(m);
    for &c in acvf.iter() {
        row.push(Complex::new(c, 0.0));
    }
    for j in (1..n).rev() {
        row.push(Complex::new(acvf[j], 0.0));
    }
    debug_assert_eq!(row.len(), m);
    FftPlanner::new().plan_fft_forward(m).process(&mut row);
    let eigs: Vec<f64> = row.iter().map(|z| z.re).collect();
    let max = eigs.iter().cloned().fold(f64::MIN, f64::max);
    let min = eigs.iter().cloned().fold(f64::MAX, f64::min);
    if min < -EIG_TOL * max.max(1.0) {
        return Err(Error::EmbeddingFailure {
            min_eigenvalue: min,
            tolerance: EIG_TOL * max.max(1.0),
        });
    }
    Ok(eigs.into_iter().map(|l| l.max(0.0)).collect())
}

/// Unit-step fGn via the circulant embedding.
fn fgn_circulant(hurst: f64, n: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    let acvf: Vec<f64> = (0..=n).map(|k| fgn_acvf(hurst, k)).collect();
    let eigs = embedding_eigenvalues(&acvf)?;
    let m = 2 * n;
    let mut w = vec![Complex::new(0.0, 0.0); m];
    // Independent real weights at the two self-conjugate frequencies,
    // conjugate pairs elsewhere; variances lambda/m and lambda/(2m).
    let z0: f64 = rng.sample(StandardNormal);
    let z1: f64 = rng.sample(StandardNormal);
    w[0] = Complex::new((eigs[0] / m as f64).sqrt() * z0, 0.0);
    w[n] = Complex::new((eigs[n] / m as f64).sqrt() * z1, 0.0);
    for k in 1..n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let s = (eigs[k] / (2 * m) as f64).sqrt();
        w[k] = Complex::new(s * a, s * b);
        w[m - k] = w[k].conj();
    }
    FftPlanner::new().plan_fft_forward(m).process(&mut w);
    Ok(w[..n].iter().map(|z| z.re).collect())
}

/// Unit-step fGn via the Durbin–Levinson recursion: sample each value
/// from its exact distribution conditional on all previous ones.
fn fgn_exact(hurst: f64, n: usize, rng: &mut Rng) -> Vec<f64> {
    use rand::Rng as _;
    use rand_distr::StandardNormal;

    let gamma: Vec<f64> = (0..n.max(2)).map(|k| fgn_acvf(hurst, k)).collect();
    let mut out = Vec::with_capacity(n);
    out.push(rng.sample::<f64, _>(StandardNormal)); // gamma[0] = 1
    let mut phi: Vec<f64> = Vec::with_capacity(n);
    let mut prev: Vec<f64> = Vec::with_capacity(n);
    let mut var = 1.0;
    for k in 1..n {
        // Partial autocorrelation at lag k.
        let mut num = gamma[k];
        for j in 1..k {
            num -= prev[j - 1] * gamma[k - j];
        }
        let a = num / var;
        phi.clear();
        for j in 1..k {
            phi.push(prev[j - 1] - a * prev[k - 1 - j]);
        }
        phi.push(a);
        var *= 1.0 - a * a;
        var = var.max(0.0);
        let mut mean = 0.0;
        for j in 1..=k {
            mean += phi[j - 1] * out[k - j];
        }
        out.push(mean + var.sqrt() * rng.sample::<f64, _>(StandardNormal));
        std::mem::swap(&mut phi, &mut prev);
    }
    out
}

fn fbm_from_fgn(hurst: f64, seed: u64, n_steps: usize, mut fgn: Vec<f64>) -> SamplePath {
    // Scale unit-step noise onto the grid: increments delta^h * G_k, so
    // Var X(t_k) = t_k^{2h} exactly.
    let delta = 1.0 / n_steps as f64;
    let scale = delta.powf(hurst);
    for g in fgn.iter_mut() {
        *g *= scale;
    }
    SamplePath::from_increments(ProcessSpec::Fbm { hurst }, seed, delta, vec![fgn])
}

/// Sample a fractional Brownian path on `[0, 1]` by circulant
/// embedding, falling back to the exact sampler when the embedding is
/// rejected and the size makes O(n^2) tolerable.
pub fn gen_fbm(n_steps: usize, hurst: f64, seed: u64) -> Result<SamplePath> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be positive"));
    }
    ProcessSpec::Fbm { hurst }.validate()?;
    let mut rng = rng_from_seed(seed);
    match fgn_circulant(hurst, n_steps, &mut rng) {
        Ok(fgn) => Ok(fbm_from_fgn(hurst, seed, n_steps, fgn)),
        Err(Error::EmbeddingFailure { .. }) if n_steps <= EXACT_FALLBACK_LIMIT => {
            gen_fbm_exact(n_steps, hurst, seed)
        }
        Err(e) => Err(e),
    }
}

/// Sample a fractional Brownian path with the O(n^2) exact recursion.
pub fn gen_fbm_exact(n_steps: usize, hurst: f64, seed: u64) -> Result<SamplePath> {
    if n_steps == 0 {
        return Err(Error::invalid("n_steps must be positive"));
    }
    ProcessSpec::Fbm { hurst }.validate()?;
    let mut rng = rng_from_seed(seed);
    let fgn = fgn_exact(hurst, n_steps, &mut rng);
    Ok(fbm_from_fgn(hurst, seed, n_steps, fgn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::replica_seed;
    use crate::stats::{ks_critical, ks_statistic, mean, normal_cdf, variance};

    #[test]
    fn acvf_reference_values() {
        // h = 0.5 is white noise: gamma(0) = 1, gamma(k >= 1) = 0.
        assert_eq!(fgn_acvf(0.5, 0), 1.0);
        assert_eq!(fgn_acvf(0.5, 1), 0.0);
        assert_eq!(fgn_acvf(0.5, 5), 0.0);
        // gamma(0) = 1 for every h.
        assert!((fgn_acvf(0.3, 0) - 1.0).abs() < 1e-15);
        assert!((fgn_acvf(0.7, 0) - 1.0).abs() < 1e-15);
        // h > 1/2: positive correlation; h < 1/2: negative at lag 1.
        // gamma(1) = (2^{2h} - 2) / 2.
        assert!((fgn_acvf(0.7, 1) - 0.5 * (2f64.powf(1.4) - 2.0)).abs() < 1e-15);
        assert!(fgn_acvf(0.3, 1) < 0.0);
    }

    #[test]
    fn embedding_accepts_fgn_and_rejects_rigged_sequence() {
        for &h in &[0.1, 0.3, 0.5, 0.7, 0.9] {
            let acvf: Vec<f64> = (0..=256).map(|k| fgn_acvf(h, k)).collect();
            let eigs = embedding_eigenvalues(&acvf).unwrap();
            assert_eq!(eigs.len(), 512);
            assert!(eigs.iter().all(|&l| l >= 0.0));
        }
        // A sequence that is no covariance at all: the circulant row is
        // [1, 0.9, -0.9, 0.9], whose Nyquist eigenvalue (the
        // alternating sum) is 1 - 0.9 - 0.9 - 0.9 = -1.7.
        let bad = vec![1.0, 0.9, -0.9];
        match embedding_eigenvalues(&bad) {
            Err(Error::EmbeddingFailure { min_eigenvalue, .. }) => {
                assert!(min_eigenvalue < 0.0)
            }
            other => panic!("expected embedding failure, got {other:?}"),
        }
    }

    #[test]
    fn fbm_path_shape() {
        let p = gen_fbm(256, 0.7, 11).unwrap();
        assert_eq!(p.n_steps(), 256);
        assert_eq!(p.value(0, 0), 0.0);
        assert_eq!(*p.spec(), ProcessSpec::Fbm { hurst: 0.7 });
        assert_eq!(gen_fbm(256, 0.7, 11).unwrap(), p);
        assert!(gen_fbm(256, 1.0, 11).is_err());
        assert!(gen_fbm(0, 0.5, 11).is_err());
    }

    #[test]
    fn half_hurst_is_standard_brownian() {
        // At h = 0.5 the endpoint is N(0, 1) whatever the sampler.
        let finals: Vec<f64> = (0..4000)
            .map(|r| gen_fbm(64, 0.5, replica_seed(23, r)).unwrap().value(64, 0))
            .collect();
        let d = ks_statistic(&finals, normal_cdf);
        assert!(d < ks_critical(0.01, finals.len()), "KS d = {d}");
    }

    /// The two samplers target the same law; check marginal variance,
    /// a lagged covariance, and the endpoint distribution against both
    /// closed forms and each other.
    #[test]
    fn circulant_matches_exact_sampler() {
        let n = 256;
        let reps = 2000;
        for &h in &[0.3, 0.7] {
            let run = |exact: bool, salt: u64| -> (Vec<f64>, Vec<f64>) {
                let mut finals = Vec::with_capacity(reps);
                let mut quarters = Vec::with_capacity(reps);
                for r in 0..reps {
                    let seed = replica_seed(1000 + salt, r as u64);
                    let p = if exact {
                        gen_fbm_exact(n, h, seed).unwrap()
                    } else {
                        gen_fbm(n, h, seed).unwrap()
                    };
                    finals.push(p.value(n, 0));
                    quarters.push(p.value(n / 4, 0));
                }
                (finals, quarters)
            };
            let (f_fft, q_fft) = run(false, 0);
            let (f_ex, q_ex) = run(true, 1);

            // Var X(1) = 1 exactly; sampling std of the variance over
            // `reps` Gaussians is sqrt(2/(reps-1)).
            let band = 3.0 * (2.0 / (reps as f64 - 1.0)).sqrt();
            for (label, f) in [("fft", &f_fft), ("exact", &f_ex)] {
                let v = variance(f);
                assert!((v - 1.0).abs() < band, "{label} h={h}: var {v}");
                let m = mean(f);
                assert!(m.abs() < 3.0 / (reps as f64).sqrt(), "{label} h={h}: mean {m}");
            }

            // Cov(X(1/4), X(1)) = ((1/4)^{2h} + 1 - (3/4)^{2h}) / 2.
            let cov_true = 0.5 * (0.25f64.powf(2.0 * h) + 1.0 - 0.75f64.powf(2.0 * h));
            for (label, (f, q)) in [("fft", (&f_fft, &q_fft)), ("exact", (&f_ex, &q_ex))] {
                let mf = mean(f);
                let mq = mean(q);
                let cov = f
                    .iter()
                    .zip(q.iter())
                    .map(|(a, b)| (a - mf) * (b - mq))
                    .sum::<f64>()
                    / (reps as f64 - 1.0);
                assert!(
                    (cov - cov_true).abs() < 0.1,
                    "{label} h={h}: cov {cov} vs {cov_true}"
                );
            }

            // Endpoints are N(0, 1) for both samplers.
            for (label, f) in [("fft", &f_fft), ("exact", &f_ex)] {
                let d = ks_statistic(f, normal_cdf);
                assert!(d < ks_critical(0.01, reps), "{label} h={h}: KS d = {d}");
            }
            // And indistinguishable from each other.
            let d = crate::stats::ks_two_sample(&f_fft, &f_ex);
            assert!(
                d < crate::stats::ks_two_sample_critical(0.01, reps, reps),
                "h={h}: two-sample KS d = {d}"
            );
        }
    }

    #[test]
    fn variance_scaling_in_time() {
        // Var X(t) = t^{2h}: check at t = 1/4 for h = 0.3 with a Monte
        // Carlo band. Var of the sample variance of N(0, s^2) samples
        // is 2 s^4 / (reps - 1).
        let h = 0.3;
        let reps = 3000;
        let quarters: Vec<f64> = (0..reps)
            .map(|r| gen_fbm(64, h, replica_seed(77, r)).unwrap().value(16, 0))
            .collect();
        let s2 = 0.25f64.powf(2.0 * h);
        let band = 3.0 * s2 * (2.0 / (reps as f64 - 1.0)).sqrt();
        let v = variance(&quarters);
        assert!((v - s2).abs() < band, "var {v} vs {s2}");
    }
}
