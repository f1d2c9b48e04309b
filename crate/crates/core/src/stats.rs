//! Small statistical toolbox: distribution CDFs, Kolmogorov–Smirnov
//! tests, Wilson confidence intervals and least-squares line fits.

use std::f64::consts::{PI, SQRT_2};

/// Standard normal CDF, accurate to full double precision via `erfc`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / SQRT_2)
}

/// Standard Cauchy CDF.
pub fn cauchy_cdf(x: f64) -> f64 {
    0.5 + x.atan() / PI
}

pub fn mean(xs: &[f64]) -> f64 {
    assert!(!xs.is_empty(), "mean of empty slice");
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Unbiased sample variance.
pub fn variance(xs: &[f64]) -> f64 {
    assert!(xs.len() >= 2, "variance needs at least two samples");
    let m = mean(xs);
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// One-sample Kolmogorov–Smirnov statistic against a reference CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    assert!(!samples.is_empty(), "KS statistic of empty sample");
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).expect("NaN sample"));
    let n = xs.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let hi = (i + 1) as f64 / n - f;
        let lo = f - i as f64 / n;
        d = d.max(hi.max(lo));
    }
    d
}

/// Two-sample Kolmogorov–Smirnov statistic (max ECDF gap).
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS statistic of empty sample");
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(|u, v| u.partial_cmp(v).expect("NaN sample"));
    ys.sort_by(|u, v| u.partial_cmp(v).expect("NaN sample"));
    let (n, m) = (xs.len(), ys.len());
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let t = xs[i].min(ys[j]);
        while i < n && xs[i] <= t {
            i += 1;
        }
        while j < m && ys[j] <= t {
            j += 1;
        }
        let gap = (i as f64 / n as f64 - j as f64 / m as f64).abs();
        d = d.max(gap);
    }
    d
}

/// Asymptotic scale factor c(alpha) with rejection when sqrt(n) D > c.
fn ks_scale(alpha: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0, 1)");
    (-0.5 * (alpha / 2.0).ln()).sqrt()
}

/// Critical value for the one-sample KS statistic at level `alpha`.
pub fn ks_critical(alpha: f64, n: usize) -> f64 {
    ks_scale(alpha) / (n as f64).sqrt()
}

/// Critical value for the two-sample KS statistic at level `alpha`.
pub fn ks_two_sample_critical(alpha: f64, n: usize, m: usize) -> f64 {
    ks_scale(alpha) * ((n + m) as f64 / (n as f64 * m as f64)).sqrt()
}

/// Wilson score interval for a binomial proportion.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "Wilson interval needs at least one trial");
    assert!(successes <= trials);
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Least-squares line fit with the coefficient of determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> LineFit {
    assert_eq!(xs.len(), ys.len(), "mismatched fit inputs");
    assert!(xs.len() >= 2, "line fit needs at least two points");
    let mx = mean(xs);
    let my = mean(ys);
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    assert!(sxx > 0.0, "degenerate fit: all abscissae equal");
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    // syy == 0 means a perfectly horizontal data set: the fit is exact.
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy) / (sxx * syy)
    };
    LineFit {
        slope,
        intercept,
        r_squared,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_cdf_reference_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((normal_cdf(-1.0) - 0.158_655_253_931_457_07).abs() < 1e-15);
        assert!((normal_cdf(1.96) - 0.975_002_104_851_779_5).abs() < 1e-12);
        // Symmetry across several abscissae.
        for &x in &[0.1, 0.7, 1.3, 2.9, 5.0] {
            assert!((normal_cdf(x) + normal_cdf(-x) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn cauchy_cdf_reference_values() {
        assert_eq!(cauchy_cdf(0.0), 0.5);
        assert!((cauchy_cdf(1.0) - 0.75).abs() < 1e-15);
        assert!((cauchy_cdf(-1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn ks_one_sample_by_hand() {
        // ECDF of these points vs U(0,1): largest gap 0.5 at x = 0.5.
        let xs = [0.1, 0.2, 0.3, 0.4, 0.5];
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!((d - 0.5).abs() < 1e-12, "d = {d}");
    }

    #[test]
    fn ks_two_sample_by_hand() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [1.5, 2.5, 3.5, 4.5];
        let d = ks_two_sample(&a, &b);
        assert!((d - 0.25).abs() < 1e-12, "d = {d}");
        // Identical samples never differ.
        assert_eq!(ks_two_sample(&a, &a), 0.0);
    }

    #[test]
    fn ks_critical_value_at_one_percent() {
        // c(0.01) = sqrt(-ln(0.005)/2).
        assert!((ks_scale(0.01) - 1.627_623_630_7).abs() < 1e-9);
        assert!((ks_critical(0.01, 10_000) - 0.016_276_236_3).abs() < 1e-9);
    }

    #[test]
    fn uniform_samples_pass_ks() {
        use rand::Rng as _;
        let mut rng = crate::rng::rng_from_seed(99);
        let xs: Vec<f64> = (0..2000).map(|_| rng.random::<f64>()).collect();
        let d = ks_statistic(&xs, |x| x.clamp(0.0, 1.0));
        assert!(d < ks_critical(0.01, xs.len()), "d = {d}");
    }

    #[test]
    fn wilson_interval_symmetric_at_half() {
        let (lo, hi) = wilson_interval(50, 100, 1.96);
        assert!((lo + hi - 1.0).abs() < 1e-12);
        assert!((lo - 0.403_83).abs() < 5e-4, "lo = {lo}");
        assert!((hi - 0.596_17).abs() < 5e-4, "hi = {hi}");
        // Degenerate counts stay inside [0, 1] and keep a positive width.
        let (lo, hi) = wilson_interval(0, 50, 1.96);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.2);
    }

    #[test]
    fn linear_fit_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let fit = linear_fit(&xs, &ys);
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_fit_r_squared_detects_scatter() {
        let xs = [1.0, 2.0, 3.0, 4.0, 5.0];
        let ys = [1.0, 3.0, 2.0, 5.0, 4.0];
        let fit = linear_fit(&xs, &ys);
        assert!(fit.r_squared < 0.9);
        assert!(fit.r_squared > 0.0);
    }

    #[test]
    fn variance_of_known_sample() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert!((mean(&xs) - 5.0).abs() < 1e-15);
        // Sum of squared deviations is 32; unbiased divisor 7.
        assert!((variance(&xs) - 32.0 / 7.0).abs() < 1e-12);
    }
}
