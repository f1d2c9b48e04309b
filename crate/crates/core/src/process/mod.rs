//! Sample-path generators and stochastic integrals.
//!
//! All generators share one convention: the time horizon is `[0, 1]`,
//! discretised into `n_steps` equal steps of `delta = 1 / n_steps`, and
//! every path starts at the origin. A path stores one value vector per
//! coordinate; graphs and integrals read coordinate 0 unless told
//! otherwise.

mod fbm;
mod integral;
mod stable;
mod wiener;

pub use fbm::{gen_fbm, gen_fbm_exact};
pub use integral::{
    integral_by_parts, ito_integral, quadratic_covariation, time_polynomial_path,
};
pub use stable::gen_stable;
pub use wiener::{gen_bm_d, gen_wiener};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Polynomial integrand `c0 + c1 t + c2 t^2 + ...` for Itô integrals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Integrand {
    coeffs: Vec<f64>,
}

impl Integrand {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("integrand needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("integrand coefficients must be finite"));
        }
        Ok(Integrand { coeffs })
    }

    /// The constant integrand f = 1.
    pub fn one() -> Self {
        Integrand { coeffs: vec![1.0] }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Horner evaluation.
    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    pub fn derivative(&self) -> Integrand {
        if self.coeffs.len() == 1 {
            return Integrand { coeffs: vec![0.0] };
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Integrand { coeffs }
    }

    /// Minimum over a uniform sample of `[0, 1]`; used to validate the
    /// positivity precondition of threading experiments on integrals.
    pub fn min_on_unit_interval(&self, samples: usize) -> f64 {
        assert!(samples >= 2);
        (0..=samples)
            .map(|k| self.eval(k as f64 / samples as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Which process a path was (or should be) sampled from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ProcessSpec {
    /// Standard one-dimensional Wiener process.
    Wiener,
    /// d-dimensional Brownian motion with independent coordinates.
    BrownianD { dim: usize },
    /// Symmetric β-stable Lévy process, characteristic function
    /// exp(-t |θ|^β).
    Stable { beta: f64 },
    /// Fractional Brownian motion with Hurst index h.
    Fbm { hurst: f64 },
    /// Itô integral of a polynomial of time against a Wiener path.
    ItoIntegral { integrand: Integrand },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Wiener => Ok(()),
            ProcessSpec::BrownianD { dim } => {
                if *dim == 0 {
                    Err(Error::invalid("brownian dimension must be at least 1"))
                } else {
                    Ok(())
                }
            }
            ProcessSpec::Stable { beta } => {
                if !(*beta > 0.0 && *beta <= 2.0) {
                    Err(Error::invalid(format!(
                        "stable index beta must lie in (0, 2], got {beta}"
                    )))
                } else {
                    Ok(())
                }
            }
            ProcessSpec::Fbm { hurst } => {
                if !(*hurst > 0.0 && *hurst < 1.0) {
                    Err(Error::invalid(format!(
                        "hurst index must lie in (0, 1), got {hurst}"
                    )))
                } else {
                    Ok(())
                }
            }
            ProcessSpec::ItoIntegral { integrand } => {
                if integrand.coeffs().is_empty() {
                    Err(Error::invalid("empty integrand"))
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Scaling index: a^{-1/beta} X(at) matches X(t) in distribution.
    /// Brownian families scale with β = 2.
    pub fn scaling_index(&self) -> Option<f64> {
        match self {
            ProcessSpec::Wiener | ProcessSpec::BrownianD { .. } => Some(2.0),
            ProcessSpec::Stable { beta } => Some(*beta),
            _ => None,
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            ProcessSpec::Wiener => "wiener",
            ProcessSpec::BrownianD { .. } => "brownian_d",
            ProcessSpec::Stable { .. } => "stable",
            ProcessSpec::Fbm { .. } => "fbm",
            ProcessSpec::ItoIntegral { .. } => "ito_integral",
        }
    }
}

/// Sample one path of `spec` with `n_steps` uniform steps on `[0, 1]`.
///
/// Every family routes through the same seeding scheme, so a given
/// `(spec, n_steps, seed)` triple is reproducible across runs and
/// thread counts. Itô integrals are driven by a Wiener path drawn from
/// the same seed.
pub fn generate(spec: &ProcessSpec, n_steps: usize, seed: u64) -> Result<SamplePath> {
    spec.validate()?;
    match spec {
        ProcessSpec::Wiener => gen_wiener(n_steps, seed),
        ProcessSpec::BrownianD { dim } => gen_bm_d(n_steps, *dim, seed),
        ProcessSpec::Stable { beta } => gen_stable(n_steps, *beta, seed),
        ProcessSpec::Fbm { hurst } => gen_fbm(n_steps, *hurst, seed),
        ProcessSpec::ItoIntegral { integrand } => {
            let base = gen_wiener(n_steps, seed)?;
            ito_integral(integrand, &base)
        }
    }
}

/// A discretised sample path on the uniform grid `t_k = k delta`.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePath {
    times: Vec<f64>,
    /// One vector of length `n_steps + 1` per coordinate.
    values: Vec<Vec<f64>>,
    delta: f64,
    seed: u64,
    spec: ProcessSpec,
}

impl SamplePath {
    /// Build a path by cumulative summation of per-coordinate increments.
    pub(crate) fn from_increments(
        spec: ProcessSpec,
        seed: u64,
        delta: f64,
        increments: Vec<Vec<f64>>,
    ) -> SamplePath {
        let n = increments[0].len();
        let times = (0..=n).map(|k| k as f64 * delta).collect();
        let values = increments
            .into_iter()
            .map(|inc| {
                let mut v = Vec::with_capacity(inc.len() + 1);
                v.push(0.0);
                let mut acc = 0.0;
                for dx in inc {
                    acc += dx;
                    v.push(acc);
                }
                v
            })
            .collect();
        SamplePath {
            times,
            values,
            delta,
            seed,
            spec,
        }
    }

    /// Wrap externally supplied values (loaded from disk, or an injected
    /// deterministic path). Values must start at 0 and sit on a uniform
    /// grid over `[0, n delta]`.
    pub fn from_values(
        spec: ProcessSpec,
        seed: u64,
        delta: f64,
        values: Vec<Vec<f64>>,
    ) -> Result<SamplePath> {
        if values.is_empty() {
            return Err(Error::invalid("path needs at least one coordinate"));
        }
        let n = values[0].len();
        if n < 2 {
            return Err(Error::invalid("path needs at least two samples"));
        }
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::invalid("delta must be positive and finite"));
        }
        for v in &values {
            if v.len() != n {
                return Err(Error::invalid("coordinates have mismatched lengths"));
            }
            if v[0] != 0.0 {
                return Err(Error::invalid("paths start at the origin"));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::invalid("path values must be finite"));
            }
        }
        let times = (0..n).map(|k| k as f64 * delta).collect();
        Ok(SamplePath {
            times,
            values,
            delta,
            seed,
            spec,
        })
    }

    pub fn n_steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn spec(&self) -> &ProcessSpec {
        &self.spec
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn coordinate(&self, c: usize) -> &[f64] {
        &self.values[c]
    }

    pub fn value(&self, k: usize, c: usize) -> f64 {
        self.values[c][k]
    }

    /// Grid index of a time that must sit (up to 1e-9 relative slack) on
    /// the sample grid.
    pub fn index_of_time(&self, t: f64) -> Result<usize> {
        let k = (t / self.delta).round();
        let idx = k as usize;
        if k < 0.0 || idx > self.n_steps() {
            return Err(Error::invalid(format!("time {t} outside [0, {}]", self.horizon())));
        }
        if (t - k * self.delta).abs() > 1e-9 * self.delta.max(t.abs()) {
            return Err(Error::invalid(format!(
                "time {t} is not aligned to the grid with step {}",
                self.delta
            )));
        }
        Ok(idx)
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrand_eval_and_derivative() {
        // f(t) = 1 + t^2: f(0.5) = 1.25, f'(t) = 2t.
        let f = Integrand::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(f.eval(0.5), 1.25);
        let df = f.derivative();
        assert_eq!(df.coeffs(), &[0.0, 2.0]);
        assert_eq!(df.eval(0.5), 1.0);
        // Constant integrand differentiates to zero.
        assert_eq!(Integrand::one().derivative().eval(0.3), 0.0);
        assert!(Integrand::new(vec![]).is_err());
    }

    #[test]
    fn integrand_minimum_scan() {
        // f(t) = 1 - t dips to 0 at the right endpoint.
        let f = Integrand::new(vec![1.0, -1.0]).unwrap();
        assert!((f.min_on_unit_interval(10_000) - 0.0).abs() < 1e-12);
        let g = Integrand::new(vec![1.0, 0.0, 1.0]).unwrap();
        assert_eq!(g.min_on_unit_interval(100), 1.0);
    }

    #[test]
    fn spec_validation() {
        assert!(ProcessSpec::Stable { beta: 2.0 }.validate().is_ok());
        assert!(ProcessSpec::Stable { beta: 0.0 }.validate().is_err());
        assert!(ProcessSpec::Stable { beta: 2.1 }.validate().is_err());
        assert!(ProcessSpec::Fbm { hurst: 0.5 }.validate().is_ok());
        assert!(ProcessSpec::Fbm { hurst: 1.0 }.validate().is_err());
        assert!(ProcessSpec::BrownianD { dim: 0 }.validate().is_err());
    }

    #[test]
    fn spec_serialises_with_family_tag() {
        let s = serde_json::to_string(&ProcessSpec::Fbm { hurst: 0.3 }).unwrap();
        assert_eq!(s, r#"{"family":"fbm","hurst":0.3}"#);
        let back: ProcessSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, ProcessSpec::Fbm { hurst: 0.3 });
    }

    #[test]
    fn from_values_validates() {
        let ok = SamplePath::from_values(
            ProcessSpec::Wiener,
            0,
            0.5,
            vec![vec![0.0, 1.0, 0.5]],
        )
        .unwrap();
        assert_eq!(ok.n_steps(), 2);
        assert_eq!(ok.times(), &[0.0, 0.5, 1.0]);
        assert!(SamplePath::from_values(ProcessSpec::Wiener, 0, 0.5, vec![]).is_err());
        assert!(
            SamplePath::from_values(ProcessSpec::Wiener, 0, 0.5, vec![vec![1.0, 2.0]]).is_err(),
            "must start at the origin"
        );
        assert!(SamplePath::from_values(
            ProcessSpec::Wiener,
            0,
            0.5,
            vec![vec![0.0, f64::NAN]]
        )
        .is_err());
    }

    #[test]
    fn index_of_time_alignment() {
        let p = SamplePath::from_values(
            ProcessSpec::Wiener,
            0,
            0.25,
            vec![vec![0.0, 1.0, 2.0, 3.0, 4.0]],
        )
        .unwrap();
        assert_eq!(p.index_of_time(0.0).unwrap(), 0);
        assert_eq!(p.index_of_time(0.75).unwrap(), 3);
        assert_eq!(p.index_of_time(1.0).unwrap(), 4);
        assert!(p.index_of_time(0.3).is_err());
        assert!(p.index_of_time(1.25).is_err());
    }
}
