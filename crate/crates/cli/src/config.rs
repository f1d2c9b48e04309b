//! Experiment configuration: one flat, fully optional record that is
//! both the `--config` input schema and the `config.json` artifact, so
//! any finished run re-executes from its own output directory.
//!
//! Precedence is fixed: explicit command-line flags beat config-file
//! values beat built-in defaults.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use pathdim_core::io::read_json;
use pathdim_core::process::{Integrand, ProcessSpec};
use pathdim_core::{Error, Result};

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub process: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hurst: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integrand: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_octave: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_octave: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub outer_octaves: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_octaves: Option<Vec<u32>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_anchors: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub anchor_stride: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub emit_plots: Option<bool>,
}

impl FileConfig {
    /// Load a config file and pin it to the invoked subcommand; a file
    /// written by `assouad` must not silently steer a `boxdim` run.
    pub fn load(file: &Path, subcommand: &str) -> Result<FileConfig> {
        let cfg: FileConfig = read_json(file)?;
        if let Some(declared) = &cfg.subcommand {
            if declared != subcommand {
                return Err(Error::invalid(format!(
                    "config file {} describes subcommand {declared:?}, not {subcommand:?}",
                    file.display()
                )));
            }
        }
        Ok(cfg)
    }
}

/// `cli`, else the config-file value, else `default`.
pub fn pick<T: Clone>(cli: &Option<T>, file: &Option<T>, default: T) -> T {
    cli.clone().or_else(|| file.clone()).unwrap_or(default)
}

/// `cli`, else the config-file value.
pub fn pick_opt<T: Clone>(cli: &Option<T>, file: &Option<T>) -> Option<T> {
    cli.clone().or_else(|| file.clone())
}

/// Parse a comma-separated numeric flag such as `--integrand "1,0,1"`.
pub fn parse_list<T: std::str::FromStr>(flag: &str, raw: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(|tok| {
            tok.trim().parse::<T>().map_err(|e| {
                Error::invalid(format!("--{flag}: bad entry {tok:?}: {e}"))
            })
        })
        .collect()
}

/// Assemble and validate a process spec from flat fields, rejecting
/// parameters that do not belong to the chosen family.
pub fn build_spec(
    process: &str,
    hurst: Option<f64>,
    beta: Option<f64>,
    dim: Option<usize>,
    integrand: Option<&[f64]>,
) -> Result<ProcessSpec> {
    let misfit = |flag: &str, unused: bool| -> Result<()> {
        if unused {
            Err(Error::invalid(format!(
                "--{flag} does not apply to process {process:?}"
            )))
        } else {
            Ok(())
        }
    };
    misfit("hurst", hurst.is_some() && process != "fbm")?;
    misfit("beta", beta.is_some() && process != "stable")?;
    misfit("dim", dim.is_some() && process != "bm")?;
    misfit("integrand", integrand.is_some() && process != "ito")?;
    let spec = match process {
        "wiener" => ProcessSpec::Wiener,
        "bm" => ProcessSpec::BrownianD {
            dim: dim.unwrap_or(2),
        },
        "stable" => ProcessSpec::Stable {
            beta: beta.ok_or_else(|| Error::invalid("process stable requires --beta"))?,
        },
        "fbm" => ProcessSpec::Fbm {
            hurst: hurst.ok_or_else(|| Error::invalid("process fbm requires --hurst"))?,
        },
        "ito" => ProcessSpec::ItoIntegral {
            integrand: Integrand::new(
                integrand
                    .ok_or_else(|| Error::invalid("process ito requires --integrand"))?
                    .to_vec(),
            )?,
        },
        other => {
            return Err(Error::invalid(format!(
                "unknown process {other:?}; expected wiener | bm | stable | fbm | ito"
            )))
        }
    };
    spec.validate()?;
    Ok(spec)
}

/// Flatten a validated spec back into the flat config fields, so the
/// persisted `config.json` mirrors the command line exactly.
pub fn spec_fields(
    spec: &ProcessSpec,
) -> (
    String,
    Option<f64>,
    Option<f64>,
    Option<usize>,
    Option<Vec<f64>>,
) {
    match spec {
        ProcessSpec::Wiener => ("wiener".into(), None, None, None, None),
        ProcessSpec::BrownianD { dim } => ("bm".into(), None, None, Some(*dim), None),
        ProcessSpec::Stable { beta } => ("stable".into(), None, Some(*beta), None, None),
        ProcessSpec::Fbm { hurst } => ("fbm".into(), Some(*hurst), None, None, None),
        ProcessSpec::ItoIntegral { integrand } => (
            "ito".into(),
            None,
            None,
            None,
            Some(integrand.coeffs().to_vec()),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence_is_cli_then_file_then_default() {
        assert_eq!(pick(&Some(3), &Some(7), 9), 3);
        assert_eq!(pick(&None, &Some(7), 9), 7);
        assert_eq!(pick::<u32>(&None, &None, 9), 9);
    }

    #[test]
    fn lists_parse_with_trimming_and_report_offenders() {
        let got: Vec<f64> = parse_list("integrand", "1, 0 ,1").unwrap();
        assert_eq!(got, vec![1.0, 0.0, 1.0]);
        let err = parse_list::<f64>("integrand", "1,x").unwrap_err();
        assert!(err.to_string().contains("--integrand"), "{err}");
    }

    #[test]
    fn spec_round_trips_through_flat_fields() {
        for spec in [
            ProcessSpec::Wiener,
            ProcessSpec::BrownianD { dim: 3 },
            ProcessSpec::Stable { beta: 1.5 },
            ProcessSpec::Fbm { hurst: 0.3 },
            ProcessSpec::ItoIntegral {
                integrand: Integrand::new(vec![1.0, 0.0, 1.0]).unwrap(),
            },
        ] {
            let (p, h, b, d, i) = spec_fields(&spec);
            let back = build_spec(&p, h, b, d, i.as_deref()).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn build_spec_rejects_misplaced_parameters() {
        assert!(build_spec("wiener", Some(0.3), None, None, None).is_err());
        assert!(build_spec("fbm", None, None, None, None).is_err());
        assert!(build_spec("stable", None, None, Some(2), None).is_err());
        assert!(build_spec("levy", None, None, None, None).is_err());
    }
}
