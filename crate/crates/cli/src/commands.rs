//! One function per subcommand: resolve settings, run the experiment,
//! write the report plus the resolved `config.json` into the output
//! directory.

use std::fs;
use std::path::PathBuf;

use serde::Serialize;

use pathdim_core::estimators::{
    assouad_profile, box_dimension, empirical_pn, full_window_search, proof_scheme_windows,
    trail_dimension, AssouadPlan, AssouadProfile, DimensionFit, FullWindowHit, PnConfig,
    ScalingRecord, ThreadingReport,
};
use pathdim_core::geometry::{Graph2D, PlaneSet};
use pathdim_core::io::{
    read_json, read_path_csv, write_atomic, write_json, write_path_csv, PathMetadata,
};
use pathdim_core::process::{
    generate, quadratic_covariation, time_polynomial_path, Integrand, ProcessSpec, SamplePath,
};
use pathdim_core::rng::replica_seed;
use pathdim_core::{exec, Error, Result};

use crate::config::{build_spec, parse_list, pick, pick_opt, spec_fields, FileConfig};
use crate::plot::{render, PlotSpec};
use crate::{
    AssouadArgs, BoxdimArgs, CommonArgs, FullwindowArgs, PnArgs, QvArgs, SimulateArgs, TrailArgs,
};

/// Load the config file, set up the worker pool, and create the output
/// directory. Returns the file config, the output directory, and the
/// resolved plot flag.
fn prepare(subcommand: &str, common: &CommonArgs) -> Result<(FileConfig, PathBuf, bool)> {
    let file = match &common.config {
        Some(p) => FileConfig::load(p, subcommand)?,
        None => FileConfig::default(),
    };
    exec::configure_threads(common.threads.unwrap_or(0))?;
    let out = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out).map_err(|e| Error::io(&out, e))?;
    let emit = common.emit_plots || file.emit_plots.unwrap_or(false);
    Ok((file, out, emit))
}

fn resolve_spec(
    common: &CommonArgs,
    file: &FileConfig,
    default_process: &str,
) -> Result<ProcessSpec> {
    let process = pick(&common.process, &file.process, default_process.to_string());
    let integrand: Option<Vec<f64>> = match &common.integrand {
        Some(raw) => Some(parse_list("integrand", raw)?),
        None => file.integrand.clone(),
    };
    build_spec(
        &process,
        pick_opt(&common.hurst, &file.hurst),
        pick_opt(&common.beta, &file.beta),
        pick_opt(&common.dim, &file.dim),
        integrand.as_deref(),
    )
}

/// The sample path an estimator runs on: either freshly generated from
/// the process flags or loaded from a `simulate` output directory.
struct SourcePath {
    path: SamplePath,
    input: Option<PathBuf>,
}

fn resolve_source(
    common: &CommonArgs,
    file: &FileConfig,
    input_flag: &Option<PathBuf>,
    default_process: &str,
    default_steps: usize,
) -> Result<SourcePath> {
    if let Some(dir) = pick_opt(input_flag, &file.input) {
        if common.process.is_some() || common.steps.is_some() || common.seed.is_some() {
            return Err(Error::invalid(
                "--input replaces simulation; drop --process, --steps and --seed",
            ));
        }
        let meta: PathMetadata = read_json(&dir.join("path.json"))?;
        let path = read_path_csv(&dir.join("path.csv"), &meta)?;
        return Ok(SourcePath {
            path,
            input: Some(dir),
        });
    }
    let spec = resolve_spec(common, file, default_process)?;
    let steps = pick(&common.steps, &file.steps, default_steps);
    let seed = pick(&common.seed, &file.seed, 0);
    Ok(SourcePath {
        path: generate(&spec, steps, seed)?,
        input: None,
    })
}

/// Start a resolved config from the path source: either the input
/// directory or the full set of simulation fields.
fn base_config(subcommand: &str, src: &SourcePath, emit_plots: Option<bool>) -> FileConfig {
    let mut cfg = FileConfig {
        subcommand: Some(subcommand.into()),
        emit_plots,
        ..Default::default()
    };
    match &src.input {
        Some(dir) => cfg.input = Some(dir.clone()),
        None => {
            let (process, hurst, beta, dim, integrand) = spec_fields(src.path.spec());
            cfg.process = Some(process);
            cfg.hurst = hurst;
            cfg.beta = beta;
            cfg.dim = dim;
            cfg.integrand = integrand;
            cfg.steps = Some(src.path.n_steps());
            cfg.seed = Some(src.path.seed());
        }
    }
    cfg
}

/// Default dyadic fit range: at most `lo..=hi`, but always leaving two
/// octaves of headroom below the resolution octave, where counts
/// saturate. Explicit flags bypass this entirely.
fn clamp_octaves(resolution: u32, lo: u32, hi: u32) -> (u32, u32) {
    let max = hi.min(resolution.saturating_sub(2));
    let min = lo.min(max.saturating_sub(3));
    (min, max)
}

fn floor_log2(n_steps: usize) -> u32 {
    usize::BITS - 1 - n_steps.max(1).leading_zeros()
}

/// Graphs resolve scales down to the time step `2^-log2(steps)`.
fn default_octaves(n_steps: usize, lo: u32, hi: u32) -> (u32, u32) {
    clamp_octaves(floor_log2(n_steps), lo, hi)
}

/// Trails resolve scales down to the spatial step, which is of order
/// `sqrt(delta)`; below that a sampled polyline reads as a union of
/// one-dimensional segments and undercounts the underlying trail.
fn default_trail_octaves(n_steps: usize, lo: u32, hi: u32) -> (u32, u32) {
    clamp_octaves(floor_log2(n_steps) / 2 + 4, lo, hi)
}

fn log_log_svg(title: &str, fit: &DimensionFit) -> String {
    let xs: Vec<f64> = fit.scales.iter().map(|r| -r.log2()).collect();
    let ys: Vec<f64> = fit.counts.iter().map(|&n| (n as f64).log2()).collect();
    render(&PlotSpec {
        title,
        x_label: "log2(1/r)",
        y_label: "log2 N(r)",
        xs: &xs,
        ys: &ys,
        line: Some((fit.slope, fit.intercept)),
    })
}

pub fn run_simulate(args: &SimulateArgs) -> Result<()> {
    let (file, out, _emit) = prepare("simulate", &args.common)?;
    let spec = resolve_spec(&args.common, &file, "wiener")?;
    let steps = pick(&args.common.steps, &file.steps, 1 << 20);
    let seed = pick(&args.common.seed, &file.seed, 0);
    let path = generate(&spec, steps, seed)?;
    write_path_csv(&path, &out.join("path.csv"))?;
    write_json(&PathMetadata::for_path(&path), &out.join("path.json"))?;
    let (process, hurst, beta, dim, integrand) = spec_fields(&spec);
    let cfg = FileConfig {
        subcommand: Some("simulate".into()),
        process: Some(process),
        hurst,
        beta,
        dim,
        integrand,
        steps: Some(steps),
        seed: Some(seed),
        ..Default::default()
    };
    write_json(&cfg, &out.join("config.json"))?;
    println!(
        "wrote {} ({} steps of {})",
        out.join("path.csv").display(),
        steps,
        spec.family_name()
    );
    Ok(())
}

#[derive(Serialize)]
struct GraphFitReport<'a> {
    process: &'a ProcessSpec,
    n_steps: usize,
    seed: u64,
    coordinate: usize,
    min_octave: u32,
    max_octave: u32,
    fit: &'a DimensionFit,
}

pub fn run_boxdim(args: &BoxdimArgs) -> Result<()> {
    let (file, out, emit) = prepare("boxdim", &args.common)?;
    let src = resolve_source(&args.common, &file, &args.input, "wiener", 1 << 20)?;
    let coordinate = pick(&args.coordinate, &file.coordinate, 0);
    let (dmin, dmax) = default_octaves(src.path.n_steps(), 6, 14);
    let min_octave = pick(&args.min_octave, &file.min_octave, dmin);
    let max_octave = pick(&args.max_octave, &file.max_octave, dmax);
    let graph = Graph2D::from_path(&src.path, coordinate)?;
    let fit = box_dimension(&PlaneSet::Graph(&graph), min_octave..=max_octave)?;
    write_json(
        &GraphFitReport {
            process: src.path.spec(),
            n_steps: src.path.n_steps(),
            seed: src.path.seed(),
            coordinate,
            min_octave,
            max_octave,
            fit: &fit,
        },
        &out.join("boxdim.json"),
    )?;
    if emit {
        write_atomic(
            &out.join("boxdim.svg"),
            log_log_svg("graph box-counting fit", &fit).as_bytes(),
        )?;
    }
    let mut cfg = base_config("boxdim", &src, Some(emit));
    cfg.coordinate = Some(coordinate);
    cfg.min_octave = Some(min_octave);
    cfg.max_octave = Some(max_octave);
    write_json(&cfg, &out.join("config.json"))?;
    println!(
        "boxdim slope {:.4} (r^2 {:.4}) over octaves {}..={}",
        fit.slope, fit.r_squared, min_octave, max_octave
    );
    Ok(())
}

#[derive(Serialize)]
struct TrailReport<'a> {
    process: &'a ProcessSpec,
    n_steps: usize,
    seed: u64,
    min_octave: u32,
    max_octave: u32,
    fit: &'a DimensionFit,
}

pub fn run_trail(args: &TrailArgs) -> Result<()> {
    let (file, out, emit) = prepare("trail", &args.common)?;
    let src = resolve_source(&args.common, &file, &args.input, "bm", 1 << 20)?;
    let (dmin, dmax) = default_trail_octaves(src.path.n_steps(), 5, 12);
    let min_octave = pick(&args.min_octave, &file.min_octave, dmin);
    let max_octave = pick(&args.max_octave, &file.max_octave, dmax);
    let fit = trail_dimension(&src.path, min_octave..=max_octave)?;
    write_json(
        &TrailReport {
            process: src.path.spec(),
            n_steps: src.path.n_steps(),
            seed: src.path.seed(),
            min_octave,
            max_octave,
            fit: &fit,
        },
        &out.join("trail.json"),
    )?;
    if emit {
        write_atomic(
            &out.join("trail.svg"),
            log_log_svg("trail box-counting fit", &fit).as_bytes(),
        )?;
    }
    let mut cfg = base_config("trail", &src, Some(emit));
    cfg.min_octave = Some(min_octave);
    cfg.max_octave = Some(max_octave);
    write_json(&cfg, &out.join("config.json"))?;
    println!(
        "trail slope {:.4} (r^2 {:.4}) over octaves {}..={}",
        fit.slope, fit.r_squared, min_octave, max_octave
    );
    Ok(())
}

#[derive(Serialize)]
struct AssouadReport<'a> {
    process: &'a ProcessSpec,
    n_steps: usize,
    seed: u64,
    coordinate: usize,
    plan: &'a AssouadPlan,
    records: usize,
    max_exponent: f64,
    witness: Option<&'a ScalingRecord>,
}

fn profile_csv(profile: &AssouadProfile) -> String {
    let mut out = String::from("anchor_t,anchor_x,R,r,N,exponent\n");
    for rec in &profile.records {
        out.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{},{:.16e}\n",
            rec.anchor_t, rec.anchor_x, rec.outer, rec.inner, rec.count, rec.exponent
        ));
    }
    out
}

pub fn run_assouad(args: &AssouadArgs) -> Result<()> {
    let (file, out, emit) = prepare("assouad", &args.common)?;
    let src = resolve_source(&args.common, &file, &args.input, "wiener", 1 << 16)?;
    let coordinate = pick(&args.coordinate, &file.coordinate, 0);
    let defaults = AssouadPlan::default();
    let outer_octaves = match &args.outer_octaves {
        Some(raw) => parse_list("outer-octaves", raw)?,
        None => file
            .outer_octaves
            .clone()
            .unwrap_or(defaults.outer_octaves),
    };
    let ratio_octaves = match &args.ratio_octaves {
        Some(raw) => parse_list("ratio-octaves", raw)?,
        None => file
            .ratio_octaves
            .clone()
            .unwrap_or(defaults.ratio_octaves),
    };
    let plan = AssouadPlan {
        outer_octaves,
        ratio_octaves,
        max_anchors: pick(&args.max_anchors, &file.max_anchors, defaults.max_anchors),
        anchor_stride: pick(
            &args.anchor_stride,
            &file.anchor_stride,
            defaults.anchor_stride,
        ),
    };
    let graph = Graph2D::from_path(&src.path, coordinate)?;
    let profile = assouad_profile(&graph, &plan)?;
    write_atomic(
        &out.join("assouad_profile.csv"),
        profile_csv(&profile).as_bytes(),
    )?;
    write_json(
        &AssouadReport {
            process: src.path.spec(),
            n_steps: src.path.n_steps(),
            seed: src.path.seed(),
            coordinate,
            plan: &plan,
            records: profile.records.len(),
            max_exponent: profile.max_exponent,
            witness: profile.witness(),
        },
        &out.join("assouad.json"),
    )?;
    if emit {
        let xs: Vec<f64> = profile.records.iter().map(|r| r.anchor_t).collect();
        let ys: Vec<f64> = profile.records.iter().map(|r| r.exponent).collect();
        let svg = render(&PlotSpec {
            title: "local scaling exponents",
            x_label: "anchor t",
            y_label: "exponent",
            xs: &xs,
            ys: &ys,
            line: None,
        });
        write_atomic(&out.join("assouad.svg"), svg.as_bytes())?;
    }
    let mut cfg = base_config("assouad", &src, Some(emit));
    cfg.coordinate = Some(coordinate);
    cfg.outer_octaves = Some(plan.outer_octaves.clone());
    cfg.ratio_octaves = Some(plan.ratio_octaves.clone());
    cfg.max_anchors = Some(plan.max_anchors);
    cfg.anchor_stride = Some(plan.anchor_stride);
    write_json(&cfg, &out.join("config.json"))?;
    println!(
        "assouad max exponent {:.4} across {} records",
        profile.max_exponent,
        profile.records.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct FullwindowReport<'a> {
    process: &'a ProcessSpec,
    n_steps: usize,
    seed: u64,
    n: usize,
    beta: f64,
    threshold: f64,
    max_level: usize,
    windows_scanned: usize,
    hits: &'a [FullWindowHit],
}

pub fn run_fullwindow(args: &FullwindowArgs) -> Result<()> {
    let (file, out, _emit) = prepare("fullwindow", &args.common)?;
    let src = resolve_source(&args.common, &file, &args.input, "wiener", 1 << 16)?;
    let n = pick(&args.n, &file.n, 2);
    let threshold = pick(&args.threshold, &file.threshold, 1.0);
    let max_level = pick(&args.max_level, &file.max_level, 32);
    let beta = src.path.spec().scaling_index().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} has no scaling index; the window scheme needs wiener, bm or stable",
            src.path.spec().family_name()
        ))
    })?;
    let windows = proof_scheme_windows(&src.path, beta, n, max_level)?;
    let graph = Graph2D::from_path(&src.path, 0)?;
    let hits = full_window_search(&graph, &windows, threshold)?;
    write_json(
        &FullwindowReport {
            process: src.path.spec(),
            n_steps: src.path.n_steps(),
            seed: src.path.seed(),
            n,
            beta,
            threshold,
            max_level,
            windows_scanned: windows.len(),
            hits: &hits,
        },
        &out.join("fullwindow.json"),
    )?;
    let mut cfg = base_config("fullwindow", &src, None);
    cfg.n = Some(n);
    cfg.threshold = Some(threshold);
    cfg.max_level = Some(max_level);
    write_json(&cfg, &out.join("config.json"))?;
    println!(
        "{} of {} windows at or above occupancy {threshold}",
        hits.len(),
        windows.len()
    );
    Ok(())
}

#[derive(Serialize)]
struct PnReport<'a> {
    process: &'a ProcessSpec,
    seed: u64,
    bins: usize,
    #[serde(flatten)]
    report: &'a ThreadingReport,
}

pub fn run_pn(args: &PnArgs) -> Result<()> {
    let (file, out, _emit) = prepare("pn", &args.common)?;
    let spec = resolve_spec(&args.common, &file, "wiener")?;
    let n = pick(&args.n, &file.n, 2);
    let replicas = pick(&args.common.replicas, &file.replicas, 10_000);
    let steps = pick(&args.common.steps, &file.steps, 256);
    let bins = pick(&args.bins, &file.bins, 400);
    let seed = pick(&args.common.seed, &file.seed, 0);
    let cfg = PnConfig {
        n,
        replicas,
        n_steps: steps,
        bins,
    };
    let report = empirical_pn(&spec, &cfg, seed)?;
    write_json(
        &PnReport {
            process: &spec,
            seed,
            bins,
            report: &report,
        },
        &out.join("pn.json"),
    )?;
    let (process, hurst, beta, dim, integrand) = spec_fields(&spec);
    let file_cfg = FileConfig {
        subcommand: Some("pn".into()),
        process: Some(process),
        hurst,
        beta,
        dim,
        integrand,
        steps: Some(steps),
        seed: Some(seed),
        replicas: Some(replicas),
        n: Some(n),
        bins: Some(bins),
        ..Default::default()
    };
    write_json(&file_cfg, &out.join("config.json"))?;
    match report.quadrature_bound {
        Some(bound) => println!(
            "threading frequency {:.6} over {} replicas (quadrature bound {:.6e})",
            report.mc_frequency, replicas, bound
        ),
        None => println!(
            "threading frequency {:.6} over {} replicas",
            report.mc_frequency, replicas
        ),
    }
    Ok(())
}

#[derive(Serialize)]
struct QvReport<'a> {
    process: &'a ProcessSpec,
    n_steps: usize,
    delta: f64,
    t: f64,
    replicas: usize,
    seed: u64,
    /// Integrand as supplied.
    integrand: &'a [f64],
    /// Same polynomial with the constant dropped: covariation reads
    /// increments, so the constant term cannot contribute.
    covariation_integrand: &'a [f64],
    wiener_qv_mean: f64,
    fw_qv_mean_abs: f64,
    ff_qv: f64,
    ff_bound: f64,
    cauchy_schwarz_violations: usize,
}

pub fn run_qv(args: &QvArgs) -> Result<()> {
    let (file, out, _emit) = prepare("qv", &args.common)?;
    let spec = resolve_spec(&args.common, &file, "wiener")?;
    if spec != ProcessSpec::Wiener {
        return Err(Error::Unsupported(
            "qv reports are defined against a wiener base path".into(),
        ));
    }
    let steps = pick(&args.common.steps, &file.steps, 1 << 20);
    let seed = pick(&args.common.seed, &file.seed, 0);
    let replicas = pick(&args.common.replicas, &file.replicas, 100);
    let t = pick(&args.t, &file.t, 1.0);
    let coeffs: Vec<f64> = match &args.common.integrand {
        Some(raw) => parse_list("integrand", raw)?,
        None => file.integrand.clone().unwrap_or(vec![1.0, 0.0, 1.0]),
    };
    // Validate the coefficients exactly as supplied before shifting.
    Integrand::new(coeffs.clone())?;
    let mut shifted = coeffs.clone();
    shifted[0] = 0.0;
    let f0 = Integrand::new(shifted)?;

    // The smooth path and its self-covariation are the same on every
    // replica's grid, so compute them once.
    let grid = generate(&ProcessSpec::Wiener, steps, replica_seed(seed, 0))?;
    let fpath = time_polynomial_path(&f0, &grid)?;
    let ff = quadratic_covariation(&fpath, &fpath, t)?;
    let df = f0.derivative();
    let mut dmax = 0.0f64;
    for k in 0..=1024 {
        let s = t * k as f64 / 1024.0;
        dmax = dmax.max(df.eval(s).abs());
    }
    let ff_bound = dmax * dmax * (t / steps as f64);

    let per_replica: Vec<Result<(f64, f64, bool)>> = exec::map_indexed(replicas, |r| {
        let w = generate(&ProcessSpec::Wiener, steps, replica_seed(seed, r as u64))?;
        let fp = time_polynomial_path(&f0, &w)?;
        let ww = quadratic_covariation(&w, &w, t)?;
        let fw = quadratic_covariation(&fp, &w, t)?;
        let ok = fw.abs() <= (ff * ww).sqrt() * (1.0 + 1e-12);
        Ok((ww, fw, ok))
    });
    let mut ww_sum = 0.0;
    let mut fw_abs_sum = 0.0;
    let mut violations = 0usize;
    for entry in per_replica {
        let (ww, fw, ok) = entry?;
        ww_sum += ww;
        fw_abs_sum += fw.abs();
        violations += usize::from(!ok);
    }
    let report = QvReport {
        process: &spec,
        n_steps: steps,
        delta: 1.0 / steps as f64,
        t,
        replicas,
        seed,
        integrand: &coeffs,
        covariation_integrand: f0.coeffs(),
        wiener_qv_mean: ww_sum / replicas as f64,
        fw_qv_mean_abs: fw_abs_sum / replicas as f64,
        ff_qv: ff,
        ff_bound,
        cauchy_schwarz_violations: violations,
    };
    write_json(&report, &out.join("qv.json"))?;
    let file_cfg = FileConfig {
        subcommand: Some("qv".into()),
        process: Some("wiener".into()),
        integrand: Some(coeffs.clone()),
        steps: Some(steps),
        seed: Some(seed),
        replicas: Some(replicas),
        t: Some(t),
        ..Default::default()
    };
    write_json(&file_cfg, &out.join("config.json"))?;
    println!(
        "mean [W,W]_{t} = {:.6}; mean |[f,W]_{t}| = {:.6e}; {} Cauchy-Schwarz violations",
        report.wiener_qv_mean, report.fw_qv_mean_abs, violations
    );
    Ok(())
}
