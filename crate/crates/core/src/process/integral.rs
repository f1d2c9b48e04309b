//! Itô integrals of time polynomials against a Wiener path, the
//! integration-by-parts alternative, and quadratic covariation.

use crate::error::{Error, Result};

use super::{Integrand, ProcessSpec, SamplePath};

fn require_scalar_wiener(path: &SamplePath) -> Result<()> {
    if path.dim() != 1 {
        return Err(Error::invalid("integrals act on one-dimensional paths"));
    }
    match path.spec() {
        ProcessSpec::Wiener => Ok(()),
        other => Err(Error::Unsupported(format!(
            "integration requires a wiener base path, got {}",
            other.family_name()
        ))),
    }
}

/// Left-endpoint Itô sums: Y(t_m) = sum_{k<m} f(t_k) (W(t_{k+1}) - W(t_k)).
pub fn ito_integral(f: &Integrand, base: &SamplePath) -> Result<SamplePath> {
    require_scalar_wiener(base)?;
    let w = base.coordinate(0);
    let times = base.times();
    let inc: Vec<f64> = (0..base.n_steps())
        .map(|k| f.eval(times[k]) * (w[k + 1] - w[k]))
        .collect();
    Ok(SamplePath::from_increments(
        ProcessSpec::ItoIntegral {
            integrand: f.clone(),
        },
        base.seed(),
        base.delta(),
        vec![inc],
    ))
}

/// The integration-by-parts form of the same integral:
/// Y(t) = f(t) W(t) - int_0^t W(s) f'(s) ds, with the Riemann term by
/// the trapezoid rule. For smooth f the correction term [f, W] vanishes
/// in the refinement limit, so this converges to [`ito_integral`].
pub fn integral_by_parts(f: &Integrand, base: &SamplePath) -> Result<SamplePath> {
    require_scalar_wiener(base)?;
    let df = f.derivative();
    let w = base.coordinate(0);
    let times = base.times();
    let delta = base.delta();
    let n = base.n_steps();
    let mut values = Vec::with_capacity(n + 1);
    values.push(0.0);
    let mut riemann = 0.0;
    let mut g_prev = w[0] * df.eval(times[0]);
    for k in 1..=n {
        let g = w[k] * df.eval(times[k]);
        riemann += 0.5 * (g_prev + g) * delta;
        g_prev = g;
        values.push(f.eval(times[k]) * w[k] - riemann);
    }
    SamplePath::from_values(
        ProcessSpec::ItoIntegral {
            integrand: f.clone(),
        },
        base.seed(),
        delta,
        vec![values],
    )
}

/// Discrete quadratic covariation [a, b]_t = sum of increment products
/// up to the grid-aligned time `t`. Both paths must share the grid.
pub fn quadratic_covariation(a: &SamplePath, b: &SamplePath, t: f64) -> Result<f64> {
    if a.dim() != 1 || b.dim() != 1 {
        return Err(Error::invalid(
            "quadratic covariation acts on one-dimensional paths",
        ));
    }
    if a.n_steps() != b.n_steps() || (a.delta() - b.delta()).abs() > 1e-12 * a.delta() {
        return Err(Error::invalid("paths live on different grids"));
    }
    if t <= 0.0 {
        return Err(Error::invalid("covariation horizon must be positive"));
    }
    let m = a.index_of_time(t)?;
    let xa = a.coordinate(0);
    let xb = b.coordinate(0);
    let mut acc = 0.0;
    for k in 0..m {
        acc += (xa[k + 1] - xa[k]) * (xb[k + 1] - xb[k]);
    }
    Ok(acc)
}

/// Evaluate a smooth function of time as a path on the same grid as
/// `base`, for covariation against sampled paths.
pub fn time_polynomial_path(f: &Integrand, base: &SamplePath) -> Result<SamplePath> {
    let f0 = f.eval(0.0);
    if f0 != 0.0 {
        // Paths start at the origin; shift by f(0) and tell the caller.
        return Err(Error::invalid(format!(
            "time polynomial must vanish at 0 to form a path (f(0) = {f0}); \
             subtract the constant term first"
        )));
    }
    let values: Vec<f64> = base.times().iter().map(|&t| f.eval(t)).collect();
    SamplePath::from_values(
        ProcessSpec::ItoIntegral {
            integrand: f.clone(),
        },
        base.seed(),
        base.delta(),
        vec![values],
    )
}
