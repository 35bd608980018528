use std::f64::consts::PI;

use super::config::{GridSpec, Options, Spacing};
use super::output::{Cell, Record, Report};
use super::{CliError, Direction, ExitStatus};
use crate::kernel::{phi_direct, phi_fourier_cosine, phi_mellin_barnes, TransformParameters};
use crate::quadrature::ContourSpec;
use crate::transforms::{
    bound_f, bound_g, forward_f, forward_g, invert_f, invert_g, sample_g, BoundCheck,
    InversionMode, LogGrid, SampledFunction, TransformResult,
};
use crate::wedge::{boundary_check, solve_wedge_with_residuals, WedgeProblem};

pub(super) const KERNEL_X: GridSpec = GridSpec::log(0.25, 4.0, 3);
pub(super) const KERNEL_TAU: GridSpec = GridSpec::log(0.5, 2.0, 3);
const FORWARD_TAU: GridSpec = GridSpec::linear(0.0, 4.0, 9);
const FORWARD_X: GridSpec = GridSpec::log(0.25, 4.0, 5);
const ROUNDTRIP_F_X: GridSpec = GridSpec::log(0.5, 2.0, 3);
const ROUNDTRIP_F_TAU: GridSpec = GridSpec::linear(0.0, 8.0, 161);
const ROUNDTRIP_G_TAU: GridSpec = GridSpec::linear(0.5, 1.5, 3);
const WEDGE_R: GridSpec = GridSpec::log(0.5, 4.0, 4);
pub(super) const DEFAULT_F: &str = "exp_decay(a=1)";
pub(super) const DEFAULT_G: &str = "gauss_even_tau(a=1)";
pub(super) const DEFAULT_NU: f64 = 0.25;

pub(super) type Outcome = Result<(Report, ExitStatus), CliError>;

pub(super) fn params(o: &Options, default_mu: f64) -> Result<TransformParameters, CliError> {
    Ok(TransformParameters::new(o.mu.unwrap_or(default_mu))?)
}

pub(super) fn points(
    grid: Option<GridSpec>,
    default: GridSpec,
    what: &str,
    positive: bool,
) -> Result<(GridSpec, Vec<f64>), CliError> {
    let g = grid.unwrap_or(default);
    if positive && !(g.min > 0.0) {
        return Err(CliError::Config(format!(
            "{what} grid {g} must be positive"
        )));
    }
    Ok((g, g.points()))
}

/// The Mellin–Barnes line: `--nu` (default the middle of (μ, 1/2)) with the
/// contour overrides.
pub(super) fn contour(o: &Options, p: &TransformParameters) -> Result<ContourSpec, CliError> {
    let mut spec = ContourSpec::new(o.nu.unwrap_or(p.default_abscissa()));
    if let Some(h) = o.contour_height {
        spec = spec.with_height(h);
    }
    if let Some(n) = o.contour_nodes {
        spec = spec.with_nodes(n);
    }
    spec.validate(p.mu, 0.5)?;
    Ok(spec)
}

pub(super) fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn common(o: &Options, p: &TransformParameters, tol: f64) -> Record {
    let mut r = Record::new().float("mu", p.mu).float("tol", tol);
    if let Some(c) = &o.config {
        r = r.text("config", c.display().to_string());
    }
    r
}

fn function_label(f: &SampledFunction) -> String {
    f.describe()
}

pub(super) fn kernel(o: &Options) -> Outcome {
    let p = params(o, -0.5)?;
    let tol = o.tol_or(1e-6)?;
    let spec = contour(o, &p)?;
    let (gx, xs) = points(o.grid_x, KERNEL_X, "x", true)?;
    let (gt, taus) = points(o.grid_tau, KERNEL_TAU, "τ", false)?;
    let params = common(o, &p, tol)
        .float("nu", spec.abscissa)
        .float("contour-height", spec.half_height)
        .value("contour-nodes", spec.nodes.into())
        .text("grid-x", gx.to_string())
        .text("grid-tau", gt.to_string());
    let mut report = Report::new(
        "kernel",
        params,
        vec!["x", "tau", "phi_direct", "phi_mb", "phi_fc", "max_rel_diff"],
    );
    let mut worst = 0.0f64;
    for &x in &xs {
        for &tau in &taus {
            let d = phi_direct(x, tau, &p)?.value;
            let m = phi_mellin_barnes(x, tau, &p, &spec)?.value;
            let c = phi_fourier_cosine(x, tau, &p)?.value;
            let diff = rel_diff(d, m).max(rel_diff(d, c)).max(rel_diff(m, c));
            worst = worst.max(diff);
            report.push(vec![
                x.into(),
                tau.into(),
                d.into(),
                m.into(),
                c.into(),
                diff.into(),
            ]);
        }
    }
    report.summary = Record::new().float("max_rel_diff", worst);
    Ok((report, ExitStatus::from_pass(worst <= tol)))
}

fn bound_summary(b: &BoundCheck) -> Record {
    Record::new()
        .float("bound_measured", b.measured)
        .float("bound", b.bound)
        .float("bound_margin", b.margin)
}

fn result_rows(report: &mut Report, r: &TransformResult) {
    for i in 0..r.len() {
        report.push(vec![
            r.abscissas[i].into(),
            r.values[i].into(),
            r.per_point_err[i].into(),
        ]);
    }
}

/// Error estimates above `tol` relative to the value breach.
fn estimates_within(r: &TransformResult, tol: f64) -> bool {
    let scale = r.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    r.per_point_err
        .iter()
        .zip(&r.values)
        .all(|(e, v)| *e <= tol * v.abs().max(1e-300 + 1e-12 * scale))
}

pub(super) fn forward(o: &Options, direction: Direction) -> Outcome {
    let p = params(o, -0.5)?;
    let tol = o.tol_or(1e-6)?;
    let nu = o.nu.unwrap_or(DEFAULT_NU);
    let (f, grid, abscissa) = match direction {
        Direction::F => (
            o.function_or(DEFAULT_F)?,
            points(o.grid_tau, FORWARD_TAU, "τ", false)?,
            "tau",
        ),
        Direction::G => (
            o.function_or(DEFAULT_G)?,
            points(o.grid_x, FORWARD_X, "x", true)?,
            "x",
        ),
    };
    let (spec, pts) = grid;
    let mut params = common(o, &p, tol).text("fn", function_label(&f));
    params = match direction {
        Direction::F => params.text("grid-tau", spec.to_string()),
        Direction::G => params.text("grid-x", spec.to_string()),
    };
    if o.bound {
        params = params.float("nu", nu);
    }
    let result = match direction {
        Direction::F => forward_f(&f, &p, &pts)?,
        Direction::G => forward_g(&f, &p, &pts)?,
    };
    let name = match direction {
        Direction::F => "forward F",
        Direction::G => "forward G",
    };
    let mut report = Report::new(name, params, vec![abscissa, "value", "err_estimate"]);
    result_rows(&mut report, &result);
    let mut pass = estimates_within(&result, tol);
    if o.bound {
        let b = match direction {
            Direction::F => bound_f(&f, &p, nu, &pts)?,
            Direction::G => bound_g(&f, &p, nu, &pts)?,
        };
        pass &= b.holds();
        report.summary = bound_summary(&b);
    }
    Ok((report, ExitStatus::from_pass(pass)))
}

fn roundtrip_rows(report: &mut Report, f: &SampledFunction, xs: &[f64], values: &[f64]) -> f64 {
    let mut worst = 0.0f64;
    for (&x, &v) in xs.iter().zip(values) {
        let want = f.eval(x);
        let err = if want == 0.0 {
            v.abs()
        } else {
            (v - want).abs() / want.abs()
        };
        let err = if err.is_finite() { err } else { f64::INFINITY };
        worst = worst.max(err);
        report.push(vec![x.into(), want.into(), v.into(), err.into()]);
    }
    worst
}

fn warnings_value(w: &[String]) -> serde_json::Value {
    serde_json::Value::Array(w.iter().map(|s| s.as_str().into()).collect())
}

pub(super) fn roundtrip(o: &Options, direction: Direction) -> Outcome {
    let p = params(o, -0.5)?;
    match direction {
        Direction::F => roundtrip_f(o, p),
        Direction::G => roundtrip_g(o, p),
    }
}

fn roundtrip_f(o: &Options, p: TransformParameters) -> Outcome {
    p.require_f_inversion()?;
    let tol = o.tol_or(1e-2)?;
    let f = o.function_or(DEFAULT_F)?;
    let (gx, xs) = points(o.grid_x, ROUNDTRIP_F_X, "x", true)?;
    let (gt, taus) = points(o.grid_tau, ROUNDTRIP_F_TAU, "τ", false)?;
    let samples = forward_f(&f, &p, &taus)?;
    let inv = invert_f(&samples, &p, &xs)?;
    let params = common(o, &p, tol)
        .text("fn", function_label(&f))
        .text("grid-x", gx.to_string())
        .text("grid-tau", gt.to_string());
    let mut report = Report::new(
        "roundtrip F",
        params,
        vec!["x", "input", "reconstruction", "rel_error"],
    );
    let worst = roundtrip_rows(&mut report, &f, &xs, &inv.result.values);
    let max_tail = inv.tail_ratio.iter().fold(0.0f64, |m, v| m.max(*v));
    report.summary = Record::new()
        .float("max_error", worst)
        .float("max_tail_ratio", max_tail)
        .value("warnings", warnings_value(&inv.warnings));
    Ok((report, ExitStatus::from_pass(worst <= tol)))
}

/// The log grid on which G is sampled: `--grid-x` when it is a log grid,
/// the default otherwise.
fn g_sampling(o: &Options) -> Result<LogGrid, CliError> {
    match o.grid_x {
        None => Ok(LogGrid::default()),
        Some(g) if g.spacing == Spacing::Log && g.count >= 64 => Ok(LogGrid {
            t_min: g.min.ln(),
            t_max: g.max.ln(),
            h: (g.max.ln() - g.min.ln()) / (g.count - 1) as f64,
        }),
        Some(g) => Err(CliError::Config(format!(
            "G is sampled on a log grid of at least 64 points; got {g}"
        ))),
    }
}

fn roundtrip_g(o: &Options, p: TransformParameters) -> Outcome {
    p.require_g_inversion()?;
    let tol = o.tol_or(5e-2)?;
    let g = o.function_or(DEFAULT_G)?;
    let (gt, taus) = points(o.grid_tau, ROUNDTRIP_G_TAU, "τ", false)?;
    let grid = g_sampling(o)?;
    let mode = match o.epsilon {
        None => InversionMode::LimitForm,
        Some(e) => InversionMode::Epsilon(e),
    };
    let mut warnings = Vec::new();
    if !g.vanishes_to_second_order() {
        let w = format!(
            "{} does not satisfy g(0) = g'(0) = 0; the inversion hypothesis is violated",
            g.describe()
        );
        log::warn!("{w}");
        warnings.push(w);
    }
    let samples = sample_g(&g, &p, &grid)?;
    let inv = invert_g(&samples, &p, &taus, mode)?;
    warnings.extend(inv.warnings.iter().cloned());
    let params = common(o, &p, tol)
        .text("fn", function_label(&g))
        .text("grid-tau", gt.to_string())
        .float("sampling-t-min", grid.t_min)
        .float("sampling-t-max", grid.t_max)
        .float("sampling-h", grid.h)
        .opt_float("epsilon", o.epsilon);
    let mut report = Report::new(
        "roundtrip G",
        params,
        vec!["tau", "input", "reconstruction", "rel_error"],
    );
    let worst = roundtrip_rows(&mut report, &g, &taus, &inv.result.values);
    let max_tail = inv.tail_ratio.iter().fold(0.0f64, |m, v| m.max(*v));
    report.summary = Record::new()
        .float("max_error", worst)
        .float("max_tail_ratio", max_tail)
        .value("warnings", warnings_value(&warnings));
    Ok((report, ExitStatus::from_pass(worst <= tol)))
}

pub(super) fn wedge_problem(o: &Options) -> Result<WedgeProblem, CliError> {
    let p = params(o, 0.25)?;
    let g = o.function_or(DEFAULT_G)?;
    Ok(WedgeProblem::new(o.beta.unwrap_or(PI), p, g)?)
}

pub(super) fn wedge(o: &Options) -> Outcome {
    let prob = wedge_problem(o)?;
    let tol = o.tol_or(1e-5)?;
    let (gr, rs) = points(o.grid_x, WEDGE_R, "r", true)?;
    let (gth, thetas) = points(
        o.grid_theta,
        GridSpec::linear(0.0, prob.beta, 5),
        "θ",
        false,
    )?;
    if gth.min < 0.0 || gth.max > prob.beta {
        return Err(CliError::Config(format!(
            "θ grid {gth} leaves [0, β = {}]",
            prob.beta
        )));
    }
    let sol = solve_wedge_with_residuals(&prob, &rs, &thetas)?;
    let bc = boundary_check(&prob, &rs)?;
    let params = common(o, &prob.p, tol)
        .float("beta", prob.beta)
        .text("fn", function_label(&prob.g))
        .text("grid-x", gr.to_string())
        .text("grid-theta", gth.to_string());
    let mut report = Report::new("wedge", params, vec!["r", "theta", "u", "residual"]);
    let residuals = sol.residuals.as_ref().expect("residuals requested");
    let mut worst = 0.0f64;
    for (i, &r) in sol.rs.iter().enumerate() {
        for (j, &th) in sol.thetas.iter().enumerate() {
            let res = residuals[i][j];
            worst = worst.max(res);
            report.push(vec![
                r.into(),
                th.into(),
                sol.values[i][j].into(),
                Cell::from(res),
            ]);
        }
    }
    report.summary = Record::new()
        .float("max_residual", worst)
        .float("zero_trace", bc.zero_trace)
        .float("beta_trace_rel", bc.beta_trace_rel);
    let pass = worst <= tol && bc.zero_trace == 0.0 && bc.beta_trace_rel <= 1e-8;
    Ok((report, ExitStatus::from_pass(pass)))
}
