use std::f64::consts::PI;

use num_complex::Complex64;

use super::gk::{panel, Panel, Rule};
use super::{ContourSpec, QuadResult, Tolerance};
use crate::error::{Error, Result};

/// Declared decay of the integrand along the line: `|f(γ+it)| ≲ C e^{−rate|t|} |t|^power`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    pub rate: f64,
    pub power: f64,
}

impl Envelope {
    pub fn new(rate: f64, power: f64) -> Self {
        Envelope { rate, power }
    }

    fn shape(&self, t: f64) -> f64 {
        (-self.rate * t).exp() * t.max(1.0).powf(self.power)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourOptions {
    pub tol: Tolerance,
    pub envelope: Envelope,
    /// Grow the half height (up to `max_half_height`) until the tail estimate
    /// is below tolerance.
    pub extend: bool,
    pub max_half_height: f64,
    pub max_depth: u32,
}

impl ContourOptions {
    pub fn new(envelope: Envelope) -> Self {
        ContourOptions {
            tol: Tolerance::new(1e-300, 1e-13),
            envelope,
            extend: true,
            max_half_height: 200.0,
            max_depth: 10,
        }
    }

    pub fn with_tol(mut self, abs: f64, rel: f64) -> Self {
        self.tol = Tolerance::new(abs, rel);
        self
    }

    pub fn fixed(mut self) -> Self {
        self.extend = false;
        self
    }
}

struct Segment {
    value: Complex64,
    err: f64,
    abs_integral: f64,
    evals: usize,
    edge: f64,
}

/// Integrates `f(γ+it)` over `t ∈ [a, b]` with uniform GK15 panels, each
/// bisected until its error is a fair share of the target.
fn segment<F>(
    f: &F,
    a: f64,
    b: f64,
    panels: usize,
    target_density: f64,
    depth: u32,
) -> Result<Segment>
where
    F: Fn(f64) -> Complex64,
{
    let w = (b - a) / panels as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut abs_integral = 0.0;
    let mut evals = 0;
    for k in 0..panels {
        let lo = a + w * k as f64;
        let hi = if k + 1 == panels { b } else { lo + w };
        let (p, n) = refine(f, lo, hi, target_density, depth)?;
        value += p.value;
        err += p.err;
        abs_integral += p.abs_integral;
        evals += n;
    }
    let edge = f(a).norm().max(f(b).norm());
    Ok(Segment {
        value,
        err,
        abs_integral,
        evals: evals + 2,
        edge,
    })
}

fn refine<F>(f: &F, a: f64, b: f64, density: f64, depth: u32) -> Result<(Panel, usize)>
where
    F: Fn(f64) -> Complex64,
{
    let p = panel(Rule::Gk15, f, a, b);
    if !p.finite {
        return Err(Error::NonFinite {
            at: format!("t ∈ [{a}, {b}] on the contour"),
        });
    }
    // Bisecting cannot beat the rounding floor of the rule.
    let at_floor = p.err <= 64.0 * f64::EPSILON * p.abs_integral;
    if p.err <= density * (b - a) || at_floor || depth == 0 {
        return Ok((p, 15));
    }
    let m = 0.5 * (a + b);
    let (l, nl) = refine(f, a, m, density, depth - 1)?;
    let (r, nr) = refine(f, m, b, density, depth - 1)?;
    Ok((
        Panel {
            value: l.value + r.value,
            err: l.err + r.err,
            abs_integral: l.abs_integral + r.abs_integral,
            finite: true,
        },
        15 + nl + nr,
    ))
}

/// `(1/2π) ∫_{−T}^{T} f(γ+it) dt`, i.e. `(1/2πi) ∫ f(s) ds` along the line.
///
/// The tail beyond `T` is estimated from the declared envelope anchored at
/// the sampled edge values; samples past `T` that exceed the envelope by more
/// than three orders of magnitude raise [`Error::TailBound`].
pub fn integrate_contour<F>(
    integrand: F,
    spec: &ContourSpec,
    opts: &ContourOptions,
) -> Result<QuadResult>
where
    F: Fn(Complex64) -> Complex64,
{
    let gamma = spec.abscissa;
    let f = |t: f64| integrand(Complex64::new(gamma, t));
    let env = opts.envelope;
    let density_panels = (spec.nodes / 15).max(4);
    let per_unit = density_panels as f64 / (2.0 * spec.half_height);
    let mut t_max = spec.half_height;

    // Coarse pass to fix the scale of the answer.
    let coarse = segment(&f, -t_max, t_max, density_panels, f64::INFINITY, 0)?;
    let scale = coarse.value.norm().max(1e-6 * coarse.abs_integral);
    let target = opts.tol.target(scale);
    let density = 0.25 * target / (2.0 * t_max);

    let main = segment(&f, -t_max, t_max, density_panels, density, opts.max_depth)?;
    let mut value = main.value;
    let mut err = main.err;
    let mut evals = coarse.evals + main.evals;
    let mut edge = main.edge;
    loop {
        let tail =
            2.0 * edge * tail_integral(&env, t_max) / env.shape(t_max).max(f64::MIN_POSITIVE);
        if tail <= 0.5 * target || !opts.extend || t_max >= opts.max_half_height {
            check_envelope(&f, &env, t_max, edge)?;
            err += tail;
            break;
        }
        let new_t = (t_max * 1.5).min(opts.max_half_height);
        let n = ((new_t - t_max) * per_unit).ceil().max(2.0) as usize;
        let up = segment(&f, t_max, new_t, n, density, opts.max_depth)?;
        let down = segment(&f, -new_t, -t_max, n, density, opts.max_depth)?;
        value += up.value + down.value;
        err += up.err + down.err;
        evals += up.evals + down.evals;
        edge = f(new_t).norm().max(f(-new_t).norm());
        t_max = new_t;
    }
    let norm = 1.0 / (2.0 * PI);
    Ok(QuadResult {
        value: value * norm,
        err_estimate: err * norm,
        evaluations: evals,
    })
}

/// `∫_T^∞ e^{−rate t} t^power dt`, bounded crudely for power > 0.
fn tail_integral(env: &Envelope, t: f64) -> f64 {
    let base = env.shape(t) / env.rate;
    if env.power > 0.0 {
        base * (1.0 + env.power / (env.rate * t.max(1.0))).min(10.0)
    } else {
        base
    }
}

fn check_envelope<F>(f: &F, env: &Envelope, t: f64, edge: f64) -> Result<()>
where
    F: Fn(f64) -> Complex64,
{
    if edge == 0.0 {
        return Ok(());
    }
    // Anchor generously: oscillating integrands can have small edge samples.
    let anchor = edge.max(1e-300);
    for factor in [1.1, 1.3] {
        let ts = t * factor;
        let bound = anchor * env.shape(ts) / env.shape(t) * 1e3 + 1e-300;
        let sampled = f(ts).norm().max(f(-ts).norm());
        if sampled > bound && sampled > 1e-200 {
            return Err(Error::TailBound {
                sampled,
                envelope: bound,
                t: ts,
            });
        }
    }
    Ok(())
}
