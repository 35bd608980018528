use num_complex::Complex64;

use super::gk::{panel, Panel, Rule};
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

/// Behaviour of the integrand at the left endpoint, declared by the caller.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum EndpointSingularity {
    #[default]
    None,
    /// `f(x) ~ x^α` with `α > −1`.
    Algebraic(f64),
    /// `f(x) ~ ln x`.
    Logarithmic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalflineOptions {
    pub tol: Tolerance,
    pub singularity: EndpointSingularity,
    pub max_subdivisions: usize,
    pub max_panels: usize,
}

impl Default for HalflineOptions {
    fn default() -> Self {
        HalflineOptions {
            tol: Tolerance::default(),
            singularity: EndpointSingularity::None,
            max_subdivisions: 200,
            max_panels: 160,
        }
    }
}

impl HalflineOptions {
    pub fn with_tol(mut self, abs: f64, rel: f64) -> Self {
        self.tol = Tolerance::new(abs, rel);
        self
    }

    pub fn with_singularity(mut self, s: EndpointSingularity) -> Self {
        self.singularity = s;
        self
    }
}

struct Adaptive {
    value: Complex64,
    err: f64,
    abs_integral: f64,
    evals: usize,
}

fn non_finite(a: f64, b: f64) -> Error {
    Error::NonFinite {
        at: format!("[{a:e}, {b:e}]"),
    }
}

/// Globally adaptive GK21 on `[a, b]`, bisecting the worst panel.
fn adaptive<F>(f: &F, a: f64, b: f64, tol: Tolerance, max_sub: usize) -> Result<Adaptive>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let first = panel(Rule::Gk21, f, a, b);
    if !first.finite {
        return Err(non_finite(a, b));
    }
    let mut parts: Vec<(f64, f64, Panel)> = vec![(a, b, first)];
    let mut evals = 21;
    loop {
        let value: Complex64 = parts.iter().map(|p| p.2.value).sum();
        let err: f64 = parts.iter().map(|p| p.2.err).sum();
        let abs_integral: f64 = parts.iter().map(|p| p.2.abs_integral).sum();
        let target = tol
            .target(value.norm())
            .max(100.0 * f64::EPSILON * abs_integral);
        if err <= target {
            return Ok(Adaptive {
                value,
                err,
                abs_integral,
                evals,
            });
        }
        if parts.len() >= max_sub {
            return Err(Error::no_conv(
                "adaptive quadrature",
                format!(
                    "[{a:e}, {b:e}] error {err:e} above target {target:e} after {max_sub} panels"
                ),
            ));
        }
        // Deterministic choice: the first panel with maximal error.
        let mut worst = 0;
        for (i, p) in parts.iter().enumerate() {
            if p.2.err > parts[worst].2.err {
                worst = i;
            }
        }
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::no_conv(
                "adaptive quadrature",
                format!("interval collapsed near {lo:e}"),
            ));
        }
        let left = panel(Rule::Gk21, f, lo, mid);
        let right = panel(Rule::Gk21, f, mid, hi);
        evals += 42;
        if !left.finite || !right.finite {
            return Err(non_finite(lo, hi));
        }
        parts.push((lo, mid, left));
        parts.push((mid, hi, right));
    }
}

/// Adaptive quadrature over a finite interval.
pub fn integrate_interval<F>(f: F, a: f64, b: f64, opts: &HalflineOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            err_estimate: 0.0,
            evaluations: 1,
        });
    }
    let r = adaptive(&f, a, b, opts.tol, opts.max_subdivisions)?;
    Ok(QuadResult {
        value: r.value,
        err_estimate: r.err,
        evaluations: r.evals,
    })
}

/// `∫₀^∞ f(x) dx` by geometrically widening panels.
///
/// `decay_hint` is the expected exponential rate of decay of `f` (use `0` for
/// algebraic decay); it only sets the width of the first panel.
pub fn integrate_halfline<F>(f: F, decay_hint: f64, opts: &HalflineOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    let h0 = if decay_hint > 0.0 {
        (1.0 / decay_hint).clamp(1e-2, 10.0)
    } else {
        1.0
    };
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut evals = 0;
    let mut abs_total = 0.0;

    // Leading panel [0, h0], where the declared singularity lives.
    match opts.singularity {
        EndpointSingularity::None => {
            let r = adaptive(&f, 0.0, h0, opts.tol, opts.max_subdivisions)?;
            total += r.value;
            err += r.err;
            abs_total += r.abs_integral;
            evals += r.evals;
        }
        EndpointSingularity::Algebraic(alpha) => {
            if !(alpha > -1.0) {
                return Err(Error::domain(
                    "integrate_halfline",
                    format!("non-integrable exponent {alpha}"),
                ));
            }
            // x = h0 t^m makes the integrand behave like t near 0.
            let m = 2.0 / (1.0 + alpha);
            let g = |t: f64| {
                if t <= 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                f(h0 * t.powf(m)) * (h0 * m * t.powf(m - 1.0))
            };
            let r = adaptive(&g, 0.0, 1.0, opts.tol, opts.max_subdivisions)?;
            total += r.value;
            err += r.err;
            abs_total += r.abs_integral;
            evals += r.evals;
        }
        EndpointSingularity::Logarithmic => {
            let mut hi = h0;
            let mut quiet = 0;
            for _ in 0..200 {
                let lo = 0.5 * hi;
                let r = adaptive(&f, lo, hi, opts.tol, opts.max_subdivisions)?;
                total += r.value;
                err += r.err;
                abs_total += r.abs_integral;
                evals += r.evals;
                if r.abs_integral <= 0.01 * opts.tol.target(total.norm()) {
                    quiet += 1;
                    if quiet >= 2 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                hi = lo;
            }
        }
    }

    let mut a = h0;
    let mut quiet = 0;
    for _ in 0..opts.max_panels {
        let b = 2.0 * a;
        let tol = Tolerance {
            abs: opts.tol.abs.max(0.01 * opts.tol.rel * total.norm()),
            rel: opts.tol.rel,
        };
        let r = adaptive(&f, a, b, tol, opts.max_subdivisions)?;
        total += r.value;
        err += r.err;
        abs_total += r.abs_integral;
        evals += r.evals;
        if r.abs_integral <= 0.01 * opts.tol.target(total.norm()) {
            quiet += 1;
            if quiet >= 2 {
                return Ok(QuadResult {
                    value: total,
                    err_estimate: err + r.abs_integral,
                    evaluations: evals,
                });
            }
        } else {
            quiet = 0;
        }
        a = b;
    }
    Err(Error::no_conv(
        "half-line quadrature",
        format!("tail still significant at x = {a:e} (accumulated |f| {abs_total:e})"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re<F: Fn(f64) -> f64>(f: F) -> impl Fn(f64) -> Complex64 {
        move |x| Complex64::new(f(x), 0.0)
    }

    #[test]
    fn exponential() {
        let r = integrate_halfline(re(|x| (-x).exp()), 1.0, &HalflineOptions::default()).unwrap();
        assert!((r.re() - 1.0).abs() < 1e-12);
        assert!(r.evaluations > 0);
    }

    #[test]
    fn gaussian_moment() {
        let r = integrate_halfline(re(|x| x * (-x * x).exp()), 1.0, &HalflineOptions::default())
            .unwrap();
        assert!((r.re() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn inverse_sqrt_endpoint() {
        let opts =
            HalflineOptions::default().with_singularity(EndpointSingularity::Algebraic(-0.5));
        let r = integrate_halfline(re(|x| (-x).exp() / x.sqrt()), 1.0, &opts).unwrap();
        assert!(
            (r.re() - std::f64::consts::PI.sqrt()).abs() < 1e-10,
            "{}",
            r.re()
        );
    }

    #[test]
    fn logarithmic_endpoint() {
        // ∫₀^∞ ln(x) e^{−x} dx = −γ
        let opts = HalflineOptions::default().with_singularity(EndpointSingularity::Logarithmic);
        let r = integrate_halfline(re(|x| x.ln() * (-x).exp()), 1.0, &opts).unwrap();
        assert!(
            (r.re() + 0.577_215_664_901_532_9).abs() < 1e-10,
            "{}",
            r.re()
        );
    }

    #[test]
    fn algebraic_tail() {
        let r = integrate_halfline(
            re(|x| 1.0 / (1.0 + x * x)),
            0.0,
            &HalflineOptions::default(),
        )
        .unwrap();
        assert!(
            (r.re() - std::f64::consts::FRAC_PI_2).abs() < 1e-10,
            "{}",
            r.re()
        );
    }

    #[test]
    fn nan_is_an_error() {
        let r = integrate_halfline(
            re(|x| if x > 3.0 { f64::NAN } else { (-x).exp() }),
            1.0,
            &HalflineOptions::default(),
        );
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn finite_interval() {
        let r = integrate_interval(
            re(|x| x.sin()),
            0.0,
            std::f64::consts::PI,
            &HalflineOptions::default(),
        )
        .unwrap();
        assert!((r.re() - 2.0).abs() < 1e-13);
    }
}
