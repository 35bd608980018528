use std::f64::consts::PI;

use num_complex::Complex64;

use super::halfline::{integrate_halfline, integrate_interval, HalflineOptions};
use super::{QuadResult, Tolerance};
use crate::error::{Error, Result};

/// Largest frequency handled in double precision.
pub const MAX_COSINE_FREQUENCY: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineOptions {
    pub tol: Tolerance,
    /// Exponential decay rate of the non-oscillatory factor.
    pub decay_rate: f64,
    pub max_subdivisions: usize,
}

impl CosineOptions {
    pub fn new(decay_rate: f64) -> Self {
        CosineOptions {
            tol: Tolerance::new(1e-300, 1e-12),
            decay_rate,
            max_subdivisions: 200,
        }
    }

    pub fn with_tol(mut self, abs: f64, rel: f64) -> Self {
        self.tol = Tolerance::new(abs, rel);
        self
    }
}

/// `∫₀^∞ cos(τu) f(u) du` for exponentially decaying `f`.
///
/// When `τ` times the effective support is below 20 the plain half-line engine
/// is used; otherwise the integral is split at the zeros of the cosine and the
/// partial sums are accelerated with Wynn's ε-algorithm.
pub fn integrate_cosine<F>(f: F, tau: f64, opts: &CosineOptions) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    let tau = tau.abs();
    if tau > MAX_COSINE_FREQUENCY {
        return Err(Error::Capability(format!(
            "cosine transform frequency {tau} exceeds {MAX_COSINE_FREQUENCY}"
        )));
    }
    if !(opts.decay_rate > 0.0) {
        return Err(Error::InvalidParameter(
            "cosine transform needs a positive decay rate".into(),
        ));
    }
    let support = 37.0 / opts.decay_rate;
    let hopts = HalflineOptions {
        tol: opts.tol,
        max_subdivisions: opts.max_subdivisions,
        ..Default::default()
    };
    if tau * support < 20.0 {
        return integrate_halfline(
            |u| Complex64::new((tau * u).cos() * f(u), 0.0),
            opts.decay_rate,
            &hopts,
        );
    }

    let g = |u: f64| Complex64::new((tau * u).cos() * f(u), 0.0);
    let half = PI / tau;
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut err = 0.0;
    let mut evals = 0;
    let mut lo = 0.0;
    let mut hi = 0.5 * half;
    let mut accelerated = f64::NAN;
    let mut prev_acc = f64::NAN;
    let mut stable = 0;
    for k in 0..4000 {
        let r = integrate_interval(g, lo, hi, &hopts)?;
        sum += r.value.re;
        err += r.err_estimate;
        evals += r.evaluations;
        partial.push(sum);
        if partial.len() >= 3 {
            accelerated = wynn_epsilon(&partial[partial.len().saturating_sub(40)..]);
            let target = opts.tol.target(accelerated.abs());
            if (accelerated - prev_acc).abs() <= target
                && r.value.re.abs() <= 1e3 * target.max(f64::MIN_POSITIVE)
            {
                stable += 1;
                if stable >= 2 {
                    err += (accelerated - prev_acc).abs();
                    return Ok(QuadResult {
                        value: Complex64::new(accelerated, 0.0),
                        err_estimate: err,
                        evaluations: evals,
                    });
                }
            } else {
                stable = 0;
            }
            prev_acc = accelerated;
        }
        // Far beyond the support the remaining terms are negligible.
        if hi > 2.0 * support && r.value.re.abs() <= opts.tol.target(sum.abs()) {
            return Ok(QuadResult {
                value: Complex64::new(sum, 0.0),
                err_estimate: err + r.value.re.abs(),
                evaluations: evals,
            });
        }
        lo = hi;
        hi = (k as f64 + 1.5) * half;
    }
    Err(Error::no_conv(
        "cosine transform",
        format!("partial sums unsettled, last estimate {accelerated:e}"),
    ))
}

/// Wynn's ε-algorithm on the whole sequence, returning the deepest even-column
/// entry.
fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = *s.last().unwrap();
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = cur[i + 1] - cur[i];
            let e = if d == 0.0 {
                // Converged column: propagate.
                return if col % 2 == 1 { cur[i + 1] } else { best };
            } else {
                prev[i + 1] + 1.0 / d
            };
            next.push(e);
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            if let Some(v) = cur.last() {
                if v.is_finite() {
                    best = *v;
                }
            }
        }
        if cur.len() < 2 {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplace_identity() {
        for (tau, want) in [(1.0, 0.5), (3.0, 0.1)] {
            let r = integrate_cosine(|u| (-u).exp(), tau, &CosineOptions::new(1.0)).unwrap();
            assert!((r.re() - want).abs() < 1e-11, "tau={tau}: {}", r.re());
        }
    }

    #[test]
    fn slow_decay_uses_partitioning() {
        // ∫ cos(τu) e^{−au} du = a/(a²+τ²)
        let a = 0.05;
        let tau = 5.0;
        let r = integrate_cosine(|u| (-a * u).exp(), tau, &CosineOptions::new(a)).unwrap();
        let want = a / (a * a + tau * tau);
        assert!((r.re() - want).abs() < 1e-11, "{} vs {want}", r.re());
    }

    #[test]
    fn sech_squared() {
        // ∫₀^∞ cos(τu) sech²(u) du = πτ/(2 sinh(πτ/2)); oracle for τ = 2
        let r =
            integrate_cosine(|u| 1.0 / u.cosh().powi(2), 2.0, &CosineOptions::new(2.0)).unwrap();
        let want = PI * 2.0 / (2.0 * (PI).sinh());
        assert!((r.re() - want).abs() < 1e-11, "{} vs {want}", r.re());
    }

    #[test]
    fn frequency_cap() {
        assert!(matches!(
            integrate_cosine(|u| (-u).exp(), 25.0, &CosineOptions::new(1.0)),
            Err(Error::Capability(_))
        ));
    }

    #[test]
    fn wynn_on_alternating_series() {
        // ln 2 = 1 − 1/2 + 1/3 − …
        let mut s = Vec::new();
        let mut acc = 0.0;
        for k in 1..=15 {
            acc += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            s.push(acc);
        }
        assert!((wynn_epsilon(&s) - 2f64.ln()).abs() < 1e-10);
    }
}
