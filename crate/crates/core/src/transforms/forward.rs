use std::cell::Cell;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::function::SampledFunction;
use super::{check_grid, Route, TransformResult};
use crate::error::{Error, Result};
use crate::kernel::{mb_log_weight, mb_spec, phi_direct, TransformParameters};
use crate::quadrature::{
    integrate_contour, integrate_halfline, ContourOptions, ContourSpec, EndpointSingularity,
    Envelope, HalflineOptions,
};
use crate::specfun::gamma::{beta, log_gamma};

/// Relative target of the kernel quadratures.
const FORWARD_REL_TOL: f64 = 1e-12;

fn singularity(alpha: f64) -> EndpointSingularity {
    if alpha == 0.0 {
        EndpointSingularity::None
    } else {
        EndpointSingularity::Algebraic(alpha)
    }
}

/// Runs `f` with a slot for the first error raised inside a quadrature
/// closure, and returns that error in preference to the quadrature's own.
pub(crate) fn guarded<T>(run: impl FnOnce(&Cell<Option<Error>>) -> Result<T>) -> Result<T> {
    let slot = Cell::new(None);
    let r = run(&slot);
    match slot.take() {
        Some(e) => Err(e),
        None => r,
    }
}

pub(crate) fn record<T: Default>(slot: &Cell<Option<Error>>, r: Result<T>) -> T {
    match r {
        Ok(v) => v,
        Err(e) => {
            let prev = slot.take();
            slot.set(Some(prev.unwrap_or(e)));
            T::default()
        }
    }
}

/// `F(τ) = ∫₀^∞ Φ(x, τ) f(x) dx` by adaptive quadrature of the direct kernel.
///
/// The kernel behaves like `x^{−μ}` at the origin and like `x^{−1/2}` at
/// infinity; failure of the tail to settle is reported as non-convergence.
pub fn forward_f(
    f: &SampledFunction,
    p: &TransformParameters,
    taus: &[f64],
) -> Result<TransformResult> {
    check_grid(taus, "τ")?;
    let alpha = -p.mu + f.leading_power();
    let opts = HalflineOptions::default()
        .with_tol(1e-300, FORWARD_REL_TOL)
        .with_singularity(singularity(alpha));
    let mut out = TransformResult::new(*p, Route::KernelQuadrature, taus.len());
    for &tau in taus {
        let r = guarded(|slot| {
            integrate_halfline(
                |x| {
                    let fx = f.eval(x);
                    if fx == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let phi = record(slot, phi_direct(x, tau, p).map(|k| k.value));
                    Complex64::new(phi * fx, 0.0)
                },
                f.decay_hint(),
                &opts,
            )
        })?;
        out.push(tau, r.value.re, r.err_estimate);
    }
    Ok(out)
}

/// `F(τ)` from the line integral
///
/// ```text
/// (1/2πi) ∫ Γ(1−s+iτ)Γ(1−s−iτ)Γ(1/2−s)Γ(s−μ) / (Γ(1−s)Γ(1−s−μ)) f*(1−s) ds.
/// ```
pub fn forward_f_contour(
    f: &SampledFunction,
    p: &TransformParameters,
    taus: &[f64],
    spec: &ContourSpec,
) -> Result<TransformResult> {
    check_grid(taus, "τ")?;
    spec.validate(p.mu, 0.5)?;
    if f.mellin_image().is_none() {
        return Err(Error::Capability(
            "the contour form of F needs an analytic Mellin image".into(),
        ));
    }
    let mut out = TransformResult::new(*p, Route::Contour, taus.len());
    let opts = ContourOptions::new(Envelope::new(PI, 0.0)).with_tol(1e-300, 1e-13);
    for &tau in taus {
        let r = guarded(|slot| {
            integrate_contour(
                |s| {
                    let w = record(slot, mb_log_weight(s, tau, p.mu));
                    let img = record(slot, f.image_at(1.0 - s));
                    w.exp() * img
                },
                &mb_spec(spec, tau),
                &opts,
            )
        })?;
        out.push(tau, r.value.re, r.err_estimate + r.value.im.abs());
    }
    Ok(out)
}

/// `G(x) = ∫₀^∞ Φ(x, τ) g(τ) dτ`.
pub fn forward_g(
    g: &SampledFunction,
    p: &TransformParameters,
    xs: &[f64],
) -> Result<TransformResult> {
    check_grid(xs, "x")?;
    if let Some(bad) = xs.iter().find(|&&x| !(x > 0.0)) {
        return Err(Error::domain(
            "forward_g",
            format!("needs x > 0, got {bad}"),
        ));
    }
    let opts = HalflineOptions::default().with_tol(1e-300, FORWARD_REL_TOL);
    let mut out = TransformResult::new(*p, Route::KernelQuadrature, xs.len());
    for &x in xs {
        let r = guarded(|slot| {
            integrate_halfline(
                |tau| {
                    let gt = g.eval(tau);
                    if gt == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    Complex64::new(
                        record(slot, phi_direct(x, tau, p).map(|k| k.value)) * gt,
                        0.0,
                    )
                },
                g.decay_hint(),
                &opts,
            )
        })?;
        out.push(x, r.value.re, r.err_estimate);
    }
    Ok(out)
}

/// `c₀ = √π ∫₀^∞ g(τ)/cosh(πτ) dτ`, the coefficient of the leading
/// behaviour `G(x) ~ c₀ x^{−1/2}` at infinity.
pub fn g_leading_coefficient(g: &SampledFunction) -> Result<f64> {
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-13);
    let r = integrate_halfline(
        |t| Complex64::new(g.eval(t) / (PI * t).cosh(), 0.0),
        g.decay_hint().max(PI),
        &opts,
    )?;
    Ok(PI.sqrt() * r.value.re)
}

/// The constant
///
/// ```text
/// C_{μ,ν} = 2^{−2ν}/(π√π) · B(1−ν, 1−ν) · ∫ |Γ(3/2−s)Γ(1/2−s)Γ(s−μ)/Γ(1−s−μ)| |ds|
/// ```
/// over the line `Re s = ν`.
pub fn norm_constant(p: &TransformParameters, nu: f64) -> Result<f64> {
    if !(nu > p.mu && nu < 0.5) {
        return Err(Error::domain(
            "norm_constant",
            format!("ν = {nu} outside ({}, 1/2)", p.mu),
        ));
    }
    let mu = p.mu;
    let spec = ContourSpec::new(nu).with_height(20.0);
    let opts = ContourOptions::new(Envelope::new(PI, 0.0)).with_tol(1e-300, 1e-12);
    let line = guarded(|slot| {
        integrate_contour(
            |s| {
                let l = record(
                    slot,
                    (|| {
                        Ok(
                            log_gamma(1.5 - s)? + log_gamma(0.5 - s)? + log_gamma(s - mu)?
                                - log_gamma(1.0 - s - mu)?,
                        )
                    })(),
                );
                Complex64::new(l.re.exp(), 0.0)
            },
            &spec,
            &opts,
        )
    })?;
    // integrate_contour divides by 2π.
    let abs_integral = 2.0 * PI * line.value.re;
    Ok(2f64.powf(-2.0 * nu) / (PI * PI.sqrt()) * beta(1.0 - nu, 1.0 - nu)? * abs_integral)
}

/// `∫₀^∞ |f(x)| x^{power} dx`; `power = −ν` gives `‖f‖_{1−ν,1}`.
pub fn weighted_l1_norm(f: &SampledFunction, power: f64) -> Result<f64> {
    let alpha = f.leading_power() + power;
    if !(alpha > -1.0) {
        return Err(Error::domain(
            "weighted_l1_norm",
            format!("weight x^{power} not integrable at 0"),
        ));
    }
    let opts = HalflineOptions::default()
        .with_tol(1e-300, 1e-12)
        .with_singularity(singularity(alpha));
    let r = integrate_halfline(
        |x| {
            Complex64::new(
                f.eval(x).abs() * if power == 0.0 { 1.0 } else { x.powf(power) },
                0.0,
            )
        },
        f.decay_hint(),
        &opts,
    )?;
    Ok(r.value.re)
}

/// Measured side of a norm inequality against its bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub measured: f64,
    pub bound: f64,
    /// `1 − measured / bound`; positive when the inequality holds.
    pub margin: f64,
}

impl BoundCheck {
    fn new(measured: f64, bound: f64) -> Self {
        BoundCheck {
            measured,
            bound,
            margin: 1.0 - measured / bound,
        }
    }

    pub fn holds(&self) -> bool {
        self.measured < self.bound
    }
}

/// `sup_τ |F(τ)| ≤ C_{μ,ν} ‖f‖_{1−ν,1}`, the supremum taken over `taus`.
pub fn bound_f(
    f: &SampledFunction,
    p: &TransformParameters,
    nu: f64,
    taus: &[f64],
) -> Result<BoundCheck> {
    let c = norm_constant(p, nu)?;
    let norm = weighted_l1_norm(f, -nu)?;
    let ff = forward_f(f, p, taus)?;
    let sup = ff.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(BoundCheck::new(sup, c * norm))
}

/// `sup_x |x^ν G(x)| ≤ C_{μ,ν} ‖g‖₁`, the supremum taken over `xs`.
pub fn bound_g(
    g: &SampledFunction,
    p: &TransformParameters,
    nu: f64,
    xs: &[f64],
) -> Result<BoundCheck> {
    let c = norm_constant(p, nu)?;
    let norm = weighted_l1_norm(g, 0.0)?;
    let gg = forward_g(g, p, xs)?;
    let sup = gg
        .abscissas
        .iter()
        .zip(&gg.values)
        .fold(0.0f64, |m, (x, v)| m.max((x.powf(nu) * v).abs()));
    Ok(BoundCheck::new(sup, c * norm))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64) -> TransformParameters {
        TransformParameters::new(mu).unwrap()
    }

    #[test]
    fn direct_and_contour_agree() {
        for (mu, f) in [
            (-0.5, SampledFunction::exp_decay(1.0).unwrap()),
            (-1.25, SampledFunction::power_exp(2.0, 0.5).unwrap()),
            (0.2, SampledFunction::exp_decay(0.5).unwrap()),
        ] {
            let p = params(mu);
            let taus = [0.0, 0.7, 2.0];
            let a = forward_f(&f, &p, &taus).unwrap();
            let b =
                forward_f_contour(&f, &p, &taus, &ContourSpec::new(p.default_abscissa())).unwrap();
            for (i, tau) in taus.iter().enumerate() {
                let rel = (a.values[i] - b.values[i]).abs() / b.values[i].abs();
                assert!(
                    rel < 1e-7,
                    "μ={mu} τ={tau}: {} vs {}",
                    a.values[i],
                    b.values[i]
                );
            }
        }
    }

    #[test]
    fn linear_in_f() {
        let p = params(-0.5);
        let f = SampledFunction::exp_decay(1.0).unwrap();
        let a = forward_f(&f, &p, &[1.0]).unwrap().values[0];
        let b = forward_f(&f.scaled(-3.5), &p, &[1.0]).unwrap().values[0];
        assert!((b + 3.5 * a).abs() <= 4.0 * f64::EPSILON * b.abs());
        let g = SampledFunction::gauss_even_tau(1.0).unwrap();
        let a = forward_g(&g, &p, &[2.0]).unwrap().values[0];
        let b = forward_g(&g.scaled(2.0), &p, &[2.0]).unwrap().values[0];
        assert!((b - 2.0 * a).abs() <= 4.0 * f64::EPSILON * b.abs());
    }

    #[test]
    fn f_decays_in_tau() {
        let p = params(-0.5);
        let f = SampledFunction::exp_decay(1.0).unwrap();
        let r = forward_f(&f, &p, &[0.0, 1.0, 2.0, 3.0, 4.0]).unwrap();
        assert!(r.values.windows(2).all(|w| w[1].abs() < w[0].abs()));
        // F falls like e^{−πτ}; the ratio crosses 1e-3 just above τ = 3.
        assert!(r.values[3].abs() > 1e-3 * r.values[0]);
        assert!(r.values[4].abs() < 1e-3 * r.values[0]);
    }

    #[test]
    fn norm_constant_grows_towards_half() {
        let p = params(-0.5);
        let c: Vec<f64> = [0.25, 0.4, 0.45]
            .iter()
            .map(|&nu| norm_constant(&p, nu).unwrap())
            .collect();
        assert!(c.iter().all(|v| v.is_finite() && *v > 0.0));
        assert!(c[0] < c[1] && c[1] < c[2], "{c:?}");
        assert!(norm_constant(&p, 0.6).is_err());
    }

    #[test]
    fn bounds_hold() {
        let p = params(-0.5);
        let f = SampledFunction::exp_decay(1.0).unwrap();
        let b = bound_f(&f, &p, 0.25, &[0.0, 0.5, 1.0, 3.0]).unwrap();
        assert!(b.holds() && b.margin > 0.0, "{b:?}");
        let g = SampledFunction::gauss_even_tau(1.0).unwrap();
        let b = bound_g(&g, &p, 0.25, &[0.5, 1.0, 4.0]).unwrap();
        assert!(b.holds(), "{b:?}");
    }

    #[test]
    fn leading_coefficient_matches_tail() {
        let p = params(-0.5);
        let g = SampledFunction::gauss_even_tau(1.0).unwrap();
        let c0 = g_leading_coefficient(&g).unwrap();
        let x = 1e6;
        let v = forward_g(&g, &p, &[x]).unwrap().values[0];
        assert!(
            (v * x.sqrt() / c0 - 1.0).abs() < 1e-4,
            "{} vs {c0}",
            v * x.sqrt()
        );
    }
}
