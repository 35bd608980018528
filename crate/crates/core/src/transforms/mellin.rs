use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::function::SampledFunction;
use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_contour, integrate_halfline, ContourOptions, ContourSpec, EndpointSingularity,
    Envelope, HalflineOptions,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MellinRoute {
    AnalyticImage,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinValue {
    pub value: Complex64,
    pub err_estimate: f64,
    pub route: MellinRoute,
}

/// `f*(s) = ∫₀^∞ f(x) x^{s−1} dx`, from the closed-form image when there is
/// one and by quadrature otherwise.
pub fn mellin_transform(f: &SampledFunction, s: Complex64) -> Result<MellinValue> {
    match f.mellin_image() {
        Some(img) => {
            if !(s.re > img.strip_left()) {
                return Err(Error::domain(
                    "mellin_transform",
                    format!(
                        "Re s = {} is left of the strip Re s > {}",
                        s.re,
                        img.strip_left()
                    ),
                ));
            }
            Ok(MellinValue {
                value: f.image_at(s)?,
                err_estimate: 0.0,
                route: MellinRoute::AnalyticImage,
            })
        }
        None => mellin_transform_quadrature(f, s),
    }
}

/// The defining integral, always by quadrature.
pub fn mellin_transform_quadrature(f: &SampledFunction, s: Complex64) -> Result<MellinValue> {
    let alpha = f.leading_power() + s.re - 1.0;
    if !(alpha > -1.0) {
        return Err(Error::domain(
            "mellin_transform",
            format!(
                "∫ f(x) x^(s−1) dx diverges at the origin for Re s = {}",
                s.re
            ),
        ));
    }
    let opts = HalflineOptions::default()
        .with_tol(1e-300, 1e-12)
        .with_singularity(if alpha == 0.0 {
            EndpointSingularity::None
        } else {
            EndpointSingularity::Algebraic(alpha)
        });
    let w = s - 1.0;
    let r = integrate_halfline(|x| (w * x.ln()).exp() * f.eval(x), f.decay_hint(), &opts)?;
    Ok(MellinValue {
        value: r.value,
        err_estimate: r.err_estimate,
        route: MellinRoute::Quadrature,
    })
}

/// `(1/2πi) ∫ image(s) x^{−s} ds` on the line of `spec`; returns the real
/// part and an error estimate that includes the imaginary residue.
pub fn mellin_inverse<F>(
    image: F,
    spec: &ContourSpec,
    x: f64,
    envelope: Envelope,
) -> Result<(f64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    if !(x > 0.0) {
        return Err(Error::domain(
            "mellin_inverse",
            format!("needs x > 0, got {x}"),
        ));
    }
    let ln_x = x.ln();
    let failure = std::cell::Cell::new(None::<Error>);
    let integrand = |s: Complex64| match image(s) {
        Ok(v) => v * (-s * ln_x).exp(),
        Err(e) => {
            failure.set(Some(e));
            Complex64::new(0.0, 0.0)
        }
    };
    let r = integrate_contour(integrand, spec, &ContourOptions::new(envelope));
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = r?;
    Ok((r.value.re, r.err_estimate + r.value.im.abs()))
}

/// Both sides of `∫₀^∞ f(x) g(x) dx = (1/2πi) ∫ f*(s) g*(1−s) ds` on
/// `Re s = abscissa`.
pub fn parseval_check(
    f: &SampledFunction,
    g: &SampledFunction,
    abscissa: f64,
) -> Result<(f64, f64)> {
    let alpha = f.leading_power() + g.leading_power();
    let opts = HalflineOptions::default()
        .with_tol(1e-300, 1e-13)
        .with_singularity(if alpha == 0.0 {
            EndpointSingularity::None
        } else {
            EndpointSingularity::Algebraic(alpha)
        });
    let direct = integrate_halfline(
        |x| Complex64::new(f.eval(x) * g.eval(x), 0.0),
        f.decay_hint() + g.decay_hint(),
        &opts,
    )?
    .value
    .re;
    let (fi, gi) = match (f.mellin_image(), g.mellin_image()) {
        (Some(a), Some(b)) => (a, b),
        _ => {
            return Err(Error::Capability(
                "Parseval check needs analytic images".into(),
            ))
        }
    };
    if !(abscissa > fi.strip_left() && 1.0 - abscissa > gi.strip_left()) {
        return Err(Error::domain(
            "parseval_check",
            format!("line Re s = {abscissa} outside the common strip"),
        ));
    }
    let spec = ContourSpec::new(abscissa).with_height(20.0);
    let failure = std::cell::Cell::new(None::<Error>);
    let integrand = |s: Complex64| match (f.image_at(s), g.image_at(1.0 - s)) {
        (Ok(a), Ok(b)) => a * b,
        (Err(e), _) | (_, Err(e)) => {
            failure.set(Some(e));
            Complex64::new(0.0, 0.0)
        }
    };
    let opts = ContourOptions::new(Envelope::new(PI / 2.0, 0.0)).with_tol(1e-300, 1e-13);
    let r = integrate_contour(integrand, &spec, &opts);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok((direct, r?.value.re))
}
