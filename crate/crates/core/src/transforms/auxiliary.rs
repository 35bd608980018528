use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::forward::{forward_f, guarded, record};
use super::function::{MellinImage, SampledFunction};
use crate::error::{Error, Result};
use crate::kernel::TransformParameters;
use crate::quadrature::{
    integrate_contour, integrate_halfline, ContourOptions, ContourSpec, EndpointSingularity,
    Envelope, HalflineOptions,
};
use crate::specfun::bessel::{bessel_k_imag, bessel_ki_product};
use crate::specfun::gamma::{gamma, gamma_pair, log_gamma, recip_gamma_real};
use crate::specfun::hyper::hyp_pfq;
use crate::specfun::legendre::legendre_p;
use crate::specfun::{c64, real, SeriesControl};

/// The two independent evaluations offered by the dual-route kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TwoRoute {
    /// The defining Mellin–Barnes line integral.
    Contour,
    /// The hypergeometric combination obtained by summing residues.
    ClosedForm,
}

/// `pFq(a; b; x)` after cancelling upper parameters against equal lower ones.
pub(crate) fn pfq(a: &[Complex64], b: &[Complex64], x: f64) -> Result<Complex64> {
    let mut a: Vec<Complex64> = a.to_vec();
    let mut b: Vec<Complex64> = b.to_vec();
    let mut i = 0;
    while i < a.len() {
        if let Some(j) = b
            .iter()
            .position(|&bj| (bj - a[i]).norm() <= 1e-14 * (1.0 + bj.norm()))
        {
            a.swap_remove(i);
            b.swap_remove(j);
        } else {
            i += 1;
        }
    }
    Ok(hyp_pfq(&a, &b, x, &SeriesControl::default())?.value)
}

fn check_non_integer(mu: f64, what: &'static str) -> Result<()> {
    if mu == mu.round() {
        return Err(Error::pole(what, format!("integer order μ = {mu}")));
    }
    Ok(())
}

/// `τ / sinh(πτ)`, continuous at the origin.
fn tau_over_sinh(tau: f64) -> f64 {
    if tau.abs() < 1e-8 {
        1.0 / PI
    } else {
        tau / (PI * tau).sinh()
    }
}

/// Line integral of `exp(log_weight(s)) x^{−s}`, real part and error.
fn line_value<W>(
    log_weight: W,
    x: f64,
    spec: &ContourSpec,
    envelope: Envelope,
) -> Result<(f64, f64)>
where
    W: Fn(Complex64) -> Result<Complex64>,
{
    let ln_x = x.ln();
    let opts = ContourOptions::new(envelope).with_tol(1e-300, 1e-13);
    let r = guarded(|slot| {
        integrate_contour(
            |s| (record(slot, log_weight(s)) - s * ln_x).exp(),
            spec,
            &opts,
        )
    })?;
    Ok((r.value.re, r.err_estimate + r.value.im.abs()))
}

fn image_rate(f: &SampledFunction) -> Result<f64> {
    match f.mellin_image() {
        Some(MellinImage::GammaPower { .. }) => Ok(PI / 2.0),
        Some(MellinImage::HalfGaussian { .. }) => Ok(PI / 4.0),
        None => Err(Error::Capability(
            "φ needs an analytic Mellin image of f on a vertical line".into(),
        )),
    }
}

/// The auxiliary function
///
/// ```text
/// φ(x) = (1/2πi) ∫ Γ(s−μ)Γ(s)Γ(1/2−s) / (Γ(s−1/2)Γ(1−s)Γ(1−s−μ)) f*(1−s) x^{−s} ds
/// ```
/// on the line `Re s = spec.abscissa ∈ (max(0, μ), 1/2)`.
pub fn phi_aux(
    f: &SampledFunction,
    p: &TransformParameters,
    spec: &ContourSpec,
    x: f64,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("phi_aux", format!("needs x > 0, got {x}")));
    }
    spec.validate(p.mu.max(0.0), 0.5)?;
    let rate = image_rate(f)?;
    let mu = p.mu;
    let weight = |s: Complex64| -> Result<Complex64> {
        let k = log_gamma(s - mu)? + log_gamma(s)? + log_gamma(0.5 - s)?
            - log_gamma(s - 0.5)?
            - log_gamma(1.0 - s)?
            - log_gamma(1.0 - s - mu)?;
        Ok(k + f.image_at(1.0 - s)?.ln())
    };
    Ok(line_value(weight, x, spec, Envelope::new(rate, 1.0))?.0)
}

/// Default line for [`phi_aux`]: the middle of `(max(0, μ), 1/2)`.
pub fn phi_abscissa(p: &TransformParameters) -> f64 {
    0.5 * (p.mu.max(0.0) + 0.5)
}

/// The Lebedev form of F: the Bessel-product integral against φ, and the
/// pole term picked up when the line of the F contour is moved across
/// `s = 1/2` to where the Parseval pairing with the Bessel product holds,
///
/// ```text
/// F(τ) = √π/cosh(πτ) ∫₀^∞ K_{iτ}(√x)[I_{iτ}(√x) + I_{−iτ}(√x)] φ(x) dx + √π f*(1/2)/cosh(πτ).
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LebedevForm {
    pub integral: f64,
    pub pole_term: f64,
}

impl LebedevForm {
    pub fn total(&self) -> f64 {
        self.integral + self.pole_term
    }
}

pub fn lebedev_form(
    f: &SampledFunction,
    p: &TransformParameters,
    spec: &ContourSpec,
    tau: f64,
) -> Result<LebedevForm> {
    let alpha = -p.mu.max(0.0);
    let opts = HalflineOptions::default()
        .with_tol(1e-300, 1e-10)
        .with_singularity(if alpha == 0.0 {
            EndpointSingularity::None
        } else {
            EndpointSingularity::Algebraic(alpha)
        });
    let r = guarded(|slot| {
        integrate_halfline(
            |x| {
                let k = record(slot, bessel_ki_product(tau, x.sqrt()));
                let phi = record(slot, phi_aux(f, p, spec, x));
                real(2.0 * k * phi)
            },
            0.0,
            &opts,
        )
    })?;
    let c = PI.sqrt() / (PI * tau).cosh();
    Ok(LebedevForm {
        integral: c * r.value.re,
        pole_term: c * f.image_at(real(0.5))?.re,
    })
}

/// Both sides of the antiderivative identity for φ,
///
/// ```text
/// ∫_x^∞ φ(y) dy = 2/(π²√π) ∫₀^∞ τ sinh(2πτ) K²_{iτ}(√x) F(τ) dτ,
/// ```
/// with the right side truncated at increasing heights.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AntiderivativeCheck {
    pub x: f64,
    pub lhs: f64,
    /// `(τ_max, partial integral)` pairs.
    pub partial_rhs: Vec<(f64, f64)>,
    /// Largest `|τ sinh(2πτ) K²_{iτ}(√x) F(τ)|` seen on the last stretch,
    /// relative to `|lhs|`.
    pub tail_ratio: f64,
    /// True when the partial integrals fail to settle: the integrand does not
    /// decay because `F` falls off only like `e^{−πτ}`.
    pub diverged: bool,
}

pub fn antiderivative_check(
    f: &SampledFunction,
    p: &TransformParameters,
    spec: &ContourSpec,
    x: f64,
    tau_max: f64,
) -> Result<AntiderivativeCheck> {
    if !(x > 0.0) || !(tau_max > 0.0) {
        return Err(Error::domain(
            "antiderivative_check",
            format!("needs x > 0 and τ_max > 0, got {x}, {tau_max}"),
        ));
    }
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-9);
    let lhs = guarded(|slot| {
        integrate_halfline(
            |t| real(record(slot, phi_aux(f, p, spec, x + t))),
            0.0,
            &opts,
        )
    })?
    .value
    .re;

    // Composite Gauss–Legendre on unit panels, the τ-grid shared by all heights.
    let (nodes, weights) = gauss_legendre_8();
    let panels = tau_max.ceil() as usize;
    let mut taus = Vec::with_capacity(8 * panels);
    let mut ws = Vec::with_capacity(8 * panels);
    for k in 0..panels {
        let lo = k as f64 * tau_max / panels as f64;
        let h = tau_max / panels as f64;
        for (n, w) in nodes.iter().zip(&weights) {
            taus.push(lo + 0.5 * h * (1.0 + n));
            ws.push(0.5 * h * w);
        }
    }
    let ft = forward_f(f, p, &taus)?;
    let y = x.sqrt();
    let mut acc = 0.0;
    let mut partial = Vec::new();
    let mut last_stretch = 0.0f64;
    for (i, (&tau, &w)) in taus.iter().zip(&ws).enumerate() {
        let k = bessel_k_imag(tau, y)?;
        let v = tau * (2.0 * PI * tau).sinh() * k * k * ft.values[i];
        acc += w * v;
        if tau > tau_max - 1.0 {
            last_stretch = last_stretch.max(v.abs());
        }
        if (i + 1) % 8 == 0 {
            partial.push((
                taus[i].ceil().min(tau_max),
                2.0 / (PI * PI * PI.sqrt()) * acc,
            ));
        }
    }
    let scale = 2.0 / (PI * PI * PI.sqrt());
    let tail_ratio = scale * last_stretch / lhs.abs().max(f64::MIN_POSITIVE);
    let n = partial.len();
    let spread = if n >= 3 {
        partial[n - 3..]
            .iter()
            .map(|v| v.1)
            .fold(f64::NEG_INFINITY, f64::max)
            - partial[n - 3..]
                .iter()
                .map(|v| v.1)
                .fold(f64::INFINITY, f64::min)
    } else {
        f64::INFINITY
    };
    let diverged = tail_ratio > 1e-6 || spread > 1e-6 * lhs.abs();
    Ok(AntiderivativeCheck {
        x,
        lhs,
        partial_rhs: partial,
        tail_ratio,
        diverged,
    })
}

fn gauss_legendre_8() -> ([f64; 8], [f64; 8]) {
    let n = [
        -0.960_289_856_497_536_2,
        -0.796_666_477_413_626_7,
        -0.525_532_409_916_329,
        -0.183_434_642_495_649_8,
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_2,
    ];
    let w = [
        0.101_228_536_290_376_26,
        0.222_381_034_453_374_47,
        0.313_706_645_877_887_3,
        0.362_683_783_378_362,
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_47,
        0.101_228_536_290_376_26,
    ];
    (n, w)
}

/// Admissible lines for the h and S contours: `Re s` must clear `1/4`
/// (resp. `0`) on the left and `min(−μ, 1)` on the right.
fn kernel_window(p: &TransformParameters, left: f64, what: &'static str) -> Result<(f64, f64)> {
    check_non_integer(p.mu, what)?;
    let right = (-p.mu).min(1.0);
    if !(right > left) {
        return Err(Error::domain(
            what,
            format!("empty contour window ({left}, {right}) for μ = {}", p.mu),
        ));
    }
    Ok((left, right))
}

/// The function
///
/// ```text
/// h(x) = (1/2πi) ∫ Γ(s+1/2)Γ(1−s)Γ(−s−μ) / (Γ(s+1−μ)Γ(−1/2−s)) x^{−s} ds
/// ```
/// on `1/4 < Re s < min(−μ, 1)`, or its two-term ₂F₂ closed form.
pub fn h_function(x: f64, p: &TransformParameters, route: TwoRoute) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain("h_function", format!("needs x > 0, got {x}")));
    }
    let mu = p.mu;
    match route {
        TwoRoute::Contour => {
            let (lo, hi) = kernel_window(p, 0.25, "h_function")?;
            let spec = ContourSpec::new(0.5 * (lo + hi));
            let w = |s: Complex64| -> Result<Complex64> {
                Ok(
                    log_gamma(s + 0.5)? + log_gamma(1.0 - s)? + log_gamma(-s - mu)?
                        - log_gamma(s + 1.0 - mu)?
                        - log_gamma(-0.5 - s)?,
                )
            };
            Ok(line_value(w, x, &spec, Envelope::new(PI / 2.0, 1.0))?.0)
        }
        TwoRoute::ClosedForm => {
            check_non_integer(mu, "h_function")?;
            let z = -1.0 / x;
            let t1 = 3.0 * gamma(-1.0 - mu)? / (8.0 * x * gamma(2.0 - mu)?)
                * pfq(
                    &[real(1.5), real(2.5)],
                    &[real(2.0 + mu), real(2.0 - mu)],
                    z,
                )?
                .re;
            let c2 = PI.sqrt()
                * gamma(1.0 + mu)?
                * recip_gamma_real(mu - 0.5)
                * recip_gamma_real(1.0 - mu);
            let t2 = if c2 == 0.0 {
                0.0
            } else {
                (4.0 * x).powf(mu)
                    * c2
                    * pfq(
                        &[real(0.5 - mu), real(1.5 - mu)],
                        &[real(-mu), real(1.0 - 2.0 * mu)],
                        z,
                    )?
                    .re
            };
            Ok(t1 + t2)
        }
    }
}

/// Leading large-x behaviour of h: both ₂F₂ factors replaced by 1.
pub fn h_leading(x: f64, p: &TransformParameters) -> Result<f64> {
    let mu = p.mu;
    check_non_integer(mu, "h_leading")?;
    Ok(3.0 * gamma(-1.0 - mu)? / (8.0 * x * gamma(2.0 - mu)?)
        + (4.0 * x).powf(mu)
            * PI.sqrt()
            * gamma(1.0 + mu)?
            * recip_gamma_real(mu - 0.5)
            * recip_gamma_real(1.0 - mu))
}

/// The inversion kernel
///
/// ```text
/// S(x, τ) = (1/2πi) ∫ Γ(s+iτ)Γ(s−iτ)Γ(1−s)Γ(−s−μ) / (Γ(s+1−μ)Γ(−1/2−s)) x^{−s} ds
/// ```
/// on `0 < Re s < min(−μ, 1)`, or its two-term ₃F₂ closed form.
pub fn inversion_kernel_s(
    x: f64,
    tau: f64,
    p: &TransformParameters,
    route: TwoRoute,
) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "inversion_kernel_s",
            format!("needs x > 0, got {x}"),
        ));
    }
    let mu = p.mu;
    let (lo, hi) = kernel_window(p, 0.0, "inversion_kernel_s")?;
    match route {
        TwoRoute::Contour => {
            let spec = ContourSpec::new(0.5 * (lo + hi)).with_height(tau.abs() + 14.0);
            let it = c64(0.0, tau);
            let w = |s: Complex64| -> Result<Complex64> {
                Ok(log_gamma(s + it)?
                    + log_gamma(s - it)?
                    + log_gamma(1.0 - s)?
                    + log_gamma(-s - mu)?
                    - log_gamma(s + 1.0 - mu)?
                    - log_gamma(-0.5 - s)?)
            };
            Ok(line_value(w, x, &spec, Envelope::new(PI, 1.0))?.0)
        }
        TwoRoute::ClosedForm => {
            let z = -1.0 / x;
            let it = c64(0.0, tau);
            let t1 = 3.0 * PI.sqrt() * tau_over_sinh(tau) * gamma(-1.0 - mu)?
                / (4.0 * x * gamma(2.0 - mu)?)
                * pfq(
                    &[1.0 + it, 1.0 - it, real(2.5)],
                    &[real(2.0 + mu), real(2.0 - mu)],
                    z,
                )?
                .re;
            let c2 = PI.sqrt()
                * gamma(1.0 + mu)?
                * gamma_pair(-mu, tau)?
                * recip_gamma_real(1.0 - mu)
                * recip_gamma_real(mu - 0.5)
                * recip_gamma_real(0.5 - mu);
            let t2 = if c2 == 0.0 {
                0.0
            } else {
                (4.0 * x).powf(mu)
                    * c2
                    * pfq(
                        &[-mu - it, -mu + it, real(1.5 - mu)],
                        &[real(-mu), real(1.0 - 2.0 * mu)],
                        z,
                    )?
                    .re
            };
            Ok(t1 + t2)
        }
    }
}

/// `∫_{1/x}^∞ S(y, τ) dy/y` in closed form (a ₄F₃ and a ₃F₂ in `−x`).
pub fn integrated_s(x: f64, tau: f64, p: &TransformParameters) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "integrated_s",
            format!("needs x > 0, got {x}"),
        ));
    }
    let mu = p.mu;
    kernel_window(p, 0.0, "integrated_s")?;
    let it = c64(0.0, tau);
    let t1 = 3.0 * x * PI.sqrt() * tau_over_sinh(tau) * gamma(-1.0 - mu)?
        / (4.0 * gamma(2.0 - mu)?)
        * pfq(
            &[1.0 + it, 1.0 - it, real(2.5), real(1.0)],
            &[real(2.0 + mu), real(2.0 - mu), real(2.0)],
            -x,
        )?
        .re;
    let c2 = PI.sqrt()
        * gamma(mu)?
        * gamma_pair(-mu, tau)?
        * recip_gamma_real(1.0 - mu)
        * recip_gamma_real(mu - 0.5)
        * recip_gamma_real(0.5 - mu);
    let t2 = if c2 == 0.0 {
        0.0
    } else {
        (4.0 / x).powf(mu)
            * c2
            * pfq(
                &[-mu - it, -mu + it, real(1.5 - mu)],
                &[real(1.0 - mu), real(1.0 - 2.0 * mu)],
                -x,
            )?
            .re
    };
    Ok(t1 - t2)
}

/// `∫_{1/x}^∞ S(y, τ) dy/y` by quadrature of the closed-form S, written as
/// `∫₀^x S(1/t, τ) dt/t`.
pub fn integrated_s_quadrature(x: f64, tau: f64, p: &TransformParameters) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::domain(
            "integrated_s_quadrature",
            format!("needs x > 0, got {x}"),
        ));
    }
    // With t = x e^{−v}: ∫₀^∞ S(e^v / x, τ) dv; S(y) decays like y^{max(μ, −1)}.
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-10);
    let r = guarded(|slot| {
        integrate_halfline(
            |v| {
                real(record(
                    slot,
                    inversion_kernel_s(v.exp() / x, tau, p, TwoRoute::ClosedForm),
                ))
            },
            (-p.mu).min(1.0),
            &opts,
        )
    })?;
    Ok(r.value.re)
}

/// Logarithm of `U*(s) = Γ(s)Γ(s−μ)Γ(1/2−s) / (Γ(s−1/2)Γ(1−s−μ))`.
fn u_log_image(s: Complex64, mu: f64) -> Result<Complex64> {
    Ok(log_gamma(s)? + log_gamma(s - mu)? + log_gamma(0.5 - s)?
        - log_gamma(s - 0.5)?
        - log_gamma(1.0 - s - mu)?)
}

/// `U*(s) = Γ(s)Γ(s−μ)Γ(1/2−s) / (Γ(s−1/2)Γ(1−s−μ))`, the Mellin transform
/// of `U_μ`, continued through the removable point `s = 1/2` (where it
/// equals `−√π`).
pub fn u_mu_mellin(s: Complex64, mu: f64) -> Result<Complex64> {
    if (s - 0.5).norm() < 1e-12 {
        return Ok(real(-PI.sqrt()));
    }
    Ok(u_log_image(s, mu)?.exp())
}

/// `U_μ(y) = (1/2πi) ∫ U*(s) y^{−s} ds`, or its two-term ₂F₂ closed form.
pub fn u_mu(y: f64, p: &TransformParameters, route: TwoRoute) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain("u_mu", format!("needs y > 0, got {y}")));
    }
    let mu = p.mu;
    check_non_integer(mu, "u_mu")?;
    match route {
        TwoRoute::Contour => {
            let spec = ContourSpec::new(0.5 * (mu.max(0.0) + 0.5));
            Ok(line_value(
                |s| u_log_image(s, mu),
                y,
                &spec,
                Envelope::new(PI / 2.0, 1.0),
            )?
            .0)
        }
        TwoRoute::ClosedForm => {
            let t1 = pfq(
                &[real(0.5), real(1.5)],
                &[real(1.0 + mu), real(1.0 - mu)],
                -y,
            )?
            .re / (2.0 * mu);
            let c2 =
                PI.sqrt() * gamma(mu)? * recip_gamma_real(mu - 0.5) * recip_gamma_real(1.0 - mu);
            let t2 = if c2 == 0.0 {
                0.0
            } else {
                (y / 4.0).powf(-mu)
                    * c2
                    * pfq(
                        &[real(0.5 - mu), real(1.5 - mu)],
                        &[real(1.0 - mu), real(1.0 - 2.0 * mu)],
                        -y,
                    )?
                    .re
            };
            Ok(t1 + t2)
        }
    }
}

/// Leading small-y behaviour of `U_μ`: both ₂F₂ factors replaced by 1.
pub fn u_mu_leading(y: f64, p: &TransformParameters) -> Result<f64> {
    let mu = p.mu;
    check_non_integer(mu, "u_mu_leading")?;
    Ok(1.0 / (2.0 * mu)
        + (y / 4.0).powf(-mu)
            * PI.sqrt()
            * gamma(mu)?
            * recip_gamma_real(mu - 0.5)
            * recip_gamma_real(1.0 - mu))
}

/// Both sides of the Legendre-square identity
///
/// ```text
/// ₃F₂(−μ−iτ, −μ+iτ, 1/2−μ; 1−μ, 1−2μ; −x)
///   = (x/4)^μ Γ²(1−μ)/(2iτ) [(iτ+μ)(P^μ_{−iτ})² + (iτ−μ)(P^μ_{iτ})²](√(1+x)).
/// ```
pub fn legendre_square_identity(x: f64, tau: f64, p: &TransformParameters) -> Result<(f64, f64)> {
    if !(x > 0.0) || tau == 0.0 {
        return Err(Error::domain(
            "legendre_square_identity",
            format!("needs x > 0 and τ ≠ 0, got {x}, {tau}"),
        ));
    }
    let mu = p.mu;
    let it = c64(0.0, tau);
    let lhs = pfq(
        &[-mu - it, -mu + it, real(0.5 - mu)],
        &[real(1.0 - mu), real(1.0 - 2.0 * mu)],
        -x,
    )?
    .re;
    let z = (1.0 + x).sqrt();
    let pm = legendre_p(mu, -it, z)?;
    let pp = legendre_p(mu, it, z)?;
    let g = gamma(1.0 - mu)?;
    let bracket = (it + mu) * pm * pm + (it - mu) * pp * pp;
    let rhs = (x / 4.0).powf(mu) * g * g * bracket / (2.0 * it);
    Ok((lhs, rhs.re))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64) -> TransformParameters {
        TransformParameters::new(mu).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn h_routes_agree() {
        for (x, mu) in [(2.0, -0.5), (0.7, -1.25), (5.0, -0.8)] {
            let p = params(mu);
            let a = h_function(x, &p, TwoRoute::Contour).unwrap();
            let b = h_function(x, &p, TwoRoute::ClosedForm).unwrap();
            assert!(rel(a, b) < 1e-8, "(x,μ)=({x},{mu}): {a} vs {b}");
        }
    }

    #[test]
    fn h_mpmath_value() {
        // mpmath, 20 digits: the line integral at x = 0.7, μ = −1.25.
        let v = h_function(0.7, &params(-1.25), TwoRoute::ClosedForm).unwrap();
        assert!(rel(v, -0.162_008_197_959_597_86) < 1e-12, "{v}");
    }

    #[test]
    fn h_at_half_is_elementary() {
        // μ = −1/2 collapses the closed form to −e^{−1/x}/x.
        let p = params(-0.5);
        for x in [0.3, 1.0, 4.0] {
            let v = h_function(x, &p, TwoRoute::ClosedForm).unwrap();
            assert!(rel(v, -(-1.0 / x).exp() / x) < 1e-13);
        }
    }

    #[test]
    fn h_large_x() {
        for mu in [-0.5, -1.25, -0.8] {
            let p = params(mu);
            let v = h_function(50.0, &p, TwoRoute::ClosedForm).unwrap();
            let lead = h_leading(50.0, &p).unwrap();
            assert!(rel(lead, v) < 0.05, "μ={mu}: {v} vs {lead}");
        }
    }

    #[test]
    fn s_routes_agree() {
        for (x, tau, mu) in [(2.0, 1.0, -0.5), (5.0, 0.5, -1.25), (0.6, 1.5, -0.7)] {
            let p = params(mu);
            let a = inversion_kernel_s(x, tau, &p, TwoRoute::Contour).unwrap();
            let b = inversion_kernel_s(x, tau, &p, TwoRoute::ClosedForm).unwrap();
            assert!(
                (a - b).abs() < 1e-6 * b.abs().max(1e-3),
                "({x},{tau},{mu}): {a} vs {b}"
            );
        }
        let v = inversion_kernel_s(5.0, 0.5, &params(-1.25), TwoRoute::ClosedForm).unwrap();
        assert!(rel(v, 0.028_934_364_240_129_91) < 1e-11, "{v}");
    }

    #[test]
    fn s_even_in_tau() {
        let p = params(-0.5);
        for route in [TwoRoute::Contour, TwoRoute::ClosedForm] {
            let a = inversion_kernel_s(2.0, 1.3, &p, route).unwrap();
            let b = inversion_kernel_s(2.0, -1.3, &p, route).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs());
        }
    }

    #[test]
    fn integrated_s_against_quadrature() {
        for (x, tau, mu) in [(1.0, 1.0, -0.5), (0.5, 2.0, -0.5), (1.0, 0.5, -1.25)] {
            let p = params(mu);
            let a = integrated_s(x, tau, &p).unwrap();
            let b = integrated_s_quadrature(x, tau, &p).unwrap();
            assert!(
                (a - b).abs() < 1e-5 * a.abs().max(1e-3),
                "({x},{tau},{mu}): {a} vs {b}"
            );
        }
        let v = integrated_s(1.0, 0.5, &params(-1.25)).unwrap();
        assert!(rel(v, 0.087_564_764_545_065_44) < 1e-11, "{v}");
    }

    #[test]
    fn integrated_s_vanishes_at_origin() {
        let p = params(-0.5);
        let small: Vec<f64> = [1e-2, 1e-4, 1e-6]
            .iter()
            .map(|&x| integrated_s(x, 1.0, &p).unwrap().abs())
            .collect();
        assert!(
            small[0] > small[1] && small[1] > small[2] && small[2] < 1e-2,
            "{small:?}"
        );
    }

    #[test]
    fn u_routes_agree() {
        for (y, mu) in [(1.0, -0.5), (3.0, -1.25), (0.4, 0.2)] {
            let p = params(mu);
            let a = u_mu(y, &p, TwoRoute::Contour).unwrap();
            let b = u_mu(y, &p, TwoRoute::ClosedForm).unwrap();
            assert!(rel(a, b) < 1e-8, "(y,μ)=({y},{mu}): {a} vs {b}");
        }
    }

    #[test]
    fn u_small_y() {
        for mu in [-0.5, -1.25, 0.2] {
            let p = params(mu);
            let v = u_mu(1e-3, &p, TwoRoute::ClosedForm).unwrap();
            assert!(rel(u_mu_leading(1e-3, &p).unwrap(), v) < 0.01, "μ={mu}");
        }
    }

    #[test]
    fn u_image_at_half() {
        let a = u_mu_mellin(c64(0.5, 0.0), -0.5).unwrap();
        let b = u_mu_mellin(c64(0.5 + 1e-7, 0.0), -0.5).unwrap();
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn legendre_square_matches_hypergeometric() {
        for (x, tau, mu) in [(1.0, 1.0, -0.5), (0.3, 2.0, -1.25), (4.0, 0.5, -0.8)] {
            let (l, r) = legendre_square_identity(x, tau, &params(mu)).unwrap();
            assert!(rel(r, l) < 1e-8, "({x},{tau},{mu}): {l} vs {r}");
        }
    }

    #[test]
    fn phi_finite_and_decaying() {
        let p = params(-0.5);
        let f = SampledFunction::exp_decay(1.0).unwrap();
        let spec = ContourSpec::new(phi_abscissa(&p));
        let v: Vec<f64> = [0.1, 1.0, 10.0]
            .iter()
            .map(|&x| phi_aux(&f, &p, &spec, x).unwrap())
            .collect();
        assert!(v.iter().all(|a| a.is_finite()));
        assert!(v[2].abs() < v[1].abs() && v[1].abs() < v[0].abs(), "{v:?}");
    }

    #[test]
    fn lebedev_form_matches_forward() {
        let p = params(-0.5);
        let f = SampledFunction::exp_decay(1.0).unwrap();
        let spec = ContourSpec::new(phi_abscissa(&p));
        for tau in [0.5, 1.0] {
            let a = lebedev_form(&f, &p, &spec, tau).unwrap();
            let b = forward_f(&f, &p, &[tau]).unwrap().values[0];
            assert!(rel(a.total(), b) < 1e-5, "τ={tau}: {a:?} vs {b}");
            // The Bessel integral alone misses F by the pole term.
            assert!(rel(a.integral, b) > 0.5);
        }
    }
}
