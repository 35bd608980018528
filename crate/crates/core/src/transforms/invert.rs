use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use super::auxiliary::{integrated_s, pfq, u_mu, u_mu_mellin, TwoRoute};
use super::forward::{forward_g, g_leading_coefficient, guarded, record};
use super::function::{Interpolation, SampledFunction, Table};
use super::{check_grid, Route, TransformResult};
use crate::error::{Error, Result};
use crate::kernel::TransformParameters;
use crate::quadrature::{
    integrate_contour, integrate_halfline, integrate_interval, ContourOptions, ContourSpec,
    Envelope, HalflineOptions,
};
use crate::specfun::bessel::bessel_k_imag;
use crate::specfun::gamma::{gamma, gamma_pair, log_gamma, recip_gamma, recip_gamma_real};
use crate::specfun::{c64, real};

/// Integrand envelope at the end of the τ-range, relative to the accumulated
/// value, above which the truncation of an inversion integral is flagged.
pub const TAIL_THRESHOLD: f64 = 1e-12;

/// A reconstruction with the diagnostics of its truncation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Inversion {
    pub result: TransformResult,
    /// Per output point: integrand magnitude at the truncation point relative
    /// to the accumulated integral (F inversion), or the share of the
    /// analytic tail in the total (G inversion).
    pub tail_ratio: Vec<f64>,
    pub warnings: Vec<String>,
}

/// The bracket of the F inversion,
///
/// ```text
/// (1/π√π) [Γ(μ)Γ(−μ−iτ)Γ(−μ+iτ) sinh(2πτ) (4/x)^μ / (Γ(1−μ)Γ(μ−1/2)Γ(1/2−μ))
///            · ₃F₂(−μ−iτ, −μ+iτ, 3/2−μ; 1−μ, 1−2μ; −x)
///          − 3xτ cosh(πτ) Γ(−1−μ)/(2Γ(2−μ)) · ₄F₃(1+iτ, 1−iτ, 5/2, 1; 2+μ, 2−μ, 2; −x)] τ,
/// ```
/// so that `f(x) = ∫₀^∞ bracket · F(τ) dτ`.
pub fn f_inversion_kernel(x: f64, tau: f64, p: &TransformParameters) -> Result<f64> {
    let mu = p.mu;
    let it = c64(0.0, tau);
    let c1 = gamma(mu)?
        * gamma_pair(-mu, tau)?
        * recip_gamma_real(1.0 - mu)
        * recip_gamma_real(mu - 0.5)
        * recip_gamma_real(0.5 - mu);
    let t1 = if c1 == 0.0 {
        0.0
    } else {
        c1 * (2.0 * PI * tau).sinh()
            * (4.0 / x).powf(mu)
            * pfq(
                &[-mu - it, -mu + it, real(1.5 - mu)],
                &[real(1.0 - mu), real(1.0 - 2.0 * mu)],
                -x,
            )?
            .re
    };
    let t2 = 3.0 * x * tau * (PI * tau).cosh() * gamma(-1.0 - mu)? / (2.0 * gamma(2.0 - mu)?)
        * pfq(
            &[1.0 + it, 1.0 - it, real(2.5), real(1.0)],
            &[real(2.0 + mu), real(2.0 - mu), real(2.0)],
            -x,
        )?
        .re;
    Ok((t1 - t2) * tau / (PI * PI.sqrt()))
}

/// The same bracket assembled from the integrated kernel,
/// `−τ sinh(2πτ)/π² · ∫_{1/x}^∞ S(y, τ) dy/y`; a consistency check only.
pub fn f_inversion_kernel_via_s(x: f64, tau: f64, p: &TransformParameters) -> Result<f64> {
    Ok(-tau * (2.0 * PI * tau).sinh() / (PI * PI) * integrated_s(x, tau, p)?)
}

/// Reconstructs `f` on `xs` from samples of `F` on an ascending τ-grid
/// starting at 0, interpolated by a natural cubic spline.
///
/// The integrand is monitored at the end of the grid; when it is not below
/// [`TAIL_THRESHOLD`] of the accumulated value the hypothesis that `F`
/// decays fast enough is reported as violated.
pub fn invert_f(
    samples: &TransformResult,
    p: &TransformParameters,
    xs: &[f64],
) -> Result<Inversion> {
    p.require_f_inversion()?;
    check_grid(xs, "x")?;
    samples.validate()?;
    let taus = &samples.abscissas;
    if taus.len() < 4 || taus[0] != 0.0 {
        return Err(Error::InvalidParameter(
            "F samples must start at τ = 0 with at least 4 points".into(),
        ));
    }
    let tau_max = *taus.last().unwrap();
    let spline = SampledFunction::tabulated(Table::new(
        taus.clone(),
        samples.values.clone(),
        Interpolation::Cubic,
    )?);
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-9);
    let mut out = TransformResult::new(*p, Route::InverseF, xs.len());
    let mut tail = Vec::with_capacity(xs.len());
    let mut warnings = Vec::new();
    for &x in xs {
        if !(x > 0.0) {
            return Err(Error::domain("invert_f", format!("needs x > 0, got {x}")));
        }
        let r = guarded(|slot| {
            integrate_interval(
                |t| real(record(slot, f_inversion_kernel(x, t, p)) * spline.eval(t)),
                0.0,
                tau_max,
                &opts,
            )
        })?;
        let end = (f_inversion_kernel(x, tau_max, p)? * samples.values.last().unwrap()).abs();
        let ratio = end / r.value.re.abs().max(f64::MIN_POSITIVE);
        if ratio > TAIL_THRESHOLD {
            warnings.push(format!(
                "x = {x}: integrand at τ = {tau_max} is {ratio:.3e} of the accumulated value; \
                 F does not decay fast enough for the truncated inversion"
            ));
        }
        tail.push(ratio);
        out.push(x, r.value.re, r.err_estimate.max(end));
    }
    for w in &warnings {
        log::warn!("{w}");
    }
    Ok(Inversion {
        result: out,
        tail_ratio: tail,
        warnings,
    })
}

/// Log-uniform grid `u = e^t`, `t ∈ [t_min, t_max]` with step `h`, on which
/// `G` is sampled for its inversion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub h: f64,
}

impl Default for LogGrid {
    fn default() -> Self {
        LogGrid {
            t_min: -30.0,
            t_max: 20.0,
            h: 0.06,
        }
    }
}

impl LogGrid {
    pub fn len(&self) -> usize {
        ((self.t_max - self.t_min) / self.h).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn t(&self, i: usize) -> f64 {
        self.t_min + i as f64 * self.h
    }

    /// Recovers the grid from its abscissas.
    fn infer(us: &[f64]) -> Result<Self> {
        if us.len() < 64 || us.iter().any(|&u| !(u > 0.0)) {
            return Err(Error::InvalidParameter(
                "G samples must lie on a positive log grid of ≥ 64 points".into(),
            ));
        }
        let t_min = us[0].ln();
        let t_max = us.last().unwrap().ln();
        let h = (t_max - t_min) / (us.len() - 1) as f64;
        let g = LogGrid { t_min, t_max, h };
        for (i, &u) in us.iter().enumerate() {
            if (u.ln() - g.t(i)).abs() > 1e-9 * (1.0 + g.t(i).abs()) {
                return Err(Error::InvalidParameter(format!(
                    "G samples are not log-uniform near u = {u}"
                )));
            }
        }
        Ok(g)
    }
}

pub fn log_grid(grid: &LogGrid) -> Vec<f64> {
    (0..grid.len()).map(|i| grid.t(i).exp()).collect()
}

/// Large-u expansion `√u G(u) ≈ Σ_k c_k u^{−k}`, fitted by least squares on
/// the last three octaves of the grid.
fn fit_tail(us: &[f64], gs: &[f64], terms: usize) -> Result<Vec<f64>> {
    let x_end = *us.last().unwrap();
    let rows: Vec<usize> = (0..us.len()).filter(|&i| us[i] >= x_end / 8.0).collect();
    if rows.len() < 2 * terms {
        return Err(Error::InvalidParameter(
            "too few samples at the top of the grid for the tail fit".into(),
        ));
    }
    let a = DMatrix::from_fn(rows.len(), terms, |r, k| {
        (x_end / us[rows[r]]).powi(k as i32)
    });
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|&i| us[i].sqrt() * gs[i]));
    let e = a
        .svd(true, true)
        .solve(&b, 1e-14)
        .map_err(|e| Error::no_conv("tail fit", e.to_string()))?;
    Ok((0..terms).map(|k| e[k] / x_end.powi(k as i32)).collect())
}

const TAIL_TERMS: usize = 4;

/// Prefactors `(A₁, A₂)` of the bracket of the G inversion at regularisation ε.
fn bracket_coefficients(x: f64, mu: f64, eps: f64) -> Result<(Complex64, Complex64)> {
    let ix = c64(0.0, x);
    let e = real(eps);
    let a1 =
        PI.sqrt() * (log_gamma(e + ix)? + log_gamma(e - ix)?).exp() * recip_gamma_real(0.5 + eps)
            / (2.0 * mu);
    let a2 = PI
        * 4f64.powf(mu)
        * gamma(mu)?
        * (log_gamma(e - mu + ix)? + log_gamma(e - mu - ix)?).exp()
        * recip_gamma_real(0.5 + eps - mu)
        * recip_gamma_real(mu - 0.5)
        * recip_gamma_real(1.0 - mu);
    Ok((a1, a2))
}

/// The bracket of the G inversion,
///
/// ```text
/// B_ε(x, u) = √π Γ(ε−ix)Γ(ε+ix)/(2μ Γ(1/2+ε)) ₄F₃(1/2, 3/2, ε−ix, ε+ix; 1+μ, 1−μ, 1/2+ε; −u)
///           + π 4^μ Γ(μ)Γ(ε−μ−ix)Γ(ε−μ+ix)/(Γ(1/2+ε−μ)Γ(μ−1/2)Γ(1−μ)) u^{−μ}
///             · ₄F₃(1/2−μ, 3/2−μ, ε−μ−ix, ε−μ+ix; 1−μ, 1−2μ, 1/2+ε−μ; −u).
/// ```
/// At ε = 0 the coinciding parameters cancel and the ₃F₂ kernel remains.
pub fn g_bracket(x: f64, u: f64, p: &TransformParameters, eps: f64) -> Result<f64> {
    let mu = p.mu;
    let (a1, a2) = bracket_coefficients(x, mu, eps)?;
    let ix = c64(0.0, x);
    let e = real(eps);
    let f1 = pfq(
        &[real(0.5), real(1.5), e - ix, e + ix],
        &[real(1.0 + mu), real(1.0 - mu), real(0.5 + eps)],
        -u,
    )?;
    let mut v = a1 * f1;
    if a2.norm() != 0.0 {
        let f2 = pfq(
            &[real(0.5 - mu), real(1.5 - mu), e - mu - ix, e - mu + ix],
            &[real(1.0 - mu), real(1.0 - 2.0 * mu), real(0.5 + eps - mu)],
            -u,
        )?;
        v += a2 * u.powf(-mu) * f2;
    }
    Ok(v.re)
}

/// `M(w) = √π Γ(w+ix)Γ(w−ix)/Γ(w+1/2)`, the Mellin transform in y of
/// `e^{−y/2} K_{ix}(y/2) y^{w−1}` up to the `√π` of the K-representation.
fn log_m(w: Complex64, x: f64) -> Result<Complex64> {
    let ix = c64(0.0, x);
    Ok(0.5 * PI.ln() + log_gamma(w + ix)? + log_gamma(w - ix)? - log_gamma(w + 0.5)?)
}

/// `B_ε(x, u) = (1/2πi) ∫ U*(s) M(ε−s) u^{−s} ds` on `max(0, μ) < Re s < ε`.
pub fn g_bracket_contour(x: f64, u: f64, p: &TransformParameters, eps: f64) -> Result<f64> {
    let mu = p.mu;
    let lo = mu.max(0.0);
    if !(eps > lo) {
        return Err(Error::domain(
            "g_bracket_contour",
            format!("empty strip ({lo}, {eps})"),
        ));
    }
    let spec = ContourSpec::new(0.5 * (lo + eps)).with_height(x.abs() + 14.0);
    let ln_u = u.ln();
    let opts = ContourOptions::new(Envelope::new(PI, 1.0)).with_tol(1e-300, 1e-12);
    let r = guarded(|slot| {
        integrate_contour(
            |s| {
                let l = record(
                    slot,
                    (|| Ok(u_mu_mellin(s, mu)?.ln() + log_m(eps - s, x)?))(),
                );
                (l - s * ln_u).exp()
            },
            &spec,
            &opts,
        )
    })?;
    Ok(r.value.re)
}

/// Coefficient `R` of the large-u behaviour `B_ε ~ R u^{−ε−ix} + c.c.`.
fn bracket_tail_coefficient(x: f64, mu: f64, eps: f64) -> Result<Complex64> {
    let w = c64(eps, x);
    let ix = c64(0.0, x);
    Ok(u_mu_mellin(w, mu)? * PI.sqrt() * (log_gamma(-2.0 * ix)?).exp() * recip_gamma(0.5 - ix))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InversionMode {
    /// The ε → 0 form with ₃F₂ kernels.
    LimitForm,
    /// Fixed regularisation ε ∈ (0, 1).
    Epsilon(f64),
}

impl InversionMode {
    fn eps(&self) -> Result<f64> {
        match *self {
            InversionMode::LimitForm => Ok(0.0),
            InversionMode::Epsilon(e) if e > 0.0 && e < 1.0 => Ok(e),
            InversionMode::Epsilon(e) => Err(Error::InvalidParameter(format!(
                "ε must lie in (0, 1), got {e}"
            ))),
        }
    }
}

/// Trapezoid sum on a uniform grid with the first Euler–Maclaurin end
/// correction (one-sided second-order differences).
fn trapezoid(f: &[f64], h: f64) -> f64 {
    let n = f.len();
    let mut s: f64 = f.iter().sum::<f64>() - 0.5 * (f[0] + f[n - 1]);
    if n >= 3 {
        let d0 = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        let d1 = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
        s -= h * (d1 - d0) / 12.0;
    }
    h * s
}

/// Reconstructs `g` on `taus` from samples of `G` on a [`LogGrid`].
///
/// The leading behaviour `G ~ c₀ u^{−1/2}` is subtracted before integrating;
/// what remains is integrated against the bracket by the trapezoid rule in
/// `ln u`, with the analytic contribution of the fitted expansion added
/// beyond the top of the grid.
pub fn invert_g(
    samples: &TransformResult,
    p: &TransformParameters,
    taus: &[f64],
    mode: InversionMode,
) -> Result<Inversion> {
    p.require_g_inversion()?;
    check_grid(taus, "τ")?;
    samples.validate()?;
    let eps = mode.eps()?;
    let mu = p.mu;
    let us = &samples.abscissas;
    let gs = &samples.values;
    let grid = LogGrid::infer(us)?;
    let c = fit_tail(us, gs, TAIL_TERMS)?;
    let c0 = c[0];
    let x_end = *us.last().unwrap();
    let u0 = us[0];
    let route = match mode {
        InversionMode::LimitForm => Route::InverseGLimit,
        InversionMode::Epsilon(e) => Route::InverseGEpsilon(e),
    };
    let mut out = TransformResult::new(*p, route, taus.len());
    let mut tails = Vec::with_capacity(taus.len());
    for &x in taus {
        if x == 0.0 {
            out.push(x, 0.0, 0.0);
            tails.push(0.0);
            continue;
        }
        let x = x.abs();
        let mut vals = Vec::with_capacity(us.len());
        for (&u, &g) in us.iter().zip(gs) {
            vals.push(u * g_bracket(x, u, p, eps)? * (g - c0 / u.sqrt()));
        }
        let body = trapezoid(&vals, grid.h);
        let r = bracket_tail_coefficient(x, mu, eps)?;
        let mut upper = Complex64::new(0.0, 0.0);
        for (k, ck) in c.iter().enumerate().skip(1) {
            let a = c64(0.5 - eps - k as f64, -x);
            upper += ck * r * (a * x_end.ln()).exp() / -a;
        }
        let upper = 2.0 * upper.re;
        let lower =
            g_bracket(x, u0, p, eps)? * (-2.0 * c0 * u0.sqrt() + u0 * gs[0] / (1.0 - mu.max(0.0)));
        let total = body + upper + lower;
        let scale = x * (2.0 * PI * x).sinh() / (PI * PI * PI.sqrt());
        let tail = (upper.abs() + lower.abs()) / total.abs().max(f64::MIN_POSITIVE);
        tails.push(tail);
        let err = scale
            * (1e-3 * upper.abs()
                + lower.abs()
                + 1e-12 * vals.iter().map(|v| v.abs()).sum::<f64>());
        out.push(x, scale * total, err);
    }
    Ok(Inversion {
        result: out,
        tail_ratio: tails,
        warnings: Vec::new(),
    })
}

/// `Q(y) = ∫₀^∞ K_{iτ}(y/2) g(τ)/cosh(πτ) dτ`.
fn q_function(g: &SampledFunction, y: f64) -> Result<f64> {
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-12);
    let r = guarded(|slot| {
        integrate_halfline(
            |t| {
                let gt = g.eval(t);
                if gt == 0.0 {
                    return real(0.0);
                }
                real(record(slot, bessel_k_imag(t, 0.5 * y)) * gt / (PI * t).cosh())
            },
            g.decay_hint().max(PI),
            &opts,
        )
    })?;
    Ok(r.value.re)
}

/// The regularised reconstruction at ε computed in the other order: first
/// the τ-integral of the Bessel kernel against g, then the y-integral,
///
/// ```text
/// g_ε(x) = x sinh(2πx)/π² ∫₀^∞ K_{ix}(y/2) y^{ε−1} ∫₀^∞ K_{iτ}(y/2) g(τ)/cosh(πτ) dτ dy.
/// ```
/// Trapezoid rule in `ln y` over `[e^{−14}, 100]`.
pub fn epsilon_reference(g: &SampledFunction, x: f64, eps: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::domain(
            "epsilon_reference",
            format!("needs ε > 0, got {eps}"),
        ));
    }
    let (t0, t1, h) = (-14.0f64, 100f64.ln(), 0.05);
    let n = ((t1 - t0) / h).ceil() as usize;
    let h = (t1 - t0) / n as f64;
    let mut vals = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let y = (t0 + i as f64 * h).exp();
        vals.push(bessel_k_imag(x, 0.5 * y)? * y.powf(eps) * q_function(g, y)?);
    }
    Ok(x * (2.0 * PI * x).sinh() / (PI * PI) * trapezoid(&vals, h))
}

/// The Mellin transform `G*(w) = ∫₀^∞ G(u) u^{w−1} du` of sampled G,
/// continued past `Re w = 1/2` by splitting off `c₀ u^{1/2}/(1+u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GMellin {
    grid: LogGrid,
    us: Vec<f64>,
    gs: Vec<f64>,
    coeffs: Vec<f64>,
    /// Power of `G(u) ~ u^{lead}` at the origin.
    lead: f64,
}

impl GMellin {
    pub fn from_samples(samples: &TransformResult) -> Result<Self> {
        let grid = LogGrid::infer(&samples.abscissas)?;
        let coeffs = fit_tail(&samples.abscissas, &samples.values, TAIL_TERMS)?;
        Ok(GMellin {
            grid,
            us: samples.abscissas.clone(),
            gs: samples.values.clone(),
            coeffs,
            lead: -samples.params.mu.max(0.0),
        })
    }

    pub fn leading_coefficient(&self) -> f64 {
        self.coeffs[0]
    }

    /// Valid for `−lead < Re w < 3/2`.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        if !(w.re > -self.lead && w.re < 1.5) {
            return Err(Error::domain(
                "GMellin::eval",
                format!("Re w = {} outside ({}, 3/2)", w.re, -self.lead),
            ));
        }
        let c0 = self.coeffs[0];
        let mut re = Vec::with_capacity(self.us.len());
        let mut im = Vec::with_capacity(self.us.len());
        for (&u, &g) in self.us.iter().zip(&self.gs) {
            let v = (g - c0 * u.sqrt() / (1.0 + u)) * (w * u.ln()).exp();
            re.push(v.re);
            im.push(v.im);
        }
        let mut total = c64(trapezoid(&re, self.grid.h), trapezoid(&im, self.grid.h));
        total += c0 * PI / (PI * (w + 0.5)).sin();
        let x_end = *self.us.last().unwrap();
        for k in 1..self.coeffs.len() {
            let dk = self.coeffs[k] - if k % 2 == 0 { c0 } else { -c0 };
            let a = w - 0.5 - k as f64;
            total += dk * (a * x_end.ln()).exp() / -a;
        }
        let u0 = self.us[0];
        let g0 = self.gs[0] - c0 * u0.sqrt() / (1.0 + u0);
        total += g0 * (w * u0.ln()).exp() / (w + self.lead);
        Ok(total)
    }
}

/// Both sides of the Mellin-image identity
/// `Γ(s)Γ(s−μ)/(Γ(s−1/2)Γ(1−s−μ)) G*(1−s) = ∫₀^∞ Γ(s+iτ)Γ(s−iτ) g(τ) dτ`
/// at real `s`.
pub fn mellin_image_identity(
    g: &SampledFunction,
    gm: &GMellin,
    mu: f64,
    s: f64,
) -> Result<(f64, f64)> {
    let sc = real(s);
    let ratio =
        (log_gamma(sc)? + log_gamma(sc - mu)? - log_gamma(sc - 0.5)? - log_gamma(1.0 - sc - mu)?)
            .exp();
    let lhs = (ratio * gm.eval(real(1.0 - s))?).re;
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-12);
    let rhs = guarded(|slot| {
        integrate_halfline(
            |t| real(record(slot, gamma_pair(s, t)) * g.eval(t)),
            g.decay_hint(),
            &opts,
        )
    })?
    .value
    .re;
    Ok((lhs, rhs))
}

/// The two sides of the identity between the U*-weighted line integral of
/// `G*(1−s)` and the Bessel transform of g, and the U_μ form of its left side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BesselTransformIdentity {
    pub ys: Vec<f64>,
    /// `(1/2πi) ∫ U*(s) G*(1−s) y^{−s} ds`.
    pub contour: Vec<f64>,
    /// `√π e^{y/2} ∫₀^∞ K_{iτ}(y/2) g(τ)/cosh(πτ) dτ`.
    pub bessel: Vec<f64>,
    /// `∫₀^∞ U_μ(yu) G(u) du`.
    pub u_form: Vec<f64>,
    /// `u_form + √π c₀ y^{−1/2}`: the Parseval shift past `s = 1/2`, where
    /// `G*(1−s)` has a pole because `G ~ c₀ u^{−1/2}`.
    pub u_form_corrected: Vec<f64>,
    pub c0: f64,
}

/// Samples `G` on the default inversion grid.
pub fn sample_g(
    g: &SampledFunction,
    p: &TransformParameters,
    grid: &LogGrid,
) -> Result<TransformResult> {
    forward_g(g, p, &log_grid(grid))
}

pub fn check_bessel_transform_identity(
    g: &SampledFunction,
    p: &TransformParameters,
    spec: &ContourSpec,
    ys: &[f64],
    samples: &TransformResult,
) -> Result<BesselTransformIdentity> {
    check_grid(ys, "y")?;
    spec.validate(p.mu.max(0.0), 0.5)?;
    let mu = p.mu;
    let gm = GMellin::from_samples(samples)?;
    let c0 = gm.leading_coefficient();
    let c0_exact = g_leading_coefficient(g)?;
    if (c0 - c0_exact).abs() > 1e-6 * c0_exact.abs().max(1e-300) {
        log::warn!("fitted leading coefficient {c0} differs from √π∫g/cosh(πτ) = {c0_exact}");
    }
    let opts = ContourOptions::new(Envelope::new(PI / 2.0, 1.0)).with_tol(1e-300, 1e-10);
    let grid = LogGrid::infer(&samples.abscissas)?;
    let a_coef = PI.sqrt() / 2.0 * (0.25 - mu * mu);
    let mut out = BesselTransformIdentity {
        ys: ys.to_vec(),
        contour: Vec::new(),
        bessel: Vec::new(),
        u_form: Vec::new(),
        u_form_corrected: Vec::new(),
        c0,
    };
    for &y in ys {
        if !(y > 0.0) {
            return Err(Error::domain(
                "check_bessel_transform_identity",
                format!("needs y > 0, got {y}"),
            ));
        }
        let ln_y = y.ln();
        let lhs = guarded(|slot| {
            integrate_contour(
                |s| {
                    record(slot, (|| Ok(u_mu_mellin(s, mu)? * gm.eval(1.0 - s)?))())
                        * (-s * ln_y).exp()
                },
                spec,
                &opts,
            )
        })?
        .value
        .re;
        let rhs = PI.sqrt() * (0.5 * y).exp() * q_function(g, y)?;
        let mut vals = Vec::with_capacity(samples.len());
        for (&u, &gv) in samples.abscissas.iter().zip(&samples.values) {
            vals.push(u * u_mu(y * u, p, TwoRoute::ClosedForm)? * gv);
        }
        let x_end = *samples.abscissas.last().unwrap();
        let w = trapezoid(&vals, grid.h) + a_coef * c0 * y.powf(-1.5) / x_end;
        out.contour.push(lhs);
        out.bessel.push(rhs);
        out.u_form.push(w);
        out.u_form_corrected.push(w + PI.sqrt() * c0 / y.sqrt());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(mu: f64) -> TransformParameters {
        TransformParameters::new(mu).unwrap()
    }

    #[test]
    fn f_kernel_two_assemblies() {
        let p = params(-0.5);
        for (x, tau) in [(0.5, 1.0), (2.0, 0.3)] {
            let a = f_inversion_kernel(x, tau, &p).unwrap();
            let b = f_inversion_kernel_via_s(x, tau, &p).unwrap();
            assert!((a - b).abs() < 1e-12 * a.abs(), "{a} vs {b}");
        }
    }

    #[test]
    fn bracket_routes_agree() {
        for (x, u, mu, eps) in [
            (1.0, 0.5, -0.5, 0.2),
            (1.5, 3.0, -0.5, 0.1),
            (0.7, 2.0, 0.2, 0.4),
        ] {
            let p = params(mu);
            let a = g_bracket(x, u, &p, eps).unwrap();
            let b = g_bracket_contour(x, u, &p, eps).unwrap();
            assert!(
                (a - b).abs() < 1e-8 * a.abs().max(1e-3),
                "({x},{u},{mu},{eps}): {a} vs {b}"
            );
        }
    }

    #[test]
    fn bracket_large_u() {
        let p = params(-0.5);
        let (x, eps) = (1.0, 0.2);
        let r = bracket_tail_coefficient(x, p.mu, eps).unwrap();
        let u: f64 = 1e4;
        let want = 2.0 * (r * (c64(-eps, -x) * u.ln()).exp()).re;
        let got = g_bracket(x, u, &p, eps).unwrap();
        assert!(
            (got - want).abs() < 1e-3 * r.norm() * u.powf(-eps),
            "{got} vs {want}"
        );
    }

    #[test]
    fn log_grid_roundtrip() {
        let g = LogGrid {
            t_min: -5.0,
            t_max: 5.0,
            h: 0.1,
        };
        let us = log_grid(&g);
        assert_eq!(us.len(), 101);
        let back = LogGrid::infer(&us).unwrap();
        assert!((back.h - 0.1).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_end_correction() {
        let h = 0.01;
        let f: Vec<f64> = (0..=100).map(|i| (i as f64 * h).exp()).collect();
        assert!((trapezoid(&f, h) - (1f64.exp() - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn zero_input_inverts_to_zero() {
        let p = params(-0.5);
        let grid = LogGrid::default();
        let us = log_grid(&grid);
        let mut r = TransformResult::new(p, Route::KernelQuadrature, us.len());
        for u in us {
            r.push(u, 0.0, 0.0);
        }
        let inv = invert_g(&r, &p, &[0.5, 1.0], InversionMode::LimitForm).unwrap();
        assert!(inv.result.values.iter().all(|v| *v == 0.0));
    }
}
