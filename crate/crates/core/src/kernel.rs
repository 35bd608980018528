//! The kernel
//!
//! ```text
//! Φ(x, τ) = √(π/(1+x)) Γ(1+iτ−μ) Γ(1−iτ−μ) P^μ_{iτ}(√(1+x)) P^μ_{−iτ}(√(1+x))
//! ```
//!
//! by three independent routes (direct product, Mellin–Barnes integral,
//! Fourier-cosine integral), its x-derivatives, and the third-order ODE it
//! satisfies in `x`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_contour, integrate_cosine, ContourOptions, ContourSpec, CosineOptions, Envelope,
    QuadResult,
};
use crate::specfun::gamma::{gamma, gamma_pair, ln_gamma_pair, log_gamma};
use crate::specfun::legendre::legendre_p_zm1;

/// Which theorems' hypotheses hold for a given order μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Validity {
    /// Boundedness of both transforms: μ < 1/2.
    pub theorem1: bool,
    /// Inversion of F: μ < 0, μ ∉ ℤ and min(−μ, 1) > 1/4, i.e. μ < −1/4.
    pub theorem2: bool,
    /// Inversion of G: μ < 1/2, μ ∉ ℤ.
    pub theorem4: bool,
    /// Wedge problem: 0 < μ < 1/2.
    pub wedge: bool,
}

/// The order μ with the theorem windows it falls into.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformParameters {
    pub mu: f64,
    pub validity: Validity,
}

fn is_integer(x: f64) -> bool {
    x == x.round()
}

impl TransformParameters {
    /// Accepts any finite real μ < 1/2.
    pub fn new(mu: f64) -> Result<Self> {
        if !mu.is_finite() || mu >= 0.5 {
            return Err(Error::InvalidParameter(format!(
                "μ must be a finite real below 1/2, got {mu}"
            )));
        }
        let int = is_integer(mu);
        let validity = Validity {
            theorem1: true,
            theorem2: mu < -0.25 && !int,
            theorem4: !int,
            wedge: mu > 0.0 && mu < 0.5,
        };
        Ok(TransformParameters { mu, validity })
    }

    pub fn require_f_inversion(&self) -> Result<()> {
        if is_integer(self.mu) || self.mu >= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "inverting F needs μ < 0 and μ ∉ ℤ, got {}",
                self.mu
            )));
        }
        if !self.validity.theorem2 {
            log::warn!(
                "μ = {} lies in (−1/4, 0): outside the verified window of the F inversion",
                self.mu
            );
        }
        Ok(())
    }

    pub fn require_g_inversion(&self) -> Result<()> {
        if !self.validity.theorem4 {
            return Err(Error::InvalidParameter(format!(
                "inverting G needs μ ∉ ℤ, got {}",
                self.mu
            )));
        }
        Ok(())
    }

    pub fn require_wedge(&self) -> Result<()> {
        if !self.validity.wedge {
            return Err(Error::InvalidParameter(format!(
                "the wedge problem needs 0 < μ < 1/2, got {}",
                self.mu
            )));
        }
        Ok(())
    }

    /// Midpoint of the strip (μ, 1/2) in which the Mellin–Barnes line lives.
    pub fn default_abscissa(&self) -> f64 {
        0.5 * (self.mu + 0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    Direct,
    MellinBarnes,
    FourierCosine,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelEvaluation {
    pub x: f64,
    pub tau: f64,
    pub value: f64,
    pub method: KernelMethod,
    pub err_estimate: f64,
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(
            "kernel",
            format!("needs finite x > 0, got {x}"),
        ));
    }
    Ok(())
}

/// √(1+x) and √(1+x) − 1 without cancellation.
fn legendre_argument(x: f64) -> (f64, f64) {
    let z = (1.0 + x).sqrt();
    (z, x / (z + 1.0))
}

/// Φ as the product of conjugate Legendre functions.
pub fn phi_direct(x: f64, tau: f64, p: &TransformParameters) -> Result<KernelEvaluation> {
    check_x(x)?;
    let mu = p.mu;
    let (z, zm1) = legendre_argument(x);
    let pp = legendre_p_zm1(mu, Complex64::new(0.0, tau), z, zm1)?;
    // P^μ_{−iτ} = conj(P^μ_{iτ}) for real μ, z, so the product is |P|².
    let ln_pair = ln_gamma_pair(1.0 - mu, tau)?;
    let value = (0.5 * (PI / (1.0 + x)).ln() + ln_pair).exp() * pp.norm_sqr();
    Ok(KernelEvaluation {
        x,
        tau,
        value,
        method: KernelMethod::Direct,
        err_estimate: 1e-14 * value.abs(),
    })
}

/// Integrand of the Mellin–Barnes representation without the `x^{−s}` factor,
/// as a logarithm.
pub(crate) fn mb_log_weight(s: Complex64, tau: f64, mu: f64) -> Result<Complex64> {
    let it = Complex64::new(0.0, tau);
    let one = Complex64::new(1.0, 0.0);
    Ok(log_gamma(one - s + it)?
        + log_gamma(one - s - it)?
        + log_gamma(0.5 - s)?
        + log_gamma(s - mu)?
        - log_gamma(one - s)?
        - log_gamma(one - s - mu)?)
}

fn mb_options(tau: f64) -> ContourOptions {
    let _ = tau;
    ContourOptions::new(Envelope::new(PI, 0.0)).with_tol(1e-300, 1e-13)
}

/// Raises the default line height so that it clears the `|t| < τ` plateau.
pub(crate) fn mb_spec(spec: &ContourSpec, tau: f64) -> ContourSpec {
    let mut s = *spec;
    s.half_height = s.half_height.max(tau.abs() + 14.0);
    s
}

/// `(1/2πi) ∫ Γ(1−s+iτ)Γ(1−s−iτ)Γ(1/2−s)Γ(s−μ) / (Γ(1−s)Γ(1−s−μ)) · D_k x^{−s} ds`
/// where `D_k` is the k-th x-derivative.
fn mb_integral(
    x: f64,
    tau: f64,
    p: &TransformParameters,
    spec: &ContourSpec,
    order: u32,
) -> Result<QuadResult> {
    spec.validate(p.mu, 0.5)?;
    let mu = p.mu;
    let ln_x = x.ln();
    let integrand = |s: Complex64| -> Complex64 {
        let l = match mb_log_weight(s, tau, mu) {
            Ok(l) => l,
            Err(_) => return Complex64::new(f64::NAN, f64::NAN),
        };
        let mut poly = Complex64::new(1.0, 0.0);
        for j in 0..order {
            poly *= -s - j as f64;
        }
        poly * (l - (s + order as f64) * ln_x).exp()
    };
    integrate_contour(integrand, &mb_spec(spec, tau), &mb_options(tau))
}

/// Φ from its Mellin–Barnes integral on the line `Re s = spec.abscissa`.
pub fn phi_mellin_barnes(
    x: f64,
    tau: f64,
    p: &TransformParameters,
    spec: &ContourSpec,
) -> Result<KernelEvaluation> {
    check_x(x)?;
    let r = mb_integral(x, tau, p, spec, 0)?;
    Ok(KernelEvaluation {
        x,
        tau,
        value: r.value.re,
        method: KernelMethod::MellinBarnes,
        err_estimate: r.err_estimate + r.value.im.abs(),
    })
}

/// `∫ |integrand| |ds| / 2π` of the Mellin–Barnes representation, which
/// bounds `x^γ |Φ(x, τ)|` uniformly in x.
pub fn phi_mb_bound(tau: f64, p: &TransformParameters, spec: &ContourSpec) -> Result<f64> {
    spec.validate(p.mu, 0.5)?;
    let mu = p.mu;
    let integrand = |s: Complex64| -> Complex64 {
        match mb_log_weight(s, tau, mu) {
            Ok(l) => Complex64::new(l.re.exp(), 0.0),
            Err(_) => Complex64::new(f64::NAN, f64::NAN),
        }
    };
    Ok(
        integrate_contour(integrand, &mb_spec(spec, tau), &mb_options(tau))?
            .value
            .re,
    )
}

/// Which printed form of the Legendre argument the Fourier-cosine route uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FourierCosineReading {
    /// `Z = (x + 2c²) / (2c √(x + c²))`, `c = cosh(u/2)`, no phase factor:
    /// the form that agrees with the other two routes.
    Resolved,
    /// `(x + 2cosh²(u/2)) / (2cosh(u) √(x + cosh²(u/2)))` with the factor `e^{πiμ}`.
    HalfAngleNumerator,
    /// `(x + 2cosh²(u)) / (2cosh(u) √(x + cosh²(u/2)))` with the factor `e^{πiμ}`.
    FullAngleNumerator,
}

/// Φ as a Fourier cosine integral in `u`:
///
/// ```text
/// Φ(x,τ) = Γ(3/2−μ) ∫₀^∞ cos(τu) c^{−1/2} (x+c²)^{−3/4} P^μ_{1/2}(Z) du,
/// c = cosh(u/2),  Z = (x+2c²) / (2c √(x+c²)).
/// ```
///
/// `Z > 1` for every `u`, so the Legendre function stays on the same branch as
/// in the direct route and no phase factor appears. `Z − 1` is formed from
/// `Z² − 1 = x² / (4c²(x+c²))` to keep precision where `Z → 1` at large `u`.
pub fn phi_fourier_cosine(x: f64, tau: f64, p: &TransformParameters) -> Result<KernelEvaluation> {
    phi_fourier_cosine_reading(x, tau, p, FourierCosineReading::Resolved)
}

pub fn phi_fourier_cosine_reading(
    x: f64,
    tau: f64,
    p: &TransformParameters,
    reading: FourierCosineReading,
) -> Result<KernelEvaluation> {
    check_x(x)?;
    let mu = p.mu;
    let g = gamma(1.5 - mu)?;
    let failure = std::cell::Cell::new(None::<Error>);
    let f = |u: f64| -> f64 {
        let c = (0.5 * u).cosh();
        let c2 = c * c;
        let root = (x + c2).sqrt();
        let (z, zm1) = match reading {
            FourierCosineReading::Resolved => {
                let z = (x + 2.0 * c2) / (2.0 * c * root);
                let zz1 = x * x / (4.0 * c2 * (x + c2));
                (z, zz1 / (z + 1.0))
            }
            FourierCosineReading::HalfAngleNumerator => {
                let z = (x + 2.0 * c2) / (2.0 * u.cosh() * root);
                (z, z - 1.0)
            }
            FourierCosineReading::FullAngleNumerator => {
                let z = (x + 2.0 * u.cosh().powi(2)) / (2.0 * u.cosh() * root);
                (z, z - 1.0)
            }
        };
        match legendre_p_zm1(mu, Complex64::new(0.5, 0.0), z, zm1) {
            Ok(pv) => {
                let phase = match reading {
                    FourierCosineReading::Resolved => Complex64::new(1.0, 0.0),
                    _ => Complex64::from_polar(1.0, PI * mu),
                };
                let v = phase * pv;
                if v.im.abs() > 1e-12 * v.norm() {
                    failure.set(Some(Error::domain(
                        "phi_fourier_cosine",
                        "complex integrand".to_string(),
                    )));
                }
                v.re / (c.sqrt() * (x + c2).powf(0.75))
            }
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        }
    };
    let opts = CosineOptions::new(1.0 - mu).with_tol(1e-300, 1e-12);
    let r = integrate_cosine(f, tau, &opts);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let r = r?;
    Ok(KernelEvaluation {
        x,
        tau,
        value: g * r.value.re,
        method: KernelMethod::FourierCosine,
        err_estimate: g * r.err_estimate,
    })
}

/// Reference route: the direct product where the defining Legendre series is
/// comfortable (`|(1−√(1+x))/2| < 0.9`), Mellin–Barnes elsewhere.
pub fn phi(x: f64, tau: f64, p: &TransformParameters) -> Result<KernelEvaluation> {
    let (_, zm1) = legendre_argument(x.max(0.0));
    if 0.5 * zm1 < 0.9 {
        phi_direct(x, tau, p)
    } else {
        phi_mellin_barnes(x, tau, p, &ContourSpec::new(p.default_abscissa()))
    }
}

/// `d^k Φ / dx^k` from the Mellin–Barnes integrand multiplied by
/// `(−s)(−s−1)…(−s−k+1) x^{−k}`.
pub fn phi_derivatives(
    x: f64,
    tau: f64,
    p: &TransformParameters,
    order: u32,
    spec: &ContourSpec,
) -> Result<f64> {
    check_x(x)?;
    if !(1..=3).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "derivative order must be 1..3, got {order}"
        )));
    }
    Ok(mb_integral(x, tau, p, spec, order)?.value.re)
}

/// `[Φ, Φ', Φ'', Φ''']` at one point, each from the Mellin–Barnes route.
pub fn phi_jet(x: f64, tau: f64, p: &TransformParameters, spec: &ContourSpec) -> Result<[f64; 4]> {
    check_x(x)?;
    let mut out = [0.0; 4];
    for (k, o) in out.iter_mut().enumerate() {
        *o = mb_integral(x, tau, p, spec, k as u32)?.value.re;
    }
    Ok(out)
}

/// Residual of `2x²(1+x)Φ''' + x(11x+6)Φ'' + (2(1−μ²) + x(11+2τ²))Φ' + (1+τ²)Φ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OdeResidual {
    pub residual: f64,
    pub max_term: f64,
}

impl OdeResidual {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.max_term
    }
}

pub fn ode_terms(x: f64, tau: f64, mu: f64, jet: &[f64; 4]) -> [f64; 4] {
    [
        2.0 * x * x * (1.0 + x) * jet[3],
        x * (11.0 * x + 6.0) * jet[2],
        (2.0 * (1.0 - mu * mu) + x * (11.0 + 2.0 * tau * tau)) * jet[1],
        (1.0 + tau * tau) * jet[0],
    ]
}

pub fn ode_residual(x: f64, tau: f64, p: &TransformParameters) -> Result<OdeResidual> {
    let jet = phi_jet(x, tau, p, &ContourSpec::new(p.default_abscissa()))?;
    let t = ode_terms(x, tau, p.mu, &jet);
    Ok(OdeResidual {
        residual: t.iter().sum(),
        max_term: t.iter().fold(0.0, |m, v| m.max(v.abs())),
    })
}

/// Both sides of the gamma-pair cosine transform
/// `Γ(1−s+iτ)Γ(1−s−iτ) = Γ(2(1−s)) 2^{2s−1} ∫₀^∞ cos(τy) cosh^{−2(1−s)}(y/2) dy`.
pub fn gamma_cosine_pair_check(s_real: f64, tau: f64) -> Result<(f64, f64)> {
    if !(s_real < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "needs s < 1, got {s_real}"
        )));
    }
    let a = 1.0 - s_real;
    let lhs = gamma_pair(a, tau)?;
    let opts = CosineOptions::new(a).with_tol(1e-300, 1e-13);
    let r = integrate_cosine(|y| (0.5 * y).cosh().powf(-2.0 * a), tau, &opts)?;
    let rhs = gamma(2.0 * a)? * 2f64.powf(2.0 * s_real - 1.0) * r.value.re;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::legendre::legendre_p;

    fn params(mu: f64) -> TransformParameters {
        TransformParameters::new(mu).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    // mpmath, 30 digits, legenp(type=3)
    const ORACLE: [(f64, f64, f64, f64); 3] = [
        (-0.5, 1.0, 1.0, 0.17353019793413578951),
        (-0.3, 4.0, 2.5, 0.00066316487465481864403),
        (0.25, 0.5, 0.7, 0.83665092433379971379),
    ];

    #[test]
    fn tau_zero_closed_form() {
        let p = params(-0.5);
        for x in [0.3f64, 2.0, 9.0] {
            let z = (1.0 + x).sqrt();
            let p0 = legendre_p(-0.5, Complex64::new(0.0, 0.0), z).unwrap().re;
            let want = (PI / (1.0 + x)).sqrt() * gamma(1.5).unwrap().powi(2) * p0 * p0;
            assert!(rel(phi_direct(x, 0.0, &p).unwrap().value, want) < 1e-14);
        }
    }

    #[test]
    fn direct_is_even_in_tau() {
        let p = params(-0.3);
        assert_eq!(
            phi_direct(2.0, 1.5, &p).unwrap().value,
            phi_direct(2.0, -1.5, &p).unwrap().value
        );
    }

    #[test]
    fn oracle_points() {
        for (mu, x, tau, want) in ORACLE {
            let got = phi_direct(x, tau, &params(mu)).unwrap().value;
            assert!(rel(got, want) < 1e-13, "{mu} {x} {tau}: {got}");
        }
    }

    #[test]
    fn mb_matches_direct() {
        for &(x, tau, mu) in &[(1.0, 1.0, -0.5), (0.25, 0.5, 0.2), (4.0, 2.0, -1.5)] {
            let p = params(mu);
            let d = phi_direct(x, tau, &p).unwrap().value;
            let m = phi_mellin_barnes(x, tau, &p, &ContourSpec::new(p.default_abscissa())).unwrap();
            assert!(
                rel(m.value, d) < 1e-10,
                "{x} {tau} {mu}: {} vs {d}",
                m.value
            );
        }
    }

    #[test]
    fn mb_even_in_tau() {
        let p = params(-0.5);
        let s = ContourSpec::new(p.default_abscissa());
        let a = phi_mellin_barnes(1.3, 0.8, &p, &s).unwrap().value;
        let b = phi_mellin_barnes(1.3, -0.8, &p, &s).unwrap().value;
        assert!(rel(a, b) < 1e-10);
    }

    #[test]
    fn contour_shift() {
        let p = params(-0.3);
        let a = phi_mellin_barnes(2.0, 0.5, &p, &ContourSpec::new(0.1))
            .unwrap()
            .value;
        let b = phi_mellin_barnes(2.0, 0.5, &p, &ContourSpec::new(0.3))
            .unwrap()
            .value;
        assert!(rel(a, b) < 1e-8);
    }

    #[test]
    fn contour_outside_strip_rejected() {
        let p = params(-0.3);
        assert!(phi_mellin_barnes(2.0, 0.5, &p, &ContourSpec::new(0.6)).is_err());
        assert!(phi_mellin_barnes(2.0, 0.5, &p, &ContourSpec::new(-0.4)).is_err());
    }

    #[test]
    fn fourier_cosine_matches_direct() {
        for &(x, tau, mu) in &[(1.0, 1.0, -0.5), (0.5, 2.0, 0.2), (3.0, 0.0, -1.25)] {
            let p = params(mu);
            let d = phi_direct(x, tau, &p).unwrap().value;
            let f = phi_fourier_cosine(x, tau, &p).unwrap().value;
            assert!(rel(f, d) < 1e-6, "{x} {tau} {mu}: {f} vs {d}");
        }
    }

    #[test]
    fn printed_readings_disagree() {
        let p = params(-0.5);
        let d = phi_direct(1.0, 1.0, &p).unwrap().value;
        for r in [
            FourierCosineReading::HalfAngleNumerator,
            FourierCosineReading::FullAngleNumerator,
        ] {
            if let Ok(v) = phi_fourier_cosine_reading(1.0, 1.0, &p, r) {
                assert!(rel(v.value, d) > 1e-3, "{r:?} unexpectedly agrees");
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let p = params(-0.5);
        let (x, tau) = (1.0, 1.0);
        let s = ContourSpec::new(p.default_abscissa());
        let h = 1e-4;
        let f = |x: f64| phi_direct(x, tau, &p).unwrap().value;
        let d1 = (f(x + h) - f(x - h)) / (2.0 * h);
        let d2 = (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
        let h3 = 1e-3;
        let d3 = (f(x + 2.0 * h3) - 2.0 * f(x + h3) + 2.0 * f(x - h3) - f(x - 2.0 * h3))
            / (2.0 * h3.powi(3));
        assert!(rel(phi_derivatives(x, tau, &p, 1, &s).unwrap(), d1) < 1e-5);
        assert!(rel(phi_derivatives(x, tau, &p, 2, &s).unwrap(), d2) < 1e-4);
        assert!(rel(phi_derivatives(x, tau, &p, 3, &s).unwrap(), d3) < 1e-3);
    }

    #[test]
    fn ode_holds() {
        for &(x, tau, mu) in &[(1.0, 1.0, -0.5), (0.5, 2.0, 0.2), (4.0, 0.5, -1.5)] {
            let r = ode_residual(x, tau, &params(mu)).unwrap();
            assert!(r.relative() < 1e-6, "{x} {tau} {mu}: {}", r.relative());
        }
    }

    #[test]
    fn gamma_cosine_pair() {
        let (l, r) = gamma_cosine_pair_check(0.0, 0.0).unwrap();
        assert!((l - 1.0).abs() < 1e-14 && (r - 1.0).abs() < 1e-12);
        for (s, t) in [(0.3, 1.0), (-0.5, 2.0)] {
            let (l, r) = gamma_cosine_pair_check(s, t).unwrap();
            assert!(rel(r, l) < 1e-9, "{s} {t}: {l} {r}");
        }
    }

    #[test]
    fn parameter_windows() {
        assert!(TransformParameters::new(0.6).is_err());
        let p = params(-0.5);
        assert!(p.validity.theorem2 && p.validity.theorem4 && !p.validity.wedge);
        let p = params(-0.1);
        assert!(!p.validity.theorem2);
        assert!(p.require_f_inversion().is_ok());
        let p = params(-1.0);
        assert!(!p.validity.theorem4 && p.require_g_inversion().is_err());
        assert!(params(0.25).validity.wedge);
    }
}
