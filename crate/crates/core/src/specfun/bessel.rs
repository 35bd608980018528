//! Modified Bessel functions: `I_ν(y)` for complex order and `K_{iτ}(y)` for
//! real `τ`, both for real `y > 0`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::recip_gamma;
use super::{real, SeriesControl};
use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Ascending series `I_ν(y) = Σ (y/2)^{2k+ν} / (k! Γ(k+1+ν))`.
pub fn bessel_i_complex(nu: Complex64, y: f64, ctl: &SeriesControl) -> Result<Complex64> {
    if !(y > 0.0) {
        if y == 0.0 && nu == real(0.0) {
            return Ok(real(1.0));
        }
        return Err(Error::domain(
            "bessel_i_complex",
            format!("needs y > 0, got {y}"),
        ));
    }
    let half = 0.5 * y;
    let q = half * half;
    let lead = (nu * half.ln()).exp();
    let mut term = recip_gamma(nu + 1.0);
    // When 1/Γ(ν+1) vanishes (ν a negative integer) restart from the first
    // non-zero term.
    let mut k0 = 0usize;
    while term.norm() == 0.0 && k0 < 1000 {
        k0 += 1;
        let mut t = real(q.powi(k0 as i32));
        let mut fact = 1.0;
        for j in 1..=k0 {
            fact *= j as f64;
        }
        t /= fact;
        term = t * recip_gamma(nu + 1.0 + k0 as f64);
    }
    let mut sum = term;
    let mut k = k0;
    loop {
        k += 1;
        if k - k0 > ctl.max_terms {
            return Err(Error::no_conv(
                "bessel_i_complex",
                format!("{} terms at y = {y}", ctl.max_terms),
            ));
        }
        term *= q / (k as f64 * (nu + k as f64));
        sum += term;
        let t = term.norm();
        if (t <= ctl.rel_tol * 0.01 * sum.norm() || t <= ctl.abs_floor) && (k as f64) > half {
            break;
        }
    }
    Ok(lead * sum)
}

/// `K₀(y) = −(ln(y/2) + γ) I₀(y) + Σ (y²/4)^k H_k / (k!)²`.
fn bessel_k0_series(y: f64) -> f64 {
    let q = 0.25 * y * y;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut s = 0.0;
    let mut h = 0.0;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * kf);
        h += 1.0 / kf;
        i0 += term;
        s += term * h;
        if term * h.max(1.0) < 1e-18 * (i0 + s) {
            break;
        }
    }
    -((0.5 * y).ln() + EULER_GAMMA) * i0 + s
}

/// `K_{iτ}(y) = ∫₀^∞ e^{−y cosh t} cos(τt) dt` by the trapezoidal rule, which
/// converges geometrically for this entire, doubly-exponentially decaying
/// integrand.
fn bessel_k_integral(tau: f64, y: f64) -> f64 {
    let h = 0.02;
    let t_end = (1.0 + 42.0 / y).acosh() + 0.5;
    let n = (t_end / h).ceil() as usize;
    let mut s = 0.5 * (-y).exp();
    for j in 1..=n {
        let t = j as f64 * h;
        s += (-y * t.cosh()).exp() * (tau * t).cos();
    }
    s * h
}

/// `K_{iτ}(y)` for real `τ` and `y > 0`.
///
/// Small arguments use `K_{iτ} = −π Im I_{iτ}(y) / sinh(πτ)`; larger ones,
/// where that combination cancels, the integral representation.
pub fn bessel_k_imag(tau: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::domain(
            "bessel_k_imag",
            format!("needs finite y > 0, got {y}"),
        ));
    }
    let tau = tau.abs();
    let use_series = y <= 2.0 || (y <= 12.0 && y < tau + 2.0);
    if !use_series {
        return Ok(bessel_k_integral(tau, y));
    }
    if tau < 1e-7 {
        // K_{iτ} is even and analytic in τ; the O(τ²) change is below rounding.
        return Ok(bessel_k0_series(y));
    }
    let i = bessel_i_complex(Complex64::new(0.0, tau), y, &SeriesControl::default())?;
    Ok(-PI * i.im / (PI * tau).sinh())
}

/// `K_{iτ}(y) · Re I_{iτ}(y)`, i.e. half of `K_{iτ}(y)[I_{iτ}(y) + I_{−iτ}(y)]`.
///
/// For `y > 25` the product is taken from its asymptotic expansion in `1/y`,
/// which avoids forming the exponentially large and small factors.
pub fn bessel_ki_product(tau: f64, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::domain(
            "bessel_ki_product",
            format!("needs y > 0, got {y}"),
        ));
    }
    if y > 25.0 {
        let mu = -4.0 * tau * tau;
        let w = 1.0 / (4.0 * y * y);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut best = f64::INFINITY;
        for k in 1..40 {
            let kf = k as f64;
            let odd = 2.0 * kf - 1.0;
            term *= -(odd / (2.0 * kf)) * (mu - odd * odd) * w;
            if term.abs() > best {
                break;
            }
            best = term.abs();
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return Ok(sum / (2.0 * y));
    }
    let k = bessel_k_imag(tau, y)?;
    let i = bessel_i_complex(Complex64::new(0.0, tau), y, &SeriesControl::default())?;
    Ok(k * i.re)
}
