//! Complex log-gamma and derived quantities.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_RADIUS: f64 = 10.0;

// B_{2k} / (2k (2k−1)), k = 1..8
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// True at the poles of Γ: zero and the negative integers.
pub fn is_gamma_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

fn stirling(w: Complex64) -> Complex64 {
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + LN_SQRT_2PI + series
}

/// Principal branch of ln Γ(z): the continuation from the positive axis with
/// its cut along the negative real axis.
///
/// Arguments close to the real axis are shifted up to `Re w ≥ 10` with the
/// recurrence, subtracting principal logarithms one by one, which reproduces
/// the principal branch exactly.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::domain(
            "log_gamma",
            format!("non-finite argument {z}"),
        ));
    }
    if is_gamma_pole(z) {
        return Err(Error::pole("log_gamma", z));
    }
    let shift = if z.im.abs() < STIRLING_RADIUS {
        (STIRLING_RADIUS - z.re).ceil().max(0.0)
    } else {
        (-z.re).ceil().max(0.0)
    } as usize;
    // The running product gives the modulus in one logarithm; the phase is
    // the sum of principal arguments, which is what the principal branch needs.
    let mut w = z;
    let mut product = Complex64::new(1.0, 0.0);
    let mut phase = 0.0;
    for _ in 0..shift {
        product *= w;
        phase += w.arg();
        w += 1.0;
    }
    let correction = Complex64::new(product.norm().ln(), phase);
    Ok(stirling(w) - correction)
}

pub fn complex_gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// 1/Γ(z), zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_gamma_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    match log_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => Complex64::new(f64::NAN, f64::NAN),
    }
}

/// Γ(x) for real x.
pub fn gamma(x: f64) -> Result<f64> {
    if x.is_finite() && x > 0.0 && x == x.round() && x <= 171.0 {
        // Exact factorials for small integers.
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    Ok(complex_gamma(Complex64::new(x, 0.0))?.re)
}

/// 1/Γ(x) for real x.
pub fn recip_gamma_real(x: f64) -> f64 {
    recip_gamma(Complex64::new(x, 0.0)).re
}

/// ln|Γ(x)| for real x.
pub fn ln_abs_gamma(x: f64) -> Result<f64> {
    Ok(log_gamma(Complex64::new(x, 0.0))?.re)
}

/// Γ(a+iτ)Γ(a−iτ) = |Γ(a+iτ)|².
pub fn gamma_pair(a: f64, tau: f64) -> Result<f64> {
    let l = log_gamma(Complex64::new(a, tau))?;
    Ok((2.0 * l.re).exp())
}

/// ln of [`gamma_pair`].
pub fn ln_gamma_pair(a: f64, tau: f64) -> Result<f64> {
    Ok(2.0 * log_gamma(Complex64::new(a, tau))?.re)
}

/// Euler's beta function for real arguments.
pub fn beta(a: f64, b: f64) -> Result<f64> {
    let l = log_gamma(Complex64::new(a, 0.0))? + log_gamma(Complex64::new(b, 0.0))?
        - log_gamma(Complex64::new(a + b, 0.0))?;
    Ok(l.exp().re)
}

/// `π/sin(πz)` written through Γ(z)Γ(1−z), handy for tests.
pub fn reflection(z: Complex64) -> Complex64 {
    PI / (z * PI).sin()
}
