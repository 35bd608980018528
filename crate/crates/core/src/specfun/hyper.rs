//! Generalized hypergeometric functions `pFq(a; b; x)` for real `x`.
//!
//! Inside `|x| < 0.9` (and for terminating series) the defining series is
//! summed directly. For negative `x` outside that disc, or whenever the
//! alternating series would lose too many digits to cancellation, the
//! function is evaluated from its Barnes integral
//!
//! ```text
//! pFq(a; b; −X) = ΠΓ(b)/ΠΓ(a) · (1/2πi) ∫ Γ(s) ΠΓ(a−s) / ΠΓ(b−s) · X^{−s} ds,
//! ```
//!
//! on a line placed half way between the poles of `Γ(a−s)` and those of
//! `Γ(s)`, adding back the residues of any `Γ(s)` poles the line passes.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{is_gamma_pole, log_gamma};
use super::{real, SeriesControl};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_contour, ContourOptions, ContourSpec, Envelope};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfqRoute {
    Series,
    Terminating,
    MellinBarnes,
    /// `₀F₀(;;x) = eˣ`.
    Exponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PfqValue {
    pub value: Complex64,
    pub err_estimate: f64,
    pub route: PfqRoute,
}

/// Largest tolerated ratio of the biggest series term to the sum.
const MAX_CANCELLATION: f64 = 1e4;

fn non_positive_integer(z: Complex64) -> Option<usize> {
    if is_gamma_pole(z) {
        Some((-z.re) as usize)
    } else {
        None
    }
}

struct SeriesSum {
    value: Complex64,
    err: f64,
    max_term: f64,
    terminating: bool,
}

fn sum_series(a: &[Complex64], b: &[Complex64], x: f64, ctl: &SeriesControl) -> Result<SeriesSum> {
    let stop_at = a.iter().filter_map(|&z| non_positive_integer(z)).min();
    let mut term = real(1.0);
    let mut sum = real(1.0);
    let mut max_term: f64 = 1.0;
    let mut small = 0;
    let mut n = 0usize;
    loop {
        if let Some(m) = stop_at {
            if n >= m {
                let err = 4.0 * f64::EPSILON * max_term * (n as f64 + 1.0);
                return Ok(SeriesSum {
                    value: sum,
                    err,
                    max_term,
                    terminating: true,
                });
            }
        }
        if n >= ctl.max_terms {
            return Err(Error::no_conv(
                "hypergeometric series",
                format!("{} terms at x = {x}", ctl.max_terms),
            ));
        }
        let nf = n as f64;
        let mut ratio = real(x / (nf + 1.0));
        for &ai in a {
            ratio *= ai + nf;
        }
        for &bi in b {
            let d = bi + nf;
            if d.norm() == 0.0 {
                return Err(Error::pole("hyp_pfq", format!("lower parameter {bi}")));
            }
            ratio /= d;
        }
        term *= ratio;
        sum += term;
        n += 1;
        let t = term.norm();
        max_term = max_term.max(t);
        if !(sum.re.is_finite() && sum.im.is_finite()) {
            return Err(Error::no_conv(
                "hypergeometric series",
                "overflow".to_string(),
            ));
        }
        if t <= ctl.rel_tol * sum.norm() || t <= ctl.abs_floor {
            small += 1;
            // Geometric tail bound from the ratio of successive terms. For
            // p = q + 1 the ratios approach |x| and may do so from below, so
            // the limit is used when it is larger; the factor 2 covers the
            // slow drift of the ratio elsewhere.
            let r = if a.len() == b.len() + 1 {
                ratio.norm().max(x.abs())
            } else {
                ratio.norm()
            };
            if small >= 2 && r < 1.0 {
                let tail = 2.0 * t * r / (1.0 - r);
                let err = tail + 4.0 * f64::EPSILON * max_term * (n as f64).sqrt().max(1.0);
                return Ok(SeriesSum {
                    value: sum,
                    err,
                    max_term,
                    terminating: false,
                });
            }
        } else {
            small = 0;
        }
    }
}

/// `pFq(a; b; x)` with an error estimate and the route taken.
pub fn hyp_pfq(a: &[Complex64], b: &[Complex64], x: f64, ctl: &SeriesControl) -> Result<PfqValue> {
    ctl.validate()?;
    if !x.is_finite() {
        return Err(Error::domain("hyp_pfq", format!("argument {x}")));
    }
    for &bi in b {
        if is_gamma_pole(bi) {
            // Allowed only when the series terminates before the pole bites.
            let m = non_positive_integer(bi).unwrap();
            let stop = a.iter().filter_map(|&z| non_positive_integer(z)).min();
            if !matches!(stop, Some(k) if k <= m) {
                return Err(Error::pole("hyp_pfq", format!("lower parameter {bi}")));
            }
        }
    }
    let p = a.len();
    let q = b.len();
    let terminating = a.iter().any(|&z| non_positive_integer(z).is_some());
    if x == 0.0 {
        return Ok(PfqValue {
            value: real(1.0),
            err_estimate: 0.0,
            route: PfqRoute::Series,
        });
    }
    if p == 0 && q == 0 {
        // The series cancels catastrophically for large negative x.
        return Ok(PfqValue {
            value: real(x.exp()),
            err_estimate: 2.0 * f64::EPSILON * x.exp(),
            route: PfqRoute::Exponential,
        });
    }
    if terminating {
        let s = sum_series(a, b, x, ctl)?;
        return Ok(PfqValue {
            value: s.value,
            err_estimate: s.err,
            route: PfqRoute::Terminating,
        });
    }
    if p > q + 1 {
        return Err(Error::domain(
            "hyp_pfq",
            format!("{p}F{q} series diverges for x ≠ 0"),
        ));
    }
    if p == q + 1 && x >= 1.0 {
        return Err(Error::Capability(format!(
            "{p}F{q} at x = {x} ≥ 1 (on or beyond the branch cut)"
        )));
    }
    let series_allowed = p < q + 1 || x.abs() < 0.9;
    if series_allowed {
        let s = sum_series(a, b, x, ctl);
        match s {
            Ok(s) if x > 0.0 || s.max_term <= MAX_CANCELLATION * s.value.norm() => {
                let _ = s.terminating;
                return Ok(PfqValue {
                    value: s.value,
                    err_estimate: s.err,
                    route: PfqRoute::Series,
                });
            }
            Ok(_) | Err(Error::NonConvergence { .. }) if x < 0.0 => {}
            Ok(s) => {
                return Ok(PfqValue {
                    value: s.value,
                    err_estimate: s.err,
                    route: PfqRoute::Series,
                })
            }
            Err(e) => return Err(e),
        }
    }
    if x > 0.0 {
        return Err(Error::Capability(format!(
            "{p}F{q} at positive x = {x} outside the series disc"
        )));
    }
    pfq_barnes(a, b, -x, ctl)
}

/// Barnes-integral evaluation of `pFq(a; b; −X)`, `X > 0`.
pub fn pfq_barnes(
    a: &[Complex64],
    b: &[Complex64],
    big_x: f64,
    ctl: &SeriesControl,
) -> Result<PfqValue> {
    if !(big_x > 0.0) {
        return Err(Error::domain(
            "pfq_barnes",
            format!("needs X > 0, got {big_x}"),
        ));
    }
    let p = a.len();
    let q = b.len();
    if p == 0 || p > q + 1 {
        return Err(Error::domain(
            "pfq_barnes",
            format!("{p}F{q} has no convergent Barnes integral"),
        ));
    }
    if a.iter().any(|&z| is_gamma_pole(z)) {
        return Err(Error::domain(
            "pfq_barnes",
            "terminating series take the series route".to_string(),
        ));
    }
    let amin = a.iter().map(|z| z.re).fold(f64::INFINITY, f64::min);
    // Nearest pole of Γ(s) (a non-positive integer) strictly left of amin.
    let mut left = if amin > 0.0 { 0.0 } else { amin.ceil() - 1.0 };
    if amin - left < 0.5 {
        left -= 1.0;
    }
    let gamma = 0.5 * (amin + left);

    let mut prefactor = real(0.0);
    for &bi in b {
        prefactor += log_gamma(bi)?;
    }
    for &ai in a {
        prefactor -= log_gamma(ai)?;
    }
    let ln_x = big_x.ln();

    let rate = 0.5 * PI * (1 + p - q) as f64;
    let power = (gamma - 0.5) + a.iter().map(|z| z.re - gamma - 0.5).sum::<f64>()
        - b.iter().map(|z| z.re - gamma - 0.5).sum::<f64>();
    let im_max = a
        .iter()
        .chain(b.iter())
        .map(|z| z.im.abs())
        .fold(0.0, f64::max);
    let half_height = (im_max + 40.0 / rate).max(14.0);
    let nodes = ((2.0 * half_height * 80.0) as usize).max(256);
    let spec = ContourSpec {
        abscissa: gamma,
        half_height,
        nodes,
    };
    let opts = ContourOptions::new(Envelope::new(rate, power.max(0.0)))
        .with_tol(ctl.abs_floor, ctl.rel_tol);

    let integrand = |s: Complex64| -> Complex64 {
        let mut l = prefactor - s * ln_x;
        match log_gamma(s) {
            Ok(v) => l += v,
            Err(_) => return Complex64::new(f64::NAN, f64::NAN),
        }
        for &ai in a {
            match log_gamma(ai - s) {
                Ok(v) => l += v,
                Err(_) => return Complex64::new(f64::NAN, f64::NAN),
            }
        }
        for &bi in b {
            let z = bi - s;
            if is_gamma_pole(z) {
                return real(0.0);
            }
            match log_gamma(z) {
                Ok(v) => l -= v,
                Err(_) => return Complex64::new(f64::NAN, f64::NAN),
            }
        }
        l.exp()
    };
    let r = integrate_contour(integrand, &spec, &opts)?;

    // Residues of Γ(s) at s = −n for the poles right of the line.
    let mut value = r.value;
    let mut term = real(1.0);
    let n_res = if gamma < 0.0 {
        (-gamma).ceil() as usize
    } else {
        0
    };
    for n in 0..n_res {
        if n > 0 {
            let nf = (n - 1) as f64;
            let mut ratio = real(-big_x / (nf + 1.0));
            for &ai in a {
                ratio *= ai + nf;
            }
            for &bi in b {
                ratio /= bi + nf;
            }
            term *= ratio;
        }
        value += term;
    }
    Ok(PfqValue {
        value,
        err_estimate: r.err_estimate,
        route: PfqRoute::MellinBarnes,
    })
}

/// Gauss `2F1(a, b; c; x)` for `|x| < 1`.
pub fn hyp2f1(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    x: f64,
    ctl: &SeriesControl,
) -> Result<PfqValue> {
    if x.abs() >= 1.0 {
        return Err(Error::domain(
            "hyp2f1",
            format!("series argument {x} outside the unit disc"),
        ));
    }
    let s = sum_series(&[a, b], &[c], x, ctl)?;
    Ok(PfqValue {
        value: s.value,
        err_estimate: s.err,
        route: if s.terminating {
            PfqRoute::Terminating
        } else {
            PfqRoute::Series
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::c64;

    fn r(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| real(x)).collect()
    }

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    #[test]
    fn empty_sum_at_zero() {
        let v = hyp_pfq(&r(&[0.3, 1.2]), &r(&[2.0, 0.7]), 0.0, &ctl()).unwrap();
        assert_eq!(v.value, real(1.0));
    }

    #[test]
    fn binomial() {
        let v = hyp_pfq(&r(&[2.0]), &[], 0.5, &ctl()).unwrap();
        assert!((v.value.re - 4.0).abs() < 1e-12);
    }

    #[test]
    fn exponential_for_large_negative_argument() {
        let v = hyp_pfq(&[], &[], -60.0, &ctl()).unwrap();
        assert_eq!(v.route, PfqRoute::Exponential);
        assert!((v.value.re / (-60.0f64).exp() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn three_f_two_oracle() {
        // mpmath hyp3f2(1,1,1,2,2,0.5)
        let v = hyp_pfq(&r(&[1.0, 1.0, 1.0]), &r(&[2.0, 2.0]), 0.5, &ctl()).unwrap();
        assert!(
            (v.value.re - 1.164_481_052_930_025_3).abs() < 1e-13,
            "{}",
            v.value.re
        );
        assert!(v.err_estimate < 1e-12);
    }

    #[test]
    fn error_estimate_dominates_residual() {
        // 1F1(1; 2; x) = (e^x − 1)/x and 2F1(1,1;2;x) = −ln(1−x)/x
        for x in [-0.8f64, -0.3, 0.4, 0.85] {
            let v = hyp_pfq(&r(&[1.0]), &r(&[2.0]), x, &ctl()).unwrap();
            let exact = (x.exp() - 1.0) / x;
            assert!(
                (v.value.re - exact).abs() <= v.err_estimate.max(4.0 * f64::EPSILON * exact.abs())
            );
            let w = hyp_pfq(&r(&[1.0, 1.0]), &r(&[2.0]), x, &ctl()).unwrap();
            let exact = -(1.0 - x).ln() / x;
            assert!(
                (w.value.re - exact).abs() <= w.err_estimate.max(8.0 * f64::EPSILON * exact.abs())
            );
        }
    }

    #[test]
    fn barnes_matches_closed_form() {
        // 2F1(1,1;2;−X) = ln(1+X)/X, 1F1(1;2;−X) = (1−e^{−X})/X
        for big_x in [0.95f64, 3.0, 40.0, 1e4] {
            let v = hyp_pfq(&r(&[1.0, 1.0]), &r(&[2.0]), -big_x, &ctl()).unwrap();
            assert_eq!(v.route, PfqRoute::MellinBarnes);
            let exact = (1.0 + big_x).ln() / big_x;
            assert!(
                (v.value.re - exact).abs() < 1e-12 * exact,
                "X={big_x}: {} vs {exact}",
                v.value.re
            );
        }
        for big_x in [2.0f64, 30.0] {
            let v = pfq_barnes(&r(&[1.0]), &r(&[2.0]), big_x, &ctl()).unwrap();
            let exact = (1.0 - (-big_x).exp()) / big_x;
            assert!(
                (v.value.re - exact).abs() < 1e-12 * exact,
                "X={big_x}: {}",
                v.value.re
            );
        }
    }

    #[test]
    fn cancellation_switches_route() {
        // 1F1(1/2; 3/2; −X) = √π erf(√X) / (2√X); the series cancels badly at X = 30.
        let v = hyp_pfq(&[real(0.5)], &[real(1.5)], -30.0, &ctl()).unwrap();
        assert_eq!(v.route, PfqRoute::MellinBarnes);
        // erfc(√30) = 9.5e-15
        let exact = PI.sqrt() / (2.0 * 30f64.sqrt()) * (1.0 - 9.5e-15);
        assert!((v.value.re - exact).abs() < 1e-12 * exact, "{}", v.value.re);
    }

    #[test]
    fn barnes_with_upper_parameter_near_zero() {
        // 2F1(ix, −ix; 1/2; −sinh²t) = cos(2xt)... use cosh form: 2F1(a,−a;1/2;−sinh²t) = cosh(2at)
        let a = c64(0.0, 0.8);
        let t: f64 = 1.7;
        let z = -(t.sinh().powi(2));
        let v = hyp_pfq(&[a, -a], &[real(0.5)], z, &ctl()).unwrap();
        let exact = (2.0 * 0.8 * t).cos();
        assert!(
            (v.value - real(exact)).norm() < 1e-11,
            "{} vs {exact}",
            v.value
        );
    }

    #[test]
    fn terminating_and_poles() {
        // 2F1(−2, 1; 1; x) = (1−x)²
        let v = hyp_pfq(&r(&[-2.0, 1.0]), &r(&[1.0]), 3.0, &ctl()).unwrap();
        assert!((v.value.re - 4.0).abs() < 1e-14);
        assert!(matches!(
            hyp_pfq(&r(&[1.0]), &r(&[-1.0]), 0.3, &ctl()),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            hyp_pfq(&r(&[1.0, 1.0, 1.0]), &r(&[2.0]), 0.3, &ctl()),
            Err(Error::Domain { .. })
        ));
    }
}
