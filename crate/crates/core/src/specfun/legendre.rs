//! Associated Legendre functions of the first kind `P^μ_ν(z)` on `z > 1`,
//! in the convention continuous from the real axis above 1:
//!
//! ```text
//! P^μ_ν(z) = ((z+1)/(z−1))^{μ/2} / Γ(1−μ) · 2F1(−ν, ν+1; 1−μ; (1−z)/2).
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{log_gamma, recip_gamma};
use super::hyper::hyp2f1;
use super::{real, SeriesControl};
use crate::error::{Error, Result};

/// Which representation a given `(μ, ν, z)` is evaluated with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LegendreRoute {
    /// Defining series in `(1−z)/2`, used for `z < 2`.
    Series,
    /// Connection formula in `1/z²`, used for `z ≥ 2`.
    InverseSquare,
    /// Pfaff-transformed series in `(z−1)/(z+1)`, used for `z ≥ 2` when
    /// `ν + 1/2` is (close to) an integer and the connection formula degenerates.
    Pfaff,
}

fn near_half_integer(nu: Complex64) -> bool {
    let r = nu.re + 0.5;
    nu.im.abs() < 1e-6 && (r - r.round()).abs() < 1e-6
}

pub fn legendre_route(nu: Complex64, z: f64) -> LegendreRoute {
    if z < 2.0 {
        LegendreRoute::Series
    } else if near_half_integer(nu) {
        LegendreRoute::Pfaff
    } else {
        LegendreRoute::InverseSquare
    }
}

/// `P^μ_ν(z)` for real `μ` (with `1−μ` not a non-positive integer), complex
/// degree and `z > 1`.
pub fn legendre_p(mu: f64, nu: Complex64, z: f64) -> Result<Complex64> {
    if !(z > 1.0) {
        return Err(Error::domain("legendre_p", format!("needs z > 1, got {z}")));
    }
    legendre_p_zm1(mu, nu, z, z - 1.0)
}

/// As [`legendre_p`], with `z − 1` supplied separately so that arguments
/// very close to 1 keep full relative accuracy.
pub fn legendre_p_zm1(mu: f64, nu: Complex64, z: f64, zm1: f64) -> Result<Complex64> {
    if !(zm1 > 0.0) || !z.is_finite() {
        return Err(Error::domain(
            "legendre_p",
            format!("needs z > 1, got z − 1 = {zm1}"),
        ));
    }
    let one_minus_mu = 1.0 - mu;
    if one_minus_mu <= 0.0 && one_minus_mu == one_minus_mu.round() {
        return Err(Error::pole("legendre_p", format!("Γ(1−μ) at μ = {mu}")));
    }
    let ctl = SeriesControl::default();
    let zp1 = z + 1.0;
    let rg = recip_gamma(real(one_minus_mu));
    match legendre_route(nu, z) {
        LegendreRoute::Series => {
            let pre = (0.5 * mu * (zp1 / zm1).ln()).exp();
            let f = hyp2f1(-nu, nu + 1.0, real(one_minus_mu), -0.5 * zm1, &ctl)?;
            Ok(f.value * (pre * rg.re))
        }
        LegendreRoute::Pfaff => {
            let pre = (0.5 * mu * (zp1 / zm1).ln()).exp() * rg.re;
            let w = zm1 / zp1;
            let f = hyp2f1(-nu, -mu - nu, real(one_minus_mu), w, &ctl)?;
            Ok(f.value * (nu * (0.5 * zp1).ln()).exp() * pre)
        }
        LegendreRoute::InverseSquare => {
            let ln_z = z.ln();
            let ln2 = 2f64.ln();
            let w = 1.0 / (z * z);
            let ln_zz = (zm1 * zp1).ln();
            let half = 0.5;
            let common = -0.5 * PI.ln() - 0.5 * mu * ln_zz;
            let l1 = log_gamma(-nu - half)? + (-nu - 1.0) * ln2 + (-nu + mu - 1.0) * ln_z + common;
            let f1 = hyp2f1(
                half + nu * 0.5 - mu * 0.5,
                1.0 + nu * 0.5 - mu * 0.5,
                nu + 1.5,
                w,
                &ctl,
            )?;
            let t1 = l1.exp() * recip_gamma(-nu - mu) * f1.value;
            let l2 = log_gamma(nu + half)? + nu * ln2 + (nu + mu) * ln_z + common;
            let f2 = hyp2f1(
                -nu * 0.5 - mu * 0.5,
                half - nu * 0.5 - mu * 0.5,
                half - nu,
                w,
                &ctl,
            )?;
            let t2 = l2.exp() * recip_gamma(nu + 1.0 - mu) * f2.value;
            Ok(t1 + t2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::c64;
    use proptest::prelude::*;

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn polynomials() {
        assert!((legendre_p(0.0, real(0.0), 1.5).unwrap() - real(1.0)).norm() < 1e-14);
        assert!((legendre_p(0.0, real(1.0), 1.5).unwrap() - real(1.5)).norm() < 1e-14);
        // Both large-z routes on P_1 and P_2.
        assert!(rel(legendre_p(0.0, real(1.0), 4.0).unwrap(), real(4.0)) < 1e-14);
        assert!(
            rel(
                legendre_p(0.0, real(2.0), 7.0).unwrap(),
                real(0.5 * (3.0 * 49.0 - 1.0))
            ) < 1e-14
        );
    }

    #[test]
    fn oracle_values() {
        // mpmath legenp(nu, mu, z, type=3)
        let cases = [
            (
                -0.3,
                c64(0.0, 2.0),
                5.0,
                c64(-0.334_325_476_483_839_5, -0.110_250_998_638_996_3),
            ),
            (
                0.2,
                c64(0.0, 1.0),
                3.0,
                c64(0.176_655_359_638_063_8, 0.481_122_838_942_779_4),
            ),
            (
                -1.5,
                c64(0.0, 0.5),
                31.6,
                c64(0.295_552_206_829_670_7, 0.431_142_737_684_536_5),
            ),
            (-0.5, c64(0.5, 0.0), 3.0, c64(1.341_876_533_930_827_8, 0.0)),
            (
                -0.3,
                c64(0.0, 2.0),
                1.2,
                c64(0.562_410_168_653_078_8, 0.096_489_407_849_020_1),
            ),
            (
                0.2,
                c64(0.0, 3.0),
                1.0001,
                c64(2.311_118_246_118_807_4, 0.000_433_458_100_696_092_05),
            ),
            (
                -1.25,
                c64(0.0, 5.0),
                2.5,
                c64(0.023_587_736_696_792_02, -0.019_134_206_326_624_08),
            ),
        ];
        for (mu, nu, z, want) in cases {
            let got = legendre_p(mu, nu, z).unwrap();
            assert!(
                rel(got, want) < 1e-12,
                "μ={mu} ν={nu} z={z}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn routes_agree_near_switch() {
        for &(mu, nu) in &[
            (-0.3, c64(0.0, 2.0)),
            (0.2, c64(0.0, 0.7)),
            (-1.25, c64(0.0, 5.0)),
        ] {
            let below = legendre_p(mu, nu, 2.0 - 1e-12).unwrap();
            let above = legendre_p(mu, nu, 2.0).unwrap();
            assert!(rel(below, above) < 1e-11, "{below} {above}");
        }
        // Pfaff against the series at the switch and against the connection
        // formula slightly off the half-integer.
        let a = legendre_p(-0.4, real(0.5), 2.0 - 1e-12).unwrap();
        let b = legendre_p(-0.4, real(0.5), 2.0).unwrap();
        assert!(rel(a, b) < 1e-11, "{a} {b}");
        assert_eq!(legendre_route(real(0.5), 3.0), LegendreRoute::Pfaff);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(
            legendre_p(0.2, real(0.0), 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            legendre_p(2.0, real(0.0), 1.5),
            Err(Error::Pole { .. })
        ));
    }

    proptest! {
        #[test]
        fn degree_reflection(mu in prop::sample::select(vec![-0.7, -0.3, 0.2]),
                             tau in prop::sample::select(vec![0.5, 1.0, 2.0]),
                             z in prop::sample::select(vec![1.2, 2.0, 5.0])) {
            let nu = c64(0.0, tau);
            let a = legendre_p(mu, nu, z).unwrap();
            let b = legendre_p(mu, -nu - 1.0, z).unwrap();
            prop_assert!(rel(a, b) <= 1e-9);
        }

        #[test]
        fn conjugate_degree(mu in -1.4f64..0.45, tau in 0.0f64..6.0, z in 1.01f64..40.0) {
            let a = legendre_p(mu, c64(0.0, tau), z).unwrap();
            let b = legendre_p(mu, c64(0.0, -tau), z).unwrap();
            prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-300));
        }
    }
}
