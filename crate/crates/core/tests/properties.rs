use std::f64::consts::PI;

use legendre_index::cli::{fmt_float, GridSpec};
use legendre_index::kernel::{phi_direct, phi_mellin_barnes, TransformParameters};
use legendre_index::specfun::{bessel_i_complex, hyp_pfq, legendre_p, SeriesControl};
use legendre_index::transforms::{forward_g, SampledFunction};
use legendre_index::wedge::sinh_ratio;
use legendre_index::{Complex64, ContourSpec};
use proptest::prelude::*;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn mu_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![-1.8f64..-0.05, 0.05f64..0.45]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_even_in_tau(x in 0.1f64..6.0, tau in 0.0f64..4.0, mu in mu_strategy()) {
        let p = TransformParameters::new(mu).unwrap();
        prop_assert_eq!(
            phi_direct(x, tau, &p).unwrap().value,
            phi_direct(x, -tau, &p).unwrap().value
        );
        let spec = ContourSpec::new(p.default_abscissa());
        let a = phi_mellin_barnes(x, tau, &p, &spec).unwrap().value;
        let b = phi_mellin_barnes(x, -tau, &p, &spec).unwrap().value;
        prop_assert!(rel(a, b) < 1e-10, "{} vs {}", a, b);
    }

    #[test]
    fn kernel_positive(x in 0.05f64..20.0, tau in 0.0f64..5.0, mu in mu_strategy()) {
        let p = TransformParameters::new(mu).unwrap();
        let k = phi_direct(x, tau, &p).unwrap();
        prop_assert!(k.value > 0.0 && k.value.is_finite());
    }

    #[test]
    fn contour_shift(x in 0.2f64..5.0, tau in 0.0f64..3.0, mu in mu_strategy(),
                     a in 0.1f64..0.45, b in 0.55f64..0.9) {
        let p = TransformParameters::new(mu).unwrap();
        let line = |t: f64| ContourSpec::new(mu + t * (0.5 - mu));
        let u = phi_mellin_barnes(x, tau, &p, &line(a)).unwrap().value;
        let v = phi_mellin_barnes(x, tau, &p, &line(b)).unwrap().value;
        prop_assert!(rel(u, v) < 1e-8, "{} vs {}", u, v);
    }

    #[test]
    fn forward_g_is_linear(alpha in -3.0f64..3.0, x in 0.2f64..4.0) {
        let p = TransformParameters::new(-0.5).unwrap();
        let g = SampledFunction::gauss_even_tau(1.0).unwrap();
        let base = forward_g(&g, &p, &[x]).unwrap().values[0];
        let scaled = forward_g(&g.scaled(alpha), &p, &[x]).unwrap().values[0];
        prop_assert!((scaled - alpha * base).abs() <= 1e-12 * base.abs().max(1.0));
    }
}

proptest! {
    #[test]
    fn legendre_conjugate_in_degree(mu in -0.9f64..0.45, tau in 0.0f64..4.0, z in 1.05f64..6.0) {
        let a = legendre_p(mu, Complex64::new(-0.5, tau), z).unwrap();
        let b = legendre_p(mu, Complex64::new(-0.5, -tau), z).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn bessel_i_conjugate_in_order(tau in 0.0f64..5.0, y in 0.05f64..10.0) {
        let ctl = SeriesControl::default();
        let a = bessel_i_complex(Complex64::new(0.0, tau), y, &ctl).unwrap();
        let b = bessel_i_complex(Complex64::new(0.0, -tau), y, &ctl).unwrap();
        prop_assert!((a.conj() - b).norm() <= 1e-12 * a.norm().max(1e-300));
    }

    #[test]
    fn pfq_error_estimate_dominates(x in -0.85f64..0.85, a in 0.2f64..3.0) {
        // ₁F₀(a;;x) = (1−x)^{−a}.
        let ctl = SeriesControl::default();
        let v = hyp_pfq(&[Complex64::new(a, 0.0)], &[], x, &ctl).unwrap();
        let exact = (1.0 - x).powf(-a);
        prop_assert!((v.value.re - exact).abs() <= v.err_estimate.max(4.0 * f64::EPSILON * exact));
        // ₁F₁(1;2;x) = (e^x − 1)/x.
        let v = hyp_pfq(&[Complex64::new(1.0, 0.0)], &[Complex64::new(2.0, 0.0)], x, &ctl).unwrap();
        let exact = if x == 0.0 { 1.0 } else { x.exp_m1() / x };
        prop_assert!((v.value.re - exact).abs() <= v.err_estimate.max(4.0 * f64::EPSILON * exact));
    }

    #[test]
    fn sinh_ratio_bounded_and_monotone(beta in 0.1f64..6.2, tau in 0.0f64..200.0,
                                       s in 0.0f64..1.0, t in 0.0f64..1.0) {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        let a = sinh_ratio(lo * beta, beta, tau);
        let b = sinh_ratio(hi * beta, beta, tau);
        prop_assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
        prop_assert!(a <= b * (1.0 + 1e-14));
        prop_assert_eq!(sinh_ratio(beta, beta, tau), 1.0);
    }

    #[test]
    fn sinh_ratio_matches_direct_form(beta in 0.5f64..PI, tau in 0.0f64..9.0, s in 0.0f64..1.0) {
        let theta = s * beta;
        let want = if tau == 0.0 { s } else { (theta * tau).sinh() / (beta * tau).sinh() };
        prop_assert!((sinh_ratio(theta, beta, tau) - want).abs() <= 1e-13);
    }

    #[test]
    fn float_format_round_trips(x in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
        let s = fmt_float(x);
        prop_assert_eq!(s.parse::<f64>().unwrap(), x);
        let digits = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
        prop_assert_eq!(digits.len(), 17);
    }

    #[test]
    fn grid_points_ascend(min in 0.01f64..10.0, span in 0.01f64..100.0, count in 2usize..200, log in any::<bool>()) {
        let text = format!("{min}:{}:{count}{}", min + span, if log { ":log" } else { "" });
        let g: GridSpec = text.parse().unwrap();
        let pts = g.points();
        prop_assert_eq!(pts.len(), count);
        prop_assert_eq!(pts[0], min);
        prop_assert_eq!(*pts.last().unwrap(), min + span);
        prop_assert!(pts.windows(2).all(|w| w[1] > w[0]));
    }
}
