use std::f64::consts::PI;

use legendre_index::transforms::{
    antiderivative_check, check_bessel_transform_identity, epsilon_reference, forward_f, invert_f,
    invert_g, mellin_image_identity, parseval_check, phi_abscissa, sample_g, GMellin,
    InversionMode, LogGrid, SampledFunction,
};
use legendre_index::{ContourSpec, TransformParameters};

fn params(mu: f64) -> TransformParameters {
    TransformParameters::new(mu).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn g_round_trip() {
    let taus = [0.5, 1.0, 1.5];
    for a in [1.0, 2.0] {
        let g = SampledFunction::gauss_even_tau(a).unwrap();
        for mu in [-0.5, 0.2] {
            let p = params(mu);
            let samples = sample_g(&g, &p, &LogGrid::default()).unwrap();
            let inv = invert_g(&samples, &p, &taus, InversionMode::LimitForm).unwrap();
            for (&t, &v) in taus.iter().zip(&inv.result.values) {
                let want = g.eval(t);
                assert!(rel(v, want) < 5e-2, "a={a} μ={mu} τ={t}: {v} vs {want}");
            }
        }
    }
}

#[test]
fn epsilon_sweep_approaches_limit() {
    let g = SampledFunction::gauss_even_tau(1.0).unwrap();
    let p = params(-0.5);
    let samples = sample_g(&g, &p, &LogGrid::default()).unwrap();
    let limit = invert_g(&samples, &p, &[1.0], InversionMode::LimitForm)
        .unwrap()
        .result
        .values[0];
    let mut last = f64::INFINITY;
    for eps in [0.2, 0.1, 0.05] {
        let v = invert_g(&samples, &p, &[1.0], InversionMode::Epsilon(eps))
            .unwrap()
            .result
            .values[0];
        let gap = (v - limit).abs();
        assert!(gap < last, "ε={eps}: gap {gap} after {last}");
        last = gap;
        let other_order = epsilon_reference(&g, 1.0, eps).unwrap();
        assert!(rel(v, other_order) < 1e-2, "ε={eps}: {v} vs {other_order}");
    }
}

#[test]
fn bessel_transform_identity() {
    let g = SampledFunction::gauss_even_tau(1.0).unwrap();
    let p = params(0.2);
    let samples = sample_g(&g, &p, &LogGrid::default()).unwrap();
    let spec = ContourSpec::new(0.35);
    let ys = [0.5, 1.0, 2.0];
    let id = check_bessel_transform_identity(&g, &p, &spec, &ys, &samples).unwrap();
    for (i, y) in ys.iter().enumerate() {
        let b = id.bessel[i];
        assert!(
            rel(id.contour[i], b) < 1e-5,
            "y={y}: {} vs {b}",
            id.contour[i]
        );
        assert!(
            rel(id.u_form_corrected[i], b) < 1e-5,
            "y={y}: {} vs {b}",
            id.u_form_corrected[i]
        );
        // Without the shift term the U form misses by the pole residue.
        assert!(rel(id.u_form[i], b) > 1e-2);
    }
}

#[test]
fn mellin_images_of_g() {
    let g = SampledFunction::gauss_even_tau(1.0).unwrap();
    for mu in [-0.5, 0.2] {
        let p = params(mu);
        let samples = sample_g(&g, &p, &LogGrid::default()).unwrap();
        let gm = GMellin::from_samples(&samples).unwrap();
        let (lhs, rhs) = mellin_image_identity(&g, &gm, mu, 0.3).unwrap();
        assert!(rel(lhs, rhs) < 1e-5, "μ={mu}: {lhs} vs {rhs}");
    }
}

#[test]
fn parseval_pairs() {
    let f = SampledFunction::exp_decay(1.0).unwrap();
    let g = SampledFunction::power_exp(1.0, 2.0).unwrap();
    for c in [0.3, 0.6] {
        let (direct, line) = parseval_check(&f, &g, c).unwrap();
        assert!(rel(line, direct) < 1e-9, "c={c}: {line} vs {direct}");
    }
}

#[test]
fn f_inversion_diverges_for_slow_decay() {
    let f = SampledFunction::exp_decay(1.0).unwrap();
    let p = params(-0.5);
    let taus: Vec<f64> = (0..=40).map(|i| 0.2 * i as f64).collect();
    let samples = forward_f(&f, &p, &taus).unwrap();
    let inv = invert_f(&samples, &p, &[1.0]).unwrap();
    assert!(!inv.warnings.is_empty());
    assert!(inv.tail_ratio[0] > 1e-3);
}

#[test]
fn f_inversion_without_the_pole_term() {
    // F − √π f*(1/2)/cosh(πτ) decays fast enough; at μ = −1/2 its inversion
    // recovers f up to the constant f(0).
    let f = SampledFunction::exp_decay(1.0).unwrap();
    let p = params(-0.5);
    let taus: Vec<f64> = (0..=80).map(|i| 0.1 * i as f64).collect();
    let mut samples = forward_f(&f, &p, &taus).unwrap();
    let pole = PI.sqrt() * f.image_at(0.5.into()).unwrap().re;
    for (v, &t) in samples.values.iter_mut().zip(&taus) {
        *v -= pole / (PI * t).cosh();
    }
    let xs = [0.5, 1.0, 2.0];
    let inv = invert_f(&samples, &p, &xs).unwrap();
    for (&x, &v) in xs.iter().zip(&inv.result.values) {
        let want = f.eval(x) - f.eval(0.0);
        assert!((v - want).abs() < 1e-3, "x={x}: {v} vs {want}");
    }
}

#[test]
fn antiderivative_identity_diverges() {
    let f = SampledFunction::exp_decay(1.0).unwrap();
    let p = params(-0.5);
    let spec = ContourSpec::new(phi_abscissa(&p));
    let chk = antiderivative_check(&f, &p, &spec, 1.0, 8.0).unwrap();
    assert!(chk.diverged);
    assert!(chk.partial_rhs.len() >= 2);
}
