//! Gauss–Kronrod node tables and single-panel rules.

use num_complex::Complex64;

// Positive abscissae of the 21-point Kronrod rule, descending; odd indices are
// the 10-point Gauss nodes.
const XK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.0,
];
const WK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077958109831074,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];
const WG10: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

const XK15: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WK15: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG7: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Gk15,
    Gk21,
}

impl Rule {
    pub fn points(self) -> usize {
        match self {
            Rule::Gk15 => 15,
            Rule::Gk21 => 21,
        }
    }
}

/// Outcome of one panel: Kronrod value, QUADPACK-style error estimate and the
/// integral of |f| (used to scale relative tolerances).
#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub value: Complex64,
    pub err: f64,
    pub abs_integral: f64,
    pub finite: bool,
}

pub fn panel<F>(rule: Rule, f: &F, a: f64, b: f64) -> Panel
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    match rule {
        Rule::Gk15 => panel_impl(f, a, b, &XK15, &WK15, &WG7),
        Rule::Gk21 => panel_impl(f, a, b, &XK21, &WK21, &WG10),
    }
}

fn panel_impl<F>(f: &F, a: f64, b: f64, xk: &[f64], wk: &[f64], wg: &[f64]) -> Panel
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let n = xk.len();
    // The centre node is a Gauss node when the Gauss rule has odd order.
    let centre_in_gauss = wg.len() * 2 > n - 1;
    let fc = f(c);
    let mut finite = fc.re.is_finite() && fc.im.is_finite();
    let mut rk = fc * wk[n - 1];
    let mut rg = if centre_in_gauss {
        fc * wg[wg.len() - 1]
    } else {
        Complex64::new(0.0, 0.0)
    };
    let mut rabs = fc.norm() * wk[n - 1];
    let mut samples = Vec::with_capacity(2 * n - 1);
    samples.push((fc, wk[n - 1]));
    for j in 0..n - 1 {
        let dx = h * xk[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        finite &= f1.re.is_finite() && f1.im.is_finite() && f2.re.is_finite() && f2.im.is_finite();
        let s = f1 + f2;
        rk += s * wk[j];
        rabs += (f1.norm() + f2.norm()) * wk[j];
        if j % 2 == 1 {
            rg += s * wg[j / 2];
        }
        samples.push((f1, wk[j]));
        samples.push((f2, wk[j]));
    }
    let mean = rk * 0.5;
    let resasc: f64 = samples
        .iter()
        .map(|(v, w)| (v - mean).norm() * w)
        .sum::<f64>()
        * h.abs();
    let value = rk * h;
    let mut err = ((rk - rg) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let abs_integral = rabs * h.abs();
    if abs_integral > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_integral);
    }
    Panel {
        value,
        err,
        abs_integral,
        finite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        // GK21 integrates degree 31 exactly, GK15 degree 22.
        let f = |x: f64| Complex64::new(x.powi(20) + 3.0 * x.powi(7), 0.0);
        for r in [Rule::Gk15, Rule::Gk21] {
            let p = panel(r, &f, -1.0, 2.0);
            let exact = (2f64.powi(21) + 1.0) / 21.0 + 3.0 * (2f64.powi(8) - 1.0) / 8.0;
            assert!(
                (p.value.re - exact).abs() < 1e-12 * exact,
                "{r:?} {}",
                p.value.re
            );
        }
    }

    #[test]
    fn weights_sum_to_two() {
        let sk21: f64 = 2.0 * WK21[..10].iter().sum::<f64>() + WK21[10];
        let sg10: f64 = 2.0 * WG10.iter().sum::<f64>();
        let sk15: f64 = 2.0 * WK15[..7].iter().sum::<f64>() + WK15[7];
        let sg7: f64 = 2.0 * WG7[..3].iter().sum::<f64>() + WG7[3];
        for s in [sk21, sg10, sk15, sg7] {
            assert!((s - 2.0).abs() < 1e-14);
        }
    }
}
