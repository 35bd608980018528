//! The third-order boundary value problem on the wedge `0 ≤ θ < β`,
//!
//! ```text
//! 2r²(1+r) u_rrr + 2r u_rθθ + r(11r+6) u_rr + u_θθ + (2(1−μ²) + 11r) u_r + u = 0,
//! u(r, 0) = 0,   u(r, β) = G(r),
//! ```
//! solved by the spectral synthesis
//!
//! ```text
//! u(r, θ) = ∫₀^∞ Φ(r, τ) sinh(θτ)/sinh(βτ) g(τ) dτ.
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{phi_direct, phi_jet, TransformParameters};
use crate::quadrature::{integrate_halfline, ContourSpec, HalflineOptions};
use crate::transforms::{forward_g, SampledFunction};

#[derive(Debug, Clone, PartialEq)]
pub struct WedgeProblem {
    pub beta: f64,
    pub p: TransformParameters,
    pub g: SampledFunction,
}

impl WedgeProblem {
    pub fn new(beta: f64, p: TransformParameters, g: SampledFunction) -> Result<Self> {
        if !(beta > 0.0 && beta < 2.0 * PI) {
            return Err(Error::InvalidParameter(format!(
                "wedge opening β must lie in (0, 2π), got {beta}"
            )));
        }
        p.require_wedge()?;
        Ok(WedgeProblem { beta, p, g })
    }

    fn check_theta(&self, theta: f64) -> Result<()> {
        if !(0.0..=self.beta).contains(&theta) {
            return Err(Error::domain(
                "wedge",
                format!("θ = {theta} outside [0, {}]", self.beta),
            ));
        }
        Ok(())
    }
}

/// `sinh(θτ)/sinh(βτ)` for `0 ≤ θ ≤ β`, in log-space once `βτ > 30`.
pub fn sinh_ratio(theta: f64, beta: f64, tau: f64) -> f64 {
    if theta == beta {
        return 1.0;
    }
    if theta == 0.0 || tau == 0.0 {
        return if tau == 0.0 { theta / beta } else { 0.0 };
    }
    let t = tau.abs();
    if beta * t > 30.0 {
        ((theta - beta) * t).exp() * -(-2.0 * theta * t).exp_m1() / -(-2.0 * beta * t).exp_m1()
    } else {
        (theta * t).sinh() / (beta * t).sinh()
    }
}

/// `u(r, θ)` on a grid, indexed `values[i][j]` for `rs[i]`, `thetas[j]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WedgeSolutionGrid {
    pub rs: Vec<f64>,
    pub thetas: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub residuals: Option<Vec<Vec<f64>>>,
}

impl WedgeSolutionGrid {
    pub fn validate(&self) -> Result<()> {
        if self.values.len() != self.rs.len()
            || self.values.iter().any(|row| row.len() != self.thetas.len())
        {
            return Err(Error::InvalidParameter(
                "wedge grid dimensions disagree".into(),
            ));
        }
        if let Some(res) = &self.residuals {
            if res.len() != self.rs.len() || res.iter().any(|row| row.len() != self.thetas.len()) {
                return Err(Error::InvalidParameter(
                    "wedge residual dimensions disagree".into(),
                ));
            }
        }
        if self.values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                at: "wedge solution".into(),
            });
        }
        Ok(())
    }

    /// Whether every row is nondecreasing in θ.
    pub fn nondecreasing_in_theta(&self) -> bool {
        self.values
            .iter()
            .all(|row| row.windows(2).all(|w| w[1] >= w[0]))
    }
}

fn check_rs(rs: &[f64]) -> Result<()> {
    if rs.is_empty() {
        return Err(Error::InvalidParameter("empty r grid".into()));
    }
    if rs.windows(2).any(|w| !(w[1] > w[0])) || !(rs[0] > 0.0) || rs.iter().any(|r| !r.is_finite())
    {
        return Err(Error::InvalidParameter(
            "r grid must be positive, finite and ascending".into(),
        ));
    }
    Ok(())
}

/// `u(r, θ)` by adaptive quadrature in τ of the direct kernel.
pub fn solution_at(prob: &WedgeProblem, r: f64, theta: f64) -> Result<f64> {
    prob.check_theta(theta)?;
    if theta == 0.0 {
        return Ok(0.0);
    }
    let opts = HalflineOptions::default().with_tol(1e-300, 1e-12);
    let failure = std::cell::Cell::new(None);
    let res = integrate_halfline(
        |tau| {
            let gt = prob.g.eval(tau);
            if gt == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            match phi_direct(r, tau, &prob.p) {
                Ok(k) => Complex64::new(k.value * sinh_ratio(theta, prob.beta, tau) * gt, 0.0),
                Err(e) => {
                    failure.set(Some(e));
                    Complex64::new(0.0, 0.0)
                }
            }
        },
        prob.g.decay_hint(),
        &opts,
    );
    if let Some(e) = failure.take() {
        return Err(e);
    }
    Ok(res?.value.re)
}

pub fn solve_wedge(prob: &WedgeProblem, rs: &[f64], thetas: &[f64]) -> Result<WedgeSolutionGrid> {
    check_rs(rs)?;
    if thetas.is_empty() {
        return Err(Error::InvalidParameter("empty θ grid".into()));
    }
    for &t in thetas {
        prob.check_theta(t)?;
    }
    let mut values = Vec::with_capacity(rs.len());
    for &r in rs {
        let mut row = Vec::with_capacity(thetas.len());
        for &t in thetas {
            row.push(solution_at(prob, r, t)?);
        }
        values.push(row);
    }
    let grid = WedgeSolutionGrid {
        rs: rs.to_vec(),
        thetas: thetas.to_vec(),
        values,
        residuals: None,
    };
    grid.validate()?;
    Ok(grid)
}

/// As [`solve_wedge`], with the relative PDE residual at interior points
/// (zero on the boundary rays).
pub fn solve_wedge_with_residuals(
    prob: &WedgeProblem,
    rs: &[f64],
    thetas: &[f64],
) -> Result<WedgeSolutionGrid> {
    let mut grid = solve_wedge(prob, rs, thetas)?;
    let mut res = Vec::with_capacity(rs.len());
    for &r in rs {
        let mut row = Vec::with_capacity(thetas.len());
        for &t in thetas {
            row.push(if t > 0.0 && t < prob.beta {
                pde_residual(prob, r, t)?.relative()
            } else {
                0.0
            });
        }
        res.push(row);
    }
    grid.residuals = Some(res);
    Ok(grid)
}

/// Residual of the polar PDE with the largest of its six terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeResidual {
    pub residual: f64,
    pub max_term: f64,
}

impl PdeResidual {
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.max_term.max(f64::MIN_POSITIVE)
    }
}

/// Gauss–Legendre nodes and weights on `[0, b]` in `panels` panels of eight.
fn gauss_legendre(b: f64, panels: usize) -> Vec<(f64, f64)> {
    const N: [f64; 4] = [
        0.183_434_642_495_649_8,
        0.525_532_409_916_329,
        0.796_666_477_413_626_7,
        0.960_289_856_497_536_2,
    ];
    const W: [f64; 4] = [
        0.362_683_783_378_362,
        0.313_706_645_877_887_3,
        0.222_381_034_453_374_47,
        0.101_228_536_290_376_26,
    ];
    let h = b / panels as f64;
    let mut out = Vec::with_capacity(8 * panels);
    for k in 0..panels {
        let mid = (k as f64 + 0.5) * h;
        for i in (0..4).rev() {
            out.push((mid - 0.5 * h * N[i], 0.5 * h * W[i]));
        }
        for i in 0..4 {
            out.push((mid + 0.5 * h * N[i], 0.5 * h * W[i]));
        }
    }
    out
}

/// Residual of the PDE at an interior point. The r-derivatives are taken
/// under the τ-integral from the Mellin–Barnes representation of the
/// kernel; the θ-derivatives act exactly on the sinh factor.
pub fn pde_residual(prob: &WedgeProblem, r: f64, theta: f64) -> Result<PdeResidual> {
    if !(theta > 0.0 && theta < prob.beta) || !(r > 0.0) {
        return Err(Error::domain(
            "pde_residual",
            format!("({r}, {theta}) is not an interior point"),
        ));
    }
    let mu = prob.p.mu;
    let spec = ContourSpec::new(prob.p.default_abscissa());
    let support = prob.g.effective_support();
    let panels = (support.ceil() as usize).max(4);
    // d[k] = ∫ Φ^{(k)} w g dτ and dt[k] = ∫ τ² Φ^{(k)} w g dτ with w the sinh ratio.
    let mut d = [0.0; 4];
    let mut dt = [0.0; 2];
    for (tau, wq) in gauss_legendre(support, panels) {
        let weight = wq * prob.g.eval(tau) * sinh_ratio(theta, prob.beta, tau);
        if weight == 0.0 {
            continue;
        }
        let jet = phi_jet(r, tau, &prob.p, &spec)?;
        for k in 0..4 {
            d[k] += weight * jet[k];
        }
        dt[0] += weight * tau * tau * jet[0];
        dt[1] += weight * tau * tau * jet[1];
    }
    let terms = [
        2.0 * r * r * (1.0 + r) * d[3],
        2.0 * r * dt[1],
        r * (11.0 * r + 6.0) * d[2],
        dt[0],
        (2.0 * (1.0 - mu * mu) + 11.0 * r) * d[1],
        d[0],
    ];
    Ok(PdeResidual {
        residual: terms.iter().sum(),
        max_term: terms.iter().fold(0.0, |m, v| m.max(v.abs())),
    })
}

/// The two boundary traces against their prescribed data.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryCheck {
    pub rs: Vec<f64>,
    /// `max |u(r, 0)|`.
    pub zero_trace: f64,
    /// `max |u(r, β) − G(r)| / |G(r)|`.
    pub beta_trace_rel: f64,
}

pub fn boundary_check(prob: &WedgeProblem, rs: &[f64]) -> Result<BoundaryCheck> {
    check_rs(rs)?;
    let g = forward_g(&prob.g, &prob.p, rs)?;
    let mut zero = 0.0f64;
    let mut rel = 0.0f64;
    for (i, &r) in rs.iter().enumerate() {
        zero = zero.max(solution_at(prob, r, 0.0)?.abs());
        let u = solution_at(prob, r, prob.beta)?;
        rel = rel.max((u - g.values[i]).abs() / g.values[i].abs().max(f64::MIN_POSITIVE));
    }
    Ok(BoundaryCheck {
        rs: rs.to_vec(),
        zero_trace: zero,
        beta_trace_rel: rel,
    })
}

/// `|u(r, θ)|` along `rs`, and whether it decreases strictly.
pub fn decay_profile(prob: &WedgeProblem, theta: f64, rs: &[f64]) -> Result<(Vec<f64>, bool)> {
    check_rs(rs)?;
    let v: Vec<f64> = rs
        .iter()
        .map(|&r| solution_at(prob, r, theta).map(f64::abs))
        .collect::<Result<_>>()?;
    let decreasing = v.windows(2).all(|w| w[1] < w[0]);
    Ok((v, decreasing))
}
