//! The forward index transforms
//!
//! ```text
//! (F f)(τ) = ∫₀^∞ Φ(x, τ) f(x) dx,      (G g)(x) = ∫₀^∞ Φ(x, τ) g(τ) dτ,
//! ```
//!
//! the Mellin machinery they are analysed with, the auxiliary kernels
//! (φ, h, S, U_μ) and the two inversion formulas.

mod auxiliary;
mod forward;
mod function;
mod invert;
mod mellin;

pub use auxiliary::{
    antiderivative_check, h_function, h_leading, integrated_s, integrated_s_quadrature,
    inversion_kernel_s, lebedev_form, legendre_square_identity, phi_abscissa, phi_aux, u_mu,
    u_mu_leading, u_mu_mellin, AntiderivativeCheck, LebedevForm, TwoRoute,
};
pub use forward::{
    bound_f, bound_g, forward_f, forward_f_contour, forward_g, g_leading_coefficient,
    norm_constant, weighted_l1_norm, BoundCheck,
};
pub use function::{
    Builtin, FunctionKind, Interpolation, MellinImage, SampledFunction, Table, CATALOG,
};
pub use invert::{
    check_bessel_transform_identity, epsilon_reference, f_inversion_kernel,
    f_inversion_kernel_via_s, g_bracket, g_bracket_contour, invert_f, invert_g, log_grid,
    mellin_image_identity, sample_g, BesselTransformIdentity, GMellin, Inversion, InversionMode,
    LogGrid, TAIL_THRESHOLD,
};
pub use mellin::{
    mellin_inverse, mellin_transform, mellin_transform_quadrature, parseval_check, MellinRoute,
    MellinValue,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::TransformParameters;

/// How the values of a [`TransformResult`] were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Quadrature of the kernel against the input function.
    KernelQuadrature,
    /// A Mellin–Barnes line integral of images.
    Contour,
    /// Closed-form special-function combination.
    ClosedForm,
    /// The Lebedev form with products of Bessel functions.
    Bessel,
    /// Inversion of F.
    InverseF,
    /// Inversion of G in the limit form.
    InverseGLimit,
    /// Inversion of G at a fixed regularisation ε.
    InverseGEpsilon(f64),
}

/// Values of a transform on a grid, with per-point error estimates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransformResult {
    pub abscissas: Vec<f64>,
    pub values: Vec<f64>,
    pub per_point_err: Vec<f64>,
    pub params: TransformParameters,
    pub route: Route,
}

impl TransformResult {
    pub(crate) fn new(params: TransformParameters, route: Route, n: usize) -> Self {
        TransformResult {
            abscissas: Vec::with_capacity(n),
            values: Vec::with_capacity(n),
            per_point_err: Vec::with_capacity(n),
            params,
            route,
        }
    }

    pub(crate) fn push(&mut self, x: f64, value: f64, err: f64) {
        self.abscissas.push(x);
        self.values.push(value);
        self.per_point_err
            .push(if err.is_finite() { err } else { f64::MAX });
    }

    pub fn len(&self) -> usize {
        self.abscissas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissas.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.abscissas.len();
        if self.values.len() != n || self.per_point_err.len() != n {
            return Err(Error::InvalidParameter(
                "transform result columns differ in length".into(),
            ));
        }
        if self.per_point_err.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidParameter("non-finite per-point error".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_grid(xs: &[f64], what: &str) -> Result<()> {
    if xs.is_empty() {
        return Err(Error::InvalidParameter(format!("empty {what} grid")));
    }
    if let Some(bad) = xs.iter().find(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "non-finite {what} value {bad}"
        )));
    }
    Ok(())
}
