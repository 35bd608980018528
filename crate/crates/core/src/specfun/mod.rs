//! Special functions: complex log-gamma, modified Bessel functions of
//! imaginary order, associated Legendre functions of complex degree on
//! `z > 1`, and generalized hypergeometric functions.

pub mod bessel;
pub mod gamma;
pub mod hyper;
pub mod legendre;

pub use bessel::{bessel_i_complex, bessel_k_imag, bessel_ki_product};
pub use gamma::{gamma_pair, log_gamma, recip_gamma};
pub use hyper::{hyp_pfq, PfqRoute, PfqValue};
pub use legendre::{legendre_p, legendre_route, LegendreRoute};

use num_complex::Complex64;

/// The numeric carrier used throughout; a re-export of [`Complex64`].
pub type ComplexScalar = Complex64;

/// Truncation control shared by every series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub max_terms: usize,
    pub rel_tol: f64,
    pub abs_floor: f64,
}

impl Default for SeriesControl {
    fn default() -> Self {
        SeriesControl {
            max_terms: 5000,
            rel_tol: 1e-13,
            abs_floor: 1e-300,
        }
    }
}

impl SeriesControl {
    pub fn new(max_terms: usize, rel_tol: f64, abs_floor: f64) -> crate::Result<Self> {
        let c = SeriesControl {
            max_terms,
            rel_tol,
            abs_floor,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.max_terms < 10
            || !(self.rel_tol > 0.0 && self.rel_tol < 1.0)
            || !(self.abs_floor > 0.0)
        {
            return Err(crate::Error::InvalidParameter(format!(
                "invalid series control {self:?}"
            )));
        }
        Ok(())
    }
}

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub(crate) fn real(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}
