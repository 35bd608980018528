//! Integration engines: adaptive finite and half-line quadrature, oscillatory
//! cosine transforms, and vertical-line contour integrals.

mod contour;
mod cosine;
pub mod gk;
mod halfline;

pub use contour::{integrate_contour, ContourOptions, Envelope};
pub use cosine::{integrate_cosine, CosineOptions, MAX_COSINE_FREQUENCY};
pub use halfline::{integrate_halfline, integrate_interval, EndpointSingularity, HalflineOptions};

use num_complex::Complex64;

/// Result of a quadrature: value, error estimate (an estimate, not a bound)
/// and number of integrand evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub err_estimate: f64,
    pub evaluations: usize,
}

impl QuadResult {
    pub fn re(&self) -> f64 {
        self.value.re
    }
}

/// A truncated vertical line `Re s = abscissa`, `|Im s| ≤ half_height`,
/// sampled with roughly `nodes` points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourSpec {
    pub abscissa: f64,
    pub half_height: f64,
    pub nodes: usize,
}

pub const DEFAULT_HALF_HEIGHT: f64 = 14.0;
pub const DEFAULT_NODES: usize = 2048;

impl ContourSpec {
    pub fn new(abscissa: f64) -> Self {
        ContourSpec {
            abscissa,
            half_height: DEFAULT_HALF_HEIGHT,
            nodes: DEFAULT_NODES,
        }
    }

    pub fn with_height(mut self, half_height: f64) -> Self {
        self.half_height = half_height;
        self
    }

    pub fn with_nodes(mut self, nodes: usize) -> Self {
        self.nodes = nodes;
        self
    }

    /// Checks the structural invariants and that the line sits strictly inside
    /// `(lo, hi)`.
    pub fn validate(&self, lo: f64, hi: f64) -> crate::Result<()> {
        if !(self.half_height > 0.0) || !self.half_height.is_finite() {
            return Err(crate::Error::InvalidParameter(format!(
                "contour half height must be positive, got {}",
                self.half_height
            )));
        }
        if self.nodes < 64 {
            return Err(crate::Error::InvalidParameter(format!(
                "contour needs at least 64 nodes, got {}",
                self.nodes
            )));
        }
        if !(self.abscissa > lo && self.abscissa < hi) {
            return Err(crate::Error::InvalidParameter(format!(
                "abscissa {} outside the pole-free strip ({lo}, {hi})",
                self.abscissa
            )));
        }
        Ok(())
    }
}

/// Absolute/relative tolerance pair shared by the engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-300,
            rel: 1e-12,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance { abs, rel }
    }

    pub(crate) fn target(&self, scale: f64) -> f64 {
        self.abs.max(self.rel * scale)
    }
}
