//! Index transforms whose kernel is the product of associated Legendre
//! functions of the first kind,
//!
//! ```text
//! Φ(x, τ) = √(π/(1+x)) Γ(1+iτ−μ) Γ(1−iτ−μ) P^μ_{iτ}(√(1+x)) P^μ_{−iτ}(√(1+x)),
//! ```
//!
//! together with the machinery needed to evaluate it numerically:
//!
//! * [`specfun`]: complex log-gamma, modified Bessel functions of imaginary
//!   order, associated Legendre functions with complex degree, `pFq`.
//! * [`quadrature`]: half-line, oscillatory-cosine and vertical-line contour
//!   integration engines.
//! * [`kernel`]: Φ by three independent routes, its x-derivatives and the
//!   third-order ODE it satisfies.
//! * [`transforms`]: the forward transforms `F` and `G`, Mellin machinery,
//!   auxiliary kernels, and the inversion formulas.
//! * [`wedge`]: the spectral solution of the third-order wedge boundary value
//!   problem.
//! * [`cli`]: the command-line front end.

pub mod cli;
pub mod error;
pub mod kernel;
pub mod quadrature;
pub mod specfun;
pub mod transforms;
pub mod wedge;

pub use error::{Error, Result};
pub use kernel::{KernelEvaluation, KernelMethod, TransformParameters};
pub use num_complex::Complex64;
pub use quadrature::{ContourSpec, QuadResult};
pub use specfun::{ComplexScalar, SeriesControl};
