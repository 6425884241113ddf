//! Density estimation with the sinc (Fourier integral) kernel.
//!
//! The crate is organised around the spectral view of the estimator: the sinc
//! estimate is the inverse Fourier transform of the empirical characteristic
//! function truncated to `[-1/h, 1/h]`, so its exact mean integrated squared
//! error depends on the target only through `|φ(t)|²`.
//!
//! - [`charfn`]: analytic characteristic-function models and their spectral
//!   functionals (tail and head energy, roughness).
//! - [`ecf`]: samples, the empirical characteristic function and its
//!   down-crossing search.
//! - [`estimator`]: pointwise and grid evaluation of the estimate and its
//!   derivatives, plus mode estimation.
//! - [`mise`]: exact MISE for the sinc and conventional kernels, the
//!   trapezoidal superkernel comparison, bandwidth optimisation and a Monte
//!   Carlo ISE check.
//! - [`bandwidth`]: characteristic-function based bandwidth rules.
//! - [`bounds`]: upper bounds on the sinc MISE under smoothness assumptions.

pub mod bandwidth;
pub mod bounds;
pub mod charfn;
pub mod ecf;
mod error;
pub mod estimator;
pub mod mise;
pub mod optimize;
pub mod quadrature;

pub use error::{Error, Result};
