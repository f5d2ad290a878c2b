//! Fisher-information spectra and Cramér–Rao lower bounds for linear(ized)
//! inverse problems whose Jacobian and trace-class noise covariance share
//! eigenvectors, together with a complete electromagnetic inverse-source
//! model observed through spherically isotropic noise.
//!
//! The crate is `no_std` and only needs `alloc`. Floating point special
//! functions go through [`libm`], so results are identical with and without
//! the standard library linked.
//!
//! Module map:
//!
//! - [`specfun`]: spherical Bessel/Hankel functions, associated Legendre
//!   functions, scalar and vector spherical harmonics, regular vector
//!   spherical waves and the imaginary part of the free-space Green's dyadic.
//! - [`fisher`]: modal spectra, Fisher eigenvalues, CRB curves, trace and
//!   range-condition diagnostics, regime classification and the truncated
//!   pseudo-inverse in coefficient space.
//! - [`emsource`]: the spherical inverse-source problem (singular values,
//!   isotropic noise eigenvalues, white-noise floor, `CRB(L)`).
//! - [`mcsim`]: Monte Carlo harness (isotropic plane-wave noise, estimator
//!   efficiency, Green's-dyadic mode-sum identity).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod emsource;
mod error;
pub mod fisher;
pub mod mcsim;
pub mod quad;
pub mod specfun;
pub mod sum;

pub use error::{Error, Result};
pub use num_complex::Complex64;
