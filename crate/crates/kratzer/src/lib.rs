//! Spectral analysis of the generalized Kratzer operator
//! H = −d²/dx² + g₁/x + g₂/x² on the half-line x > 0.
//!
//! Every self-adjoint realization is covered: the unique one for g₂ ≥ 3/4 and
//! the one-parameter families of boundary conditions at the origin below
//! that. For each the crate computes solution bases, continuum spectral
//! densities, discrete levels with their normalizations, and Green functions.
//! The `oracle` module re-derives eigenvalues and norms by direct ODE
//! integration, independently of the hypergeometric closed forms.

pub mod basis;
pub mod error;
pub mod greens;
pub mod model;
pub mod ode;
pub mod oracle;
pub mod special_fns;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64;
