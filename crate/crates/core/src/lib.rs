//! Exact evaluation of p-adic and real quantum-mechanical propagators for
//! quadratic actions.
//!
//! The kernel of a system with quadratic classical action `S(x'', t''; x', t')`
//! is
//!
//! ```text
//! K_v(x'', t''; x', t') = lambda_v(-b / 2h) |b / h|_v^{1/2} chi_v(-S / h),
//! b = d^2 S / dx'' dx'
//! ```
//!
//! at every place `v` of the rationals. All values are kept exact as
//! [`ExactCircle`]s; p-adic integrals are cross-checked against brute-force
//! character sums over balls.

pub mod actions;
pub mod error;
pub mod gauss;
pub mod padic_core;
pub mod propagator;
pub mod suites;

pub use error::{ActionError, CoreError, GaussError, ParseRatError, PropagatorError};
pub use padic_core::{ExactCircle, Place, Rat, Valuation};
