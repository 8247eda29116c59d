//! Numerical verification of the vanishing-viscosity limit for plane-parallel
//! flows over a no-slip wall with a transversal discontinuity.
//!
//! The crate builds a four-layer asymptotic approximation (Prandtl layer,
//! Kelvin–Helmholtz transition layer, and the corner "box" layer), solves the
//! depleted viscous system directly, and measures residual orders and
//! convergence rates over a sweep of viscosities.
//!
//! Module map:
//! - [`numerics`]: grids, two-sided fields, norms, stencils, heat kernels,
//!   Duhamel quadrature, interpolation and rate fitting.
//! - [`data`]: initial data and the interface geometry `ψ = t·u0(z)`.
//! - [`profiles`]: the single-layer profiles `U_P`, `V_P`, `V_KH`.
//! - [`box_layer`]: the corner profile `V_b` and its energy monitors.
//! - [`flow`]: Euler solution, Ansatz assembly, and the viscous solver.
//! - [`residuals`]: the residuals `E^u`, `E^v` and the singular term.
//! - [`study`]: configuration, the ε-sweep, reports and snapshots.

pub mod box_layer;
pub mod data;
pub mod error;
pub mod flow;
pub mod numerics;
pub mod profiles;
pub mod residuals;
pub mod study;

pub use error::{Error, Result};
