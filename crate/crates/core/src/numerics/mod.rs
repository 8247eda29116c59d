//! Shared numerical building blocks.

pub mod duhamel;
pub mod fd;
pub mod field;
pub mod fit;
pub mod grid;
pub mod kernel;
pub mod norms;
pub mod pchip;
pub mod remap;
pub mod tridiag;

pub use duhamel::{duhamel_exponential, duhamel_exponential_many, unit_wall_profile, DuhamelQuantity};
pub use fd::{fd_derivative, fd_derivative_1d, Axis};
pub use field::{Field1D, Grid2D, Side, TwoSidedField1D, TwoSidedField2D};
pub use fit::{fit_loglog_rate, LogLogFit};
pub use grid::{GradedAxis, Grid1D};
pub use kernel::{heat_kernel_free, heat_kernel_halfline};
pub use norms::{lp_norm, w1p_norm, LpIntegrable};
pub use pchip::{Pchip, PchipPlan};
