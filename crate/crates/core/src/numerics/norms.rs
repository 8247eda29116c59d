//! Discrete `L^p` and `W^{1,p}` norms by composite trapezoid quadrature.
//!
//! On two-sided fields the interface column is split: the half-cell to the
//! left uses the left trace, the half-cell to the right the right trace.

use super::fd::{self, Axis};
use super::field::{Field1D, TwoSidedField2D};
use crate::error::{domain, Result};

fn check_p(p: f64) -> Result<()> {
    if p > 1.0 && p.is_finite() {
        Ok(())
    } else {
        domain(format!("norm exponent p = {p} must lie in (1, ∞)"))
    }
}

/// Fields whose `L^p` norm can be taken.
pub trait LpIntegrable {
    /// `∫ |f|^p` without the final root.
    fn lp_integral(&self, p: f64) -> Result<f64>;

    /// `(∫ |f|^p)^{1/p}`.
    fn lp_norm(&self, p: f64) -> Result<f64> {
        Ok(self.lp_integral(p)?.powf(1.0 / p))
    }
}

impl LpIntegrable for Field1D {
    fn lp_integral(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        Ok(weighted_power_sum(&self.grid.trapezoid_weights(), &self.values, p))
    }
}

impl LpIntegrable for TwoSidedField2D {
    fn lp_integral(&self, p: f64) -> Result<f64> {
        check_p(p)?;
        let g = &self.grid;
        let (nx, i0) = (g.nx(), g.interface());
        let wx = g.x.trapezoid_weights();
        let wz = g.z.trapezoid_weights();
        let xs = g.x.nodes();
        let hl = 0.5 * (xs[i0] - xs[i0 - 1]);
        let hr = 0.5 * (xs[i0 + 1] - xs[i0]);
        let mut total = 0.0;
        for (iz, &w) in wz.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let row = &self.values[iz * nx..(iz + 1) * nx];
            let mut s = 0.0;
            for (ix, (&v, &wi)) in row.iter().zip(&wx).enumerate() {
                if ix != i0 {
                    s += wi * v.abs().powf(p);
                }
            }
            s += hl * self.left_trace[iz].abs().powf(p) + hr * self.right_trace[iz].abs().powf(p);
            total += w * s;
        }
        Ok(total)
    }
}

/// Trapezoid integral of a two-sided field (interface half-cells use the
/// matching one-sided trace).
pub fn integral_2d(field: &TwoSidedField2D) -> f64 {
    let g = &field.grid;
    let (nx, i0) = (g.nx(), g.interface());
    let wx = g.x.trapezoid_weights();
    let wz = g.z.trapezoid_weights();
    let xs = g.x.nodes();
    let hl = 0.5 * (xs[i0] - xs[i0 - 1]);
    let hr = 0.5 * (xs[i0 + 1] - xs[i0]);
    let mut total = 0.0;
    for (iz, &w) in wz.iter().enumerate() {
        let row = &field.values[iz * nx..(iz + 1) * nx];
        let mut s = 0.0;
        for (ix, (&v, &wi)) in row.iter().zip(&wx).enumerate() {
            if ix != i0 {
                s += wi * v;
            }
        }
        s += hl * field.left_trace[iz] + hr * field.right_trace[iz];
        total += w * s;
    }
    total
}

/// `Σ w_i |f_i|^p`.
pub fn weighted_power_sum(w: &[f64], f: &[f64], p: f64) -> f64 {
    w.iter().zip(f).map(|(&w, &v)| w * v.abs().powf(p)).sum()
}

/// `L^p` norm of a field.
pub fn lp_norm<F: LpIntegrable>(field: &F, p: f64) -> Result<f64> {
    field.lp_norm(p)
}

/// `(‖f‖_p^p + ‖f′‖_p^p)^{1/p}` with a second-order FD derivative.
pub fn w1p_norm(field: &Field1D, p: f64) -> Result<f64> {
    let a = field.lp_integral(p)?;
    let d = fd::fd_derivative_1d(field, 1)?;
    Ok((a + d.lp_integral(p)?).powf(1.0 / p))
}

/// `(‖f‖_p^p + ‖∂_axis f‖_p^p)^{1/p}` for a two-sided field.
pub fn w1p_norm_2d(field: &TwoSidedField2D, axis: Axis, p: f64) -> Result<f64> {
    let a = field.lp_integral(p)?;
    let d = fd::fd_derivative(field, axis, 1)?;
    Ok((a + d.lp_integral(p)?).powf(1.0 / p))
}
