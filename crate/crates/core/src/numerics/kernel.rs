use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Whole-line heat kernel `G(t,X) = (4πt)^{-1/2} exp(−X²/4t)`.
pub fn heat_kernel_free(t: f64, x: f64) -> Result<f64> {
    if !(t > 0.0) {
        return domain(format!("heat kernel needs t > 0, got {t}"));
    }
    Ok((-x * x / (4.0 * t)).exp() / (4.0 * PI * t).sqrt())
}

/// Dirichlet heat kernel on the half-line, `G(t,Z−Z′) − G(t,Z+Z′)`.
pub fn heat_kernel_halfline(t: f64, z: f64, zp: f64) -> Result<f64> {
    if z < 0.0 || zp < 0.0 {
        return domain(format!("half-line kernel needs Z, Z' >= 0, got ({z}, {zp})"));
    }
    // exp(−(Z−Z′)²/4t)·(1 − exp(−ZZ′/t)) avoids cancellation near Z=0
    let g = heat_kernel_free(t, z - zp)?;
    Ok(g * -(-z * zp / t).exp_m1())
}
