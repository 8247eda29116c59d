//! Duhamel integrals with an exponential source on the half-line.
//!
//! `D(t,Z) = ∫₀^t ∫₀^∞ 𝒢(t−s, Z; Z′) e^{−Z′} dZ′ ds` solves
//! `∂_t D = ∂_Z² D + e^{−Z}`, `D(t,0) = 0`, `D(0,·) = 0`.
//!
//! The inner spatial integral has a closed form in `erfc`. The time integral
//! is done after the substitution `s = t − σ²`, which turns the kernel's
//! `(t−s)^{−1/2}` concentration into a bounded integrand, by composite
//! Simpson on panels graded towards `σ = 0` at the scale `max(σ, Z)`.
//! Since the integrand in `σ` does not depend on `t` (only the upper limit
//! `√t` does), many times can be served by one cumulative sweep.

use statrs::function::erf::erfc;
use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Panels per unit of `max(σ, Z)` in the graded partition.
const PANELS_PER_SCALE: f64 = 32.0;
/// Largest panel in `σ`.
const MAX_PANEL: f64 = 1.0 / 64.0;
/// Smallest scale used to start the grading at `Z = 0`.
const MIN_SCALE: f64 = 1e-4;

/// `e^x · erfc(y)` without overflow for large `x` and `y > 0`.
fn exp_erfc(x: f64, y: f64) -> f64 {
    if y < 25.0 && x < 700.0 {
        return x.exp() * erfc(y);
    }
    // e^{x−y²}·erfcx(y) with the asymptotic series of erfcx
    let y2 = y * y;
    let inv = 1.0 / (2.0 * y2);
    let series = 1.0 - inv + 3.0 * inv * inv - 15.0 * inv * inv * inv;
    (x - y2).exp() * series / (y * PI.sqrt())
}

/// `I(τ,Z) = ∫₀^∞ 𝒢(τ,Z;Z′) e^{−Z′} dZ′` in closed form.
pub fn exp_source_spatial(tau: f64, z: f64) -> f64 {
    if tau <= 0.0 {
        return if z > 0.0 { (-z).exp() } else { 0.0 };
    }
    let s = tau.sqrt();
    let a = (2.0 * tau - z) / (2.0 * s);
    let b = (2.0 * tau + z) / (2.0 * s);
    0.5 * (exp_erfc(tau - z, a) - exp_erfc(tau + z, b))
}

/// `∂_Z I(τ,Z)`.
pub fn exp_source_spatial_dz(tau: f64, z: f64) -> f64 {
    if tau <= 0.0 {
        return -(-z).exp();
    }
    let s = tau.sqrt();
    let a = (2.0 * tau - z) / (2.0 * s);
    let b = (2.0 * tau + z) / (2.0 * s);
    -0.5 * (exp_erfc(tau - z, a) + exp_erfc(tau + z, b)) + (-z * z / (4.0 * tau)).exp() / (PI * tau).sqrt()
}

/// Integrand in `σ` for `D`: `2σ·I(σ², Z)`.
fn integrand_value(sigma: f64, z: f64) -> f64 {
    if sigma == 0.0 {
        0.0
    } else {
        2.0 * sigma * exp_source_spatial(sigma * sigma, z)
    }
}

/// Integrand in `σ` for `∂_Z D`: `2σ·∂_Z I(σ², Z)`, bounded as `σ → 0`.
fn integrand_dz(sigma: f64, z: f64) -> f64 {
    if sigma == 0.0 {
        return if z == 0.0 { 2.0 / PI.sqrt() } else { 0.0 };
    }
    let tau = sigma * sigma;
    let a = (2.0 * tau - z) / (2.0 * sigma);
    let b = (2.0 * tau + z) / (2.0 * sigma);
    -sigma * (exp_erfc(tau - z, a) + exp_erfc(tau + z, b))
        + 2.0 * (-z * z / (4.0 * tau)).exp() / PI.sqrt()
}

/// Which quantity a cumulative sweep integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DuhamelQuantity {
    /// `D(t,Z)`.
    Value,
    /// `∂_Z D(t,Z)`.
    ZDerivative,
}

/// `D(t_k, Z)` (or `∂_Z D`) for every `t_k` in `times`, in input order,
/// from one cumulative Simpson sweep in `σ = √(t−s)`.
pub fn duhamel_exponential_many(times: &[f64], z: f64, what: DuhamelQuantity) -> Result<Vec<f64>> {
    if z < 0.0 || !z.is_finite() {
        return domain(format!("Duhamel integral needs Z >= 0, got {z}"));
    }
    if let Some(t) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
        return domain(format!("Duhamel integral needs t >= 0, got {t}"));
    }
    let f = |s: f64| match what {
        DuhamelQuantity::Value => integrand_value(s, z),
        DuhamelQuantity::ZDerivative => integrand_dz(s, z),
    };
    let mut order: Vec<usize> = (0..times.len()).collect();
    order.sort_by(|&i, &j| times[i].total_cmp(&times[j]));
    let mut out = vec![0.0; times.len()];
    let scale_floor = z.max(MIN_SCALE);
    let (mut sigma, mut f_sigma, mut acc) = (0.0_f64, f(0.0), 0.0);
    for &k in &order {
        let target = times[k].sqrt();
        while sigma < target {
            let h = (sigma.max(scale_floor) / PANELS_PER_SCALE).min(MAX_PANEL);
            let next = (sigma + h).min(target);
            // avoid a sliver panel just below the target
            let next = if target - next < 0.25 * h { target } else { next };
            let f_next = f(next);
            let mid = f(0.5 * (sigma + next));
            acc += (next - sigma) / 6.0 * (f_sigma + 4.0 * mid + f_next);
            sigma = next;
            f_sigma = f_next;
        }
        out[k] = acc;
    }
    Ok(out)
}

/// `D(t,X)` for the source `e^{−|X|}` on one half-line.
///
/// `decay_sign = +1` is the half-line `X ≥ 0` (source `e^{−X}`); `−1` is
/// `X ≤ 0` (source `e^{X}`), which by reflection equals `D(t, −X)`.
pub fn duhamel_exponential(t: f64, x: f64, decay_sign: i32) -> Result<f64> {
    let z = oriented(x, decay_sign)?;
    Ok(duhamel_exponential_many(&[t], z, DuhamelQuantity::Value)?[0])
}

/// `∂_Z D(t,Z)` on the half-line `Z ≥ 0`.
pub fn duhamel_exponential_dz(t: f64, z: f64) -> Result<f64> {
    Ok(duhamel_exponential_many(&[t], z, DuhamelQuantity::ZDerivative)?[0])
}

fn oriented(x: f64, decay_sign: i32) -> Result<f64> {
    match decay_sign {
        1 if x >= 0.0 => Ok(x),
        -1 if x <= 0.0 => Ok(-x),
        1 | -1 => domain(format!("X = {x} is outside the half-line of decay_sign {decay_sign}")),
        _ => domain(format!("decay_sign must be ±1, got {decay_sign}")),
    }
}

/// The unit wall profile `Φ(t,Z) = e^{−Z} + D(t,Z)`: the solution of the
/// half-line heat equation with `Φ(t,0) = 1` and `Φ(0,Z) = e^{−Z}`.
pub fn unit_wall_profile(t: f64, z: f64) -> Result<f64> {
    Ok((-z).exp() + duhamel_exponential(t, z, 1)?)
}
