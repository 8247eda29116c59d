//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use layerflow::data::{InitialData, Jet1, Jet2};
use layerflow::numerics::Side;

/// Composite Simpson on `[a, b]` with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    assert!(n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// Crank–Nicolson for `φ_t = φ_ZZ + src(Z)` on `[0, len]`, `φ(0)=left`,
/// `φ(len)=right`, from `init`; returns nodes and values at `t`.
pub fn heat_cn(
    init: impl Fn(f64) -> f64,
    src: impl Fn(f64) -> f64,
    left: f64,
    right: f64,
    len: f64,
    n: usize,
    t: f64,
    steps: usize,
) -> (Vec<f64>, Vec<f64>) {
    let h = len / n as f64;
    let dt = t / steps as f64;
    let zs: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
    let mut u: Vec<f64> = zs.iter().map(|&z| init(z)).collect();
    u[0] = left;
    u[n] = right;
    let r = dt / (h * h);
    let m = n - 1;
    for _ in 0..steps {
        let mut rhs = vec![0.0; m];
        for i in 1..n {
            rhs[i - 1] = u[i] + 0.5 * r * (u[i - 1] - 2.0 * u[i] + u[i + 1]) + dt * src(zs[i]);
        }
        rhs[0] += 0.5 * r * left;
        rhs[m - 1] += 0.5 * r * right;
        // Thomas with constant coefficients
        let (a, b) = (-0.5 * r, 1.0 + r);
        let mut c = vec![0.0; m];
        let mut d = vec![0.0; m];
        c[0] = a / b;
        d[0] = rhs[0] / b;
        for i in 1..m {
            let den = b - a * c[i - 1];
            c[i] = a / den;
            d[i] = (rhs[i] - a * d[i - 1]) / den;
        }
        let mut x = vec![0.0; m];
        x[m - 1] = d[m - 1];
        for i in (0..m - 1).rev() {
            x[i] = d[i] - c[i] * x[i + 1];
        }
        u[1..n].copy_from_slice(&x);
    }
    (zs, u)
}

/// Linear interpolation on sorted nodes.
pub fn lerp(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let k = xs.partition_point(|&v| v <= x).clamp(1, xs.len() - 1) - 1;
    let w = (x - xs[k]) / (xs[k + 1] - xs[k]);
    ys[k] * (1.0 - w) + ys[k + 1] * w
}

pub fn gaussian_jump() -> InitialData {
    layerflow::study::default_initial_data("gaussian-jump").unwrap()
}

/// Smooth data without a jump, for solver tests (not validated).
pub fn smooth_data(u_wall: f64) -> InitialData {
    InitialData::new(
        "smooth",
        move |z: f64| {
            let e = (-z).exp();
            Jet1 { f: u_wall * e, d1: -u_wall * e, d2: u_wall * e }
        },
        |_: Side, x: f64, z: f64| {
            let g = (-x * x).exp() * (-(z - 1.0) * (z - 1.0)).exp();
            Jet2 { f: g, fx: -2.0 * x * g, fz: -2.0 * (z - 1.0) * g, fxx: (4.0 * x * x - 2.0) * g, fxz: 4.0 * x * (z - 1.0) * g, fzz: (4.0 * (z - 1.0) * (z - 1.0) - 2.0) * g }
        },
    )
}
