//! Built-in initial data.

use crate::data::{InitialData, Jet1, Jet2};
use crate::error::{Error, Result};
use crate::numerics::Side;

/// Names accepted by [`default_initial_data`].
pub const PRESETS: [&str; 3] = ["gaussian-jump", "no-jump", "kinked-jump"];

fn exp_decay(z: f64) -> Jet1 {
    let e = (-z).exp();
    Jet1 { f: e, d1: -e, d2: e }
}

/// `c·e^{−x²}·e^{−z}` with derivatives.
fn gaussian(c: f64, x: f64, z: f64) -> Jet2 {
    let g = c * (-x * x).exp() * (-z).exp();
    Jet2 {
        f: g,
        fx: -2.0 * x * g,
        fz: -g,
        fxx: (4.0 * x * x - 2.0) * g,
        fxz: 2.0 * x * g,
        fzz: g,
    }
}

/// Looks up and validates a preset.
///
/// - `gaussian-jump`: `u0 = e^{−z}`, `v0_± = ±e^{−x²}e^{−z}`.
/// - `no-jump`: equal sides; rejected (no jump across `x = 0`).
/// - `kinked-jump`: `v0_± = ±(1 + x)e^{−x²}e^{−z}`; rejected (the
///   x-derivative jumps across `x = 0`).
pub fn default_initial_data(preset: &str) -> Result<InitialData> {
    match preset {
        "gaussian-jump" => InitialData::validated(preset, exp_decay, |s: Side, x, z| gaussian(s.sign(), x, z)),
        "no-jump" => InitialData::validated(preset, exp_decay, |_, x, z| gaussian(1.0, x, z)),
        "kinked-jump" => InitialData::validated(preset, exp_decay, |s: Side, x, z| {
            let g = gaussian(s.sign(), x, z);
            // (1 + x)·g
            Jet2 {
                f: (1.0 + x) * g.f,
                fx: g.f + (1.0 + x) * g.fx,
                fz: (1.0 + x) * g.fz,
                fxx: 2.0 * g.fx + (1.0 + x) * g.fxx,
                fxz: g.fz + (1.0 + x) * g.fxz,
                fzz: (1.0 + x) * g.fzz,
            }
        }),
        other => Err(Error::Config(format!(
            "unknown preset '{other}' (known: {})",
            PRESETS.join(", ")
        ))),
    }
}
