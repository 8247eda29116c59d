//! Fast self-checks of the numerical building blocks.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::presets::default_initial_data;
use crate::data::InterfaceGeometry;
use crate::error::Result;
use crate::flow::{assemble_ansatz, MeshConfig, physical_mesh};
use crate::numerics::{heat_kernel_halfline, unit_wall_profile, Field1D, Grid1D, LpIntegrable};
use crate::profiles::{solve_up, ProfileConfig, ProfileMethod, ProfileSet};
use crate::residuals::{compute_ev, direct_ev, scaling_check};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &str, passed: bool, detail: String) -> VerifyOutcome {
    VerifyOutcome {
        name: name.into(),
        passed,
        detail,
    }
}

/// A reduced profile configuration for quick checks.
pub fn quick_profile_config() -> ProfileConfig {
    ProfileConfig {
        t_end: 0.5,
        store_times: vec![0.25, 0.5],
        fast_h: 1.0 / 16.0,
        fast_length: 14.0,
        slow_h: 1.0 / 32.0,
        slow_length_x: 6.0,
        slow_length_z: 6.0,
        box_input_samples: 64,
        monitor_samples: 4,
        ..ProfileConfig::default()
    }
}

/// Runs every check; an `Err` means a check could not be evaluated at all.
pub fn run_verify_suite() -> Result<Vec<VerifyOutcome>> {
    let mut out = Vec::new();

    let k = heat_kernel_halfline(0.3, 0.0, 1.2)?;
    out.push(outcome("kernel_wall_zero", k.abs() < 1e-15, format!("G(0.3, 0; 1.2) = {k:e}")));

    let phi0 = unit_wall_profile(0.7, 0.0)?;
    out.push(outcome("wall_profile_unit", (phi0 - 1.0).abs() < 1e-12, format!("Φ(0.7, 0) = {phi0}")));

    let g = Arc::new(Grid1D::half_line(40.0, 1.0 / 256.0)?);
    let e = Field1D::from_fn(g.clone(), |z| (-z).exp());
    let p = 1.5;
    let (n, exact) = (e.lp_norm(p)?, (1.0 / p).powf(1.0 / p));
    out.push(outcome("lp_norm_exponential", (n - exact).abs() < 1e-5, format!("{n} vs {exact}")));

    let (measured, predicted) = scaling_check(&e, 1e-3, p, Arc::new(Grid1D::half_line(2.0, 1e-4)?))?;
    let rel = (measured / predicted - 1.0).abs();
    out.push(outcome("boundary_layer_scaling", rel < 1e-3, format!("relative difference {rel:.2e}")));

    let zg = Arc::new(Grid1D::half_line(16.0, 1.0 / 32.0)?);
    let exact = solve_up(1.0, 0.5, zg.clone(), &[0.5], ProfileMethod::Duhamel)?;
    let fd = solve_up(1.0, 0.5, zg, &[0.5], ProfileMethod::Implicit { dt: 1e-4 })?;
    let diff = exact.snapshots[1].zip_with(&fd.snapshots[1], |a, b| a - b)?.max_abs();
    out.push(outcome("duhamel_vs_implicit", diff < 2e-3, format!("max difference {diff:.2e}")));

    let data = default_initial_data("gaussian-jump")?;
    let geom = InterfaceGeometry::from_data(&data);
    let (t, z) = (0.8, 0.3);
    let d = data.u0(z).d1;
    // composite Simpson, exact for the quadratic integrand
    let f = |s: f64| 1.0 + s * s * d * d;
    let n_q = 64;
    let hq = t / n_q as f64;
    let quad = hq / 3.0
        * (0..=n_q)
            .map(|i| {
                let w = if i == 0 || i == n_q { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                w * f(i as f64 * hq)
            })
            .sum::<f64>();
    let tt = geom.t_tilde(t, z);
    out.push(outcome("rescaled_time", (tt - quad).abs() < 1e-10, format!("{tt} vs quadrature {quad}")));

    let rejected = default_initial_data("no-jump");
    let ok = matches!(&rejected, Err(e) if e.to_string().contains("jump hypothesis"));
    out.push(outcome("no_jump_rejected", ok, format!("{:?}", rejected.err().map(|e| e.to_string()))));

    let profiles = ProfileSet::build(&data, &quick_profile_config())?;
    let eps = 1e-2;
    let mesh_cfg = MeshConfig {
        length_x: 4.0,
        length_z: 4.0,
        coarse_h: 1.0 / 32.0,
        ..MeshConfig::default()
    };
    let mesh = physical_mesh(&mesh_cfg, eps, -0.5)?;
    let ans = assemble_ansatz(&profiles, eps, 0.5, &mesh)?;
    let wall = ans.v_app.row(0).iter().fold(ans.u_app.values[0].abs(), |m, v| m.max(v.abs()));
    out.push(outcome("ansatz_wall_condition", wall < 1e-10, format!("max wall value {wall:.2e}")));
    let jump = ans.v_app.jump().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    out.push(outcome("ansatz_continuity", jump < 1e-8, format!("max interface jump {jump:.2e}")));

    let formula = compute_ev(&profiles, eps, 0.25, &mesh)?.total;
    let direct = direct_ev(&profiles, eps, 0.25, 1e-3, &mesh)?;
    let rel = direct.sub(&formula)?.lp_norm(p)? / formula.lp_norm(p)?;
    out.push(outcome("residual_formula_vs_direct", rel < 2e-2, format!("relative L^p difference {rel:.2e}")));
    Ok(out)
}
