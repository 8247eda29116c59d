//! Residuals of the Ansatz in the depleted system.
//!
//! With `u_app`, `v_app` as assembled in [`crate::flow::ansatz`],
//!
//! ```text
//! E^u = ε∂_z²u_app − ∂_t u_app                      = ε∂_z²u0
//! E^v = εΔ^ψ v_app − ∂_t v_app − U_P ∂_x v_app
//! ```
//!
//! and the profile equations reduce `E^v` to a finite list of terms, which
//! [`compute_ev`] evaluates one by one. [`direct_ev`] differences `v_app`
//! itself and serves as a transcription check.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::flow::ansatz::{assemble_ansatz, assemble_u_app, AnsatzField};
use crate::numerics::duhamel::DuhamelQuantity;
use crate::numerics::fd::{fd_derivative, Axis};
use crate::numerics::remap::remap_two_sided;
use crate::numerics::{fd_derivative_1d, Field1D, Grid1D, Grid2D, LpIntegrable, Pchip, TwoSidedField2D};
use crate::profiles::{kh_duhamel_table, wall_profile_at, ProfileSet, FAST_CUTOFF};

/// `E^u = ε∂_z²u0`.
pub fn compute_eu(u0: &Field1D, epsilon: f64) -> Result<Field1D> {
    Ok(fd_derivative_1d(u0, 2)?.scale(epsilon))
}

/// `ε∂_z²u_app − ∂_t u_app` by central differences in `t` (step `delta`).
pub fn direct_eu(profiles: &ProfileSet, epsilon: f64, t: f64, delta: f64, grid_z: Arc<Grid1D>) -> Result<Field1D> {
    let up = assemble_u_app(profiles, epsilon, t + delta, grid_z.clone())?;
    let um = assemble_u_app(profiles, epsilon, t - delta, grid_z.clone())?;
    let u = assemble_u_app(profiles, epsilon, t, grid_z)?;
    let uzz = fd_derivative_1d(&u, 2)?;
    let ut = up.zip_with(&um, |a, b| (a - b) / (2.0 * delta))?;
    uzz.zip_with(&ut, |l, d| epsilon * l - d)
}

/// Names of the terms of `E^v`, in reporting order.
pub const EV_TERMS: [&str; 12] = [
    "eps_laplacian_v0",
    "vb_operator_difference",
    "vkh_mixed",
    "vkh_curvature",
    "vkh_z_diffusion",
    "vp_x_diffusion",
    "vp_mixed",
    "vp_curvature",
    "transport_v0",
    "transport_vp",
    "transport_vkh",
    "transport_vb",
];

/// `E^v` at one time with its terms.
#[derive(Debug, Clone)]
pub struct EvResult {
    pub t: f64,
    pub total: TwoSidedField2D,
    /// One field per entry of [`EV_TERMS`].
    pub terms: Vec<TwoSidedField2D>,
}

impl EvResult {
    /// `L^p` norms of the terms, in [`EV_TERMS`] order.
    pub fn term_norms(&self, p: f64) -> Result<Vec<f64>> {
        self.terms.iter().map(|f| f.lp_norm(p)).collect()
    }
}

/// Evaluates `E^v` at a store time on `mesh`.
pub fn compute_ev(profiles: &ProfileSet, epsilon: f64, t: f64, mesh: &Arc<Grid2D>) -> Result<EvResult> {
    let ansatz = assemble_ansatz(profiles, epsilon, t, mesh)?;
    compute_ev_from(profiles, &ansatz)
}

/// Like [`compute_ev`] but reuses an assembled Ansatz.
pub fn compute_ev_from(profiles: &ProfileSet, ansatz: &AnsatzField) -> Result<EvResult> {
    let (epsilon, t) = (ansatz.epsilon, ansatz.t);
    let mesh = &ansatz.v_app.grid;
    let kh = profiles
        .vkh
        .at(t)
        .ok_or_else(|| Error::Domain(format!("time {t} is not a profile store time")))?;
    let vb = profiles
        .vb
        .at(t)
        .ok_or_else(|| Error::Domain(format!("time {t} is not a profile store time")))?;
    let data = &profiles.data;
    let geom = &profiles.geometry;
    let se = epsilon.sqrt();
    let zs = mesh.z.nodes();
    let xs = mesh.x.nodes();
    let a: Vec<f64> = zs.iter().map(|&z| geom.psi_z(t, z)).collect();
    let b: Vec<f64> = zs.iter().map(|&z| geom.psi_zz(t, z)).collect();
    let a0 = geom.psi_z0(t);
    let up = &ansatz.components.up.values;
    let (phi, dphi) = (&ansatz.components.phi, &ansatz.components.dphi);

    let kx = fd_derivative(kh, Axis::X, 1)?;
    let kxz = fd_derivative(&kx, Axis::Z, 1)?;
    let kzz = fd_derivative(kh, Axis::Z, 2)?;
    let bx = fd_derivative(vb, Axis::X, 1)?;
    let bxx = fd_derivative(vb, Axis::X, 2)?;
    let bxz = fd_derivative(&bx, Axis::Z, 1)?;
    let to_mesh_kh = |f: &TwoSidedField2D| remap_two_sided(f, 1.0 / se, 1.0, mesh);
    let to_mesh_b = |f: &TwoSidedField2D| remap_two_sided(f, 1.0 / se, 1.0 / se, mesh);
    let (kx, kxz, kzz) = (to_mesh_kh(&kx), to_mesh_kh(&kxz), to_mesh_kh(&kzz));
    let (bx, bxx, bxz) = (to_mesh_b(&bx), to_mesh_b(&bxx), to_mesh_b(&bxz));

    let wall = |side, ix: usize| data.v0(side, xs[ix], 0.0);
    let build = |f: &dyn Fn(crate::numerics::Side, usize, usize) -> f64| TwoSidedField2D::from_indexed(mesh.clone(), f);

    let lap_v0 = build(&|s, ix, iz| {
        let j = data.v0(s, xs[ix], zs[iz]);
        epsilon * ((1.0 + a[iz] * a[iz]) * j.fxx - 2.0 * a[iz] * j.fxz - b[iz] * j.fx + j.fzz)
    });
    let mut vb_op = bxx.scale_rows(&a.iter().map(|ai| ai * ai - a0 * a0).collect::<Vec<_>>());
    vb_op.add_scaled(1.0, &bxz.scale_rows(&a.iter().map(|ai| -2.0 * (ai - a0)).collect::<Vec<_>>()));
    vb_op.add_scaled(1.0, &bx.scale_rows(&b.iter().map(|bi| -se * bi).collect::<Vec<_>>()));
    let kh_mixed = kxz.scale_rows(&a.iter().map(|ai| -2.0 * se * ai).collect::<Vec<_>>());
    let kh_curv = kx.scale_rows(&b.iter().map(|bi| -se * bi).collect::<Vec<_>>());
    let kh_zz = kzz.scale(epsilon);
    let vp_xx = build(&|s, ix, iz| -epsilon * (1.0 + a[iz] * a[iz]) * wall(s, ix).fxx * phi[iz]);
    let vp_mixed = build(&|s, ix, iz| 2.0 * se * a[iz] * wall(s, ix).fx * dphi[iz]);
    let vp_curv = build(&|s, ix, iz| epsilon * b[iz] * wall(s, ix).fx * phi[iz]);
    let tr_v0 = build(&|s, ix, iz| -up[iz] * data.v0(s, xs[ix], zs[iz]).fx);
    let tr_vp = build(&|s, ix, iz| up[iz] * wall(s, ix).fx * phi[iz]);
    let tr_kh = kx.scale_rows(&up.iter().map(|u| -u / se).collect::<Vec<_>>());
    let tr_vb = bx.scale_rows(&up.iter().map(|u| -u / se).collect::<Vec<_>>());

    let terms = vec![
        lap_v0, vb_op, kh_mixed, kh_curv, kh_zz, vp_xx, vp_mixed, vp_curv, tr_v0, tr_vp, tr_kh, tr_vb,
    ];
    let mut total = TwoSidedField2D::zeros(mesh.clone());
    for f in &terms {
        total.add_scaled(1.0, f);
    }
    total.sync_interface();
    Ok(EvResult { t, total, terms })
}

/// `εΔ^ψ v_app − ∂_t v_app − U_P∂_x v_app` by finite differences of the
/// assembled `v_app` on `mesh` (central in time with step `delta`).
pub fn direct_ev(profiles: &ProfileSet, epsilon: f64, t: f64, delta: f64, mesh: &Arc<Grid2D>) -> Result<TwoSidedField2D> {
    if !(delta > 0.0) || t - delta < 0.0 {
        return domain(format!("time difference {delta} around {t} leaves [0, T]"));
    }
    let now = assemble_ansatz(profiles, epsilon, t, mesh)?;
    let next = assemble_ansatz(profiles, epsilon, t + delta, mesh)?;
    let prev = assemble_ansatz(profiles, epsilon, t - delta, mesh)?;
    let v = &now.v_app;
    let vt = next.v_app.axpby(0.5 / delta, &prev.v_app, -0.5 / delta)?;
    let vx = fd_derivative(v, Axis::X, 1)?;
    let vxx = fd_derivative(v, Axis::X, 2)?;
    let vxz = fd_derivative(&vx, Axis::Z, 1)?;
    let vzz = fd_derivative(v, Axis::Z, 2)?;
    let geom = &profiles.geometry;
    let zs = mesh.z.nodes();
    let a: Vec<f64> = zs.iter().map(|&z| geom.psi_z(t, z)).collect();
    let b: Vec<f64> = zs.iter().map(|&z| geom.psi_zz(t, z)).collect();
    let mut out = vxx.scale_rows(&a.iter().map(|ai| epsilon * (1.0 + ai * ai)).collect::<Vec<_>>());
    out.add_scaled(1.0, &vxz.scale_rows(&a.iter().map(|ai| -2.0 * epsilon * ai).collect::<Vec<_>>()));
    let up = &now.components.up.values;
    out.add_scaled(
        1.0,
        &vx.scale_rows(&b.iter().zip(up).map(|(bi, u)| -epsilon * bi - u).collect::<Vec<_>>()),
    );
    out.add_scaled(epsilon, &vzz);
    out.add_scaled(-1.0, &vt);
    out.sync_interface();
    Ok(out)
}

/// `L^p_{x,z}` norm of `ε^{-1/2} U_P(t, z/√ε) ∂_X V_KH(t, x/√ε, z)`, computed in
/// fast variables: `ε^{1−p/2} ∫∫ |U_P(Z) ∂_X V_KH(X, √εZ)|^p dX dZ`.
pub fn singular_term_norm(profiles: &ProfileSet, epsilon: f64, t: f64, p: f64) -> Result<f64> {
    if !(p > 1.0) || !p.is_finite() {
        return domain(format!("norm exponent p = {p} must lie in (1, ∞)"));
    }
    if !(epsilon > 0.0) {
        return domain(format!("viscosity must be positive, got {epsilon}"));
    }
    let data = &profiles.data;
    let geom = &profiles.geometry;
    let zgrid = &profiles.up.snapshots[0].grid;
    let xgrid = &profiles.vkh.snapshots[0].grid.x;
    let zf = zgrid.nodes();
    let (phi, _) = wall_profile_at(t, zf)?;
    let u_wall = data.u0(0.0).f;
    let zs: Vec<f64> = zf.iter().map(|z| z * epsilon.sqrt()).collect();
    let xs_abs: Vec<f64> = xgrid.nodes().iter().map(|x| x.abs()).collect();
    let dz = kh_duhamel_table(geom, &[t], &zs, &xs_abs, FAST_CUTOFF, DuhamelQuantity::ZDerivative)?;
    let wx = xgrid.trapezoid_weights();
    let wz = zgrid.trapezoid_weights();
    let mut total = 0.0;
    for (k, &z) in zs.iter().enumerate() {
        let up = (u_wall * phi[k]).abs();
        if up == 0.0 || wz[k] == 0.0 {
            continue;
        }
        let half = 0.5 * data.jump_v0(z);
        let row: f64 = xs_abs
            .iter()
            .zip(&wx)
            .enumerate()
            .map(|(j, (&x, &w))| {
                let d = if x > FAST_CUTOFF { 0.0 } else { half * ((-x).exp() - dz[0][k][j]) };
                w * (up * d).abs().powf(p)
            })
            .sum();
        total += wz[k] * row;
    }
    Ok((epsilon.powf(1.0 - 0.5 * p) * total).powf(1.0 / p))
}

/// Compares `‖f(·/√ε)‖_{L^p}` on `physical` with `ε^{1/(2p)}‖f‖_{L^p}`.
/// Returns `(measured, predicted)`.
pub fn scaling_check(f: &Field1D, epsilon: f64, p: f64, physical: Arc<Grid1D>) -> Result<(f64, f64)> {
    if !(epsilon > 0.0) {
        return domain(format!("viscosity must be positive, got {epsilon}"));
    }
    let interp = Pchip::new(f.grid.nodes(), &f.values);
    let se = epsilon.sqrt();
    let g = Field1D::from_fn(physical, |z| interp.eval(z / se).unwrap_or(0.0));
    Ok((g.lp_norm(p)?, epsilon.powf(0.5 / p) * f.lp_norm(p)?))
}

/// Integral over `[t_0, t_n]` from samples: composite Simpson when the
/// samples are uniform with an even number of intervals, else trapezoid.
pub fn time_integral(times: &[f64], values: &[f64]) -> f64 {
    let n = times.len();
    if n < 2 {
        return 0.0;
    }
    let h = times[1] - times[0];
    let uniform = times.windows(2).all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs().max(1e-300));
    if uniform && (n - 1) % 2 == 0 {
        let mut s = values[0] + values[n - 1];
        for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
            s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
        }
        s * h / 3.0
    } else {
        times
            .windows(2)
            .zip(values.windows(2))
            .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
            .sum()
    }
}

/// Per-time residual norms for one `ε`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub epsilon: f64,
    pub p: f64,
    pub times: Vec<f64>,
    /// `‖E^u(t)‖_{L²_z}`.
    pub eu_l2: Vec<f64>,
    /// `‖E^v(t)‖_{L^p_{x,z}}`.
    pub ev_lp: Vec<f64>,
    /// `∫₀^T ‖E^v‖^p dt`.
    pub ev_integral: f64,
    /// Norm of the singular transport term per time.
    pub singular: Vec<f64>,
    /// Per-term norms: `breakdown[i][k]` is term `EV_TERMS[i]` at `times[k]`.
    pub breakdown: Vec<Vec<f64>>,
}

impl ResidualReport {
    pub fn term_names() -> &'static [&'static str] {
        &EV_TERMS
    }
}

/// Evaluates all residual norms at the profile store times.
pub fn residual_report(profiles: &ProfileSet, epsilon: f64, p: f64, mesh: &Arc<Grid2D>) -> Result<ResidualReport> {
    let mut rep = ResidualReport {
        epsilon,
        p,
        times: profiles.store_times.clone(),
        eu_l2: Vec::new(),
        ev_lp: Vec::new(),
        ev_integral: 0.0,
        singular: Vec::new(),
        breakdown: vec![Vec::new(); EV_TERMS.len()],
    };
    let u0 = profiles.data.u0_field(Arc::new(mesh.z.clone()));
    let eu = compute_eu(&u0, epsilon)?.lp_norm(2.0)?;
    for &t in &profiles.store_times {
        let ev = compute_ev(profiles, epsilon, t, mesh)?;
        rep.eu_l2.push(eu);
        rep.ev_lp.push(ev.total.lp_norm(p)?);
        for (i, n) in ev.term_norms(p)?.into_iter().enumerate() {
            rep.breakdown[i].push(n);
        }
        rep.singular.push(singular_term_norm(profiles, epsilon, t, p)?);
    }
    let powers: Vec<f64> = rep.ev_lp.iter().map(|v| v.powf(p)).collect();
    rep.ev_integral = time_integral(&rep.times, &powers);
    Ok(rep)
}
